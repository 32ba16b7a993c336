// Contour-figure rendering in the style of the solver's benchmark plots:
// line contours at caption-specified levels, dashed negatives, and an
// optional omitted zero contour.

import { contours } from "d3-contour";
import type { Field } from "./snapshot.js";

export interface PlotSpec {
  field: string;
  min: number;
  max: number;
  interval: number;
  dashed_negative?: boolean;
  omit_zero?: boolean;
  title?: string;
  cut_z?: number;
}

export function makeLevels(spec: PlotSpec): number[] {
  const { min, max, interval } = spec;
  if (!(interval > 0) || !isFinite(min) || !isFinite(max) || max < min) {
    throw new Error(`bad contour range [${min}, ${max}] step ${interval}`);
  }
  const n = Math.round((max - min) / interval);
  if (Math.abs(min + n * interval - max) > 1e-9 * Math.max(interval, 1)) {
    throw new Error(`interval ${interval} does not divide range [${min}, ${max}]`);
  }
  const levels: number[] = [];
  for (let j = 0; j <= n; j++) {
    const v = min + j * interval;
    if (spec.omit_zero && Math.abs(v) < 1e-12 * Math.max(Math.abs(min), Math.abs(max))) {
      continue;
    }
    levels.push(v);
  }
  return levels;
}

export interface Extent {
  xMin: number;
  xMax: number;
  zMin: number;
  zMax: number;
}

const W = 900;
const H = 360;
const PAD = 40;

function pathFrom(
  rings: number[][][][],
  ni: number,
  nk: number,
  ext: Extent,
): string {
  // d3-contour returns filled-region boundaries in grid units; drop the
  // segments that follow the domain edge so only true isolines remain,
  // and map to the SVG frame with z pointing up
  const sx = (W - 2 * PAD) / ni;
  const sz = (H - 2 * PAD) / nk;
  const eps = 1e-6;
  const onEdge = ([cx, cz]: number[]) =>
    cx < eps || cx > ni - eps || cz < eps || cz > nk - eps;
  const toSvg = ([cx, cz]: number[]) =>
    `${(PAD + cx * sx).toFixed(2)},${(H - PAD - cz * sz).toFixed(2)}`;

  const parts: string[] = [];
  for (const polygon of rings) {
    for (const ring of polygon) {
      let run: number[][] = [];
      const flush = () => {
        if (run.length >= 2) parts.push(`M${run.map(toSvg).join("L")}`);
        run = [];
      };
      for (let j = 0; j < ring.length; j++) {
        const p = ring[j];
        const q = ring[(j + 1) % ring.length];
        if (onEdge(p) && onEdge(q)) {
          if (run.length) run.push(p);
          flush();
        } else {
          run.push(p);
        }
      }
      if (run.length === ring.length) {
        parts.push(`M${run.map(toSvg).join("L")}Z`);  // interior closed loop
      } else {
        flush();
      }
    }
  }
  return parts.join("");
}

export function contourSVG(field: Field, spec: PlotSpec, ext: Extent): string {
  const levels = makeLevels(spec);
  const gen = contours().size([field.ni, field.nk]).smooth(true);
  let fmin = Infinity;
  let fmax = -Infinity;
  for (const v of field.values) {
    fmin = Math.min(fmin, v);
    fmax = Math.max(fmax, v);
  }
  const body: string[] = [];
  for (const lv of levels) {
    if (lv <= fmin || lv > fmax) continue;   // no isoline at this level
    const geo = gen.contour(Array.from(field.values), lv);
    const d = pathFrom(geo.coordinates as number[][][][], field.ni, field.nk, ext);
    if (!d) continue;
    const dash = spec.dashed_negative && lv < 0 ? ' stroke-dasharray="6,4"' : "";
    body.push(
      `<path d="${d}" fill="none" stroke="black" stroke-width="1"${dash} data-level="${lv}"/>`,
    );
  }
  const title = spec.title ?? `${spec.field} at levels [${spec.min}, ${spec.max}] step ${spec.interval}`;
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect x="${PAD}" y="${PAD}" width="${W - 2 * PAD}" height="${H - 2 * PAD}"` +
      ` fill="white" stroke="black" stroke-width="1"/>`,
    `<text x="${W / 2}" y="${PAD - 12}" text-anchor="middle" font-size="14">${title}</text>`,
    `<text x="${W / 2}" y="${H - 8}" text-anchor="middle" font-size="12">x: ${ext.xMin / 1e3} .. ${ext.xMax / 1e3} km</text>`,
    `<text x="12" y="${H / 2}" font-size="12" transform="rotate(-90 12 ${H / 2})" text-anchor="middle">z: ${ext.zMin / 1e3} .. ${ext.zMax / 1e3} km</text>`,
    ...body,
    `</svg>`,
  ].join("\n");
}

export function cutSVG(
  x: Float64Array | number[],
  values: Float64Array | number[],
  label: string,
): string {
  const n = values.length;
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  if (!(hi > lo)) {
    hi = lo + 1; // flat line: give the frame some height
  }
  const xs = (i: number) => PAD + ((W - 2 * PAD) * i) / (n - 1);
  const zs = (v: number) => H - PAD - ((H - 2 * PAD) * (v - lo)) / (hi - lo);
  const pts = Array.from(values, (v, i) => `${xs(i).toFixed(2)},${zs(v).toFixed(2)}`);
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect x="${PAD}" y="${PAD}" width="${W - 2 * PAD}" height="${H - 2 * PAD}"` +
      ` fill="white" stroke="black" stroke-width="1"/>`,
    `<text x="${W / 2}" y="${PAD - 12}" text-anchor="middle" font-size="14">${label}</text>`,
    `<text x="${PAD}" y="${H - 8}" font-size="11">min ${lo.toPrecision(5)}  max ${hi.toPrecision(5)}</text>`,
    `<polyline fill="none" stroke="black" stroke-width="1.2" points="${pts.join(" ")}"/>`,
    `</svg>`,
  ].join("\n");
}
