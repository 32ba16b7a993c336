// Figure renderer for solver snapshots.
//
//   plot contours --snap out/snap_t....bin --spec specs/bubble_final.json --out fig.svg
//   plot cut      --snap out/snap_t....bin --z 1200 [--field theta_prime] --out cut.svg
//
// Derived fields: theta (P/rho) and temp_prime (needs --meta out/meta.json
// plus --tref for the reference temperature).

import * as fs from "node:fs";
import * as path from "node:path";
import { contourSVG, cutSVG, makeLevels, type PlotSpec } from "./contours.js";
import {
  fieldRow,
  readMeta,
  readSnapshot,
  temperaturePerturbationField,
  thetaField,
  type Field,
  type Snapshot,
} from "./snapshot.js";

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`expected --key value pairs, got ${argv.slice(i).join(" ")}`);
    }
    out.set(key.slice(2), argv[i + 1]);
  }
  return out;
}

function resolveField(snap: Snapshot, name: string, args: Map<string, string>): Field {
  if (name === "theta") return thetaField(snap);
  if (name === "temp_prime") {
    const metaPath = args.get("meta");
    if (!metaPath) throw new Error("temp_prime needs --meta <meta.json>");
    const tref = parseFloat(args.get("tref") ?? "250.0");
    return temperaturePerturbationField(snap, readMeta(metaPath), tref);
  }
  const f = snap.fields.get(name);
  if (!f) throw new Error(`field ${name} not in snapshot (${[...snap.fields.keys()].join(", ")})`);
  return f;
}

function extentFor(snap: Snapshot, args: Map<string, string>) {
  const metaPath = args.get("meta");
  if (metaPath) {
    const m = readMeta(metaPath);
    return { xMin: 0, xMax: m.dx * snap.I, zMin: 0, zMax: m.dz * snap.K };
  }
  return { xMin: 0, xMax: snap.I, zMin: 0, zMax: snap.K };
}

export function main(argv: string[]): number {
  try {
    const [command, ...rest] = argv;
    if (command !== "contours" && command !== "cut") {
      process.stderr.write("usage: plot contours|cut --snap <file> ...\n");
      return 2;
    }
    const args = parseArgs(rest);
    const snapPath = args.get("snap");
    const outPath = args.get("out");
    if (!snapPath || !outPath) throw new Error("--snap and --out are required");
    const snap = readSnapshot(snapPath);

    let svg: string;
    if (command === "contours") {
      const specPath = args.get("spec");
      if (!specPath) throw new Error("contours needs --spec <json>");
      const spec = JSON.parse(fs.readFileSync(specPath, "utf-8")) as PlotSpec;
      makeLevels(spec); // validates range/interval
      const field = resolveField(snap, spec.field, args);
      svg = contourSVG(field, { ...spec, title: spec.title ?? `${spec.field}  t=${snap.t}s` },
                       extentFor(snap, args));
    } else {
      const name = args.get("field") ?? "theta_prime";
      const z = parseFloat(args.get("z") ?? "NaN");
      if (!isFinite(z)) throw new Error("cut needs --z <meters>");
      const field = resolveField(snap, name, args);
      const metaPath = args.get("meta");
      const dz = metaPath ? readMeta(metaPath).dz : 1.0;
      const zTop = dz * field.nk;
      if (z < 0 || z > zTop) throw new Error(`z=${z} outside the domain [0, ${zTop}]`);
      const k = Math.min(field.nk - 1, Math.max(0, Math.round(z / dz - 0.5)));
      svg = cutSVG(new Float64Array(field.ni), fieldRow(field, k),
                   `${name} cut at z=${z} m (row ${k}), t=${snap.t}s`);
    }
    fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
    fs.writeFileSync(outPath, svg);
    process.stdout.write(`${outPath}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
