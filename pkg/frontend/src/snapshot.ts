// Reader for the solver's flat-binary snapshot files.
//
// A file is a sequence of sections.  Each section is an ASCII header line
//   AFVM1 <field> <I> <K> <time_s>\n
// followed by little-endian float64 values, row-major with k (z) outer.
// Cell sections hold I*K values; the node section pi_prime_nodes holds
// (I+1)*(K+1) values including the aliased periodic column.

import * as fs from "node:fs";

export interface Field {
  name: string;
  ni: number; // values per row (x)
  nk: number; // rows (z)
  values: Float64Array; // row-major, k outer
}

export interface Snapshot {
  I: number;
  K: number;
  t: number;
  fields: Map<string, Field>;
}

const MAGIC = "AFVM1";
const NODE_FIELD = "pi_prime_nodes";

export function parseSnapshot(buf: Buffer): Snapshot {
  const fields = new Map<string, Field>();
  let I = -1;
  let K = -1;
  let t = NaN;
  let off = 0;
  while (off < buf.length) {
    const nl = buf.indexOf(0x0a, off);
    if (nl < 0) throw new Error(`missing header terminator at offset ${off}`);
    const header = buf.subarray(off, nl).toString("ascii");
    const parts = header.split(/\s+/);
    if (parts.length !== 5 || parts[0] !== MAGIC) {
      throw new Error(`bad section header: ${JSON.stringify(header)}`);
    }
    const name = parts[1];
    const i = parseInt(parts[2], 10);
    const k = parseInt(parts[3], 10);
    const time = parseFloat(parts[4]);
    if (I < 0) {
      I = i;
      K = k;
      t = time;
    } else if (i !== I || k !== K || time !== t) {
      throw new Error("inconsistent section metadata");
    }
    const ni = name === NODE_FIELD ? i + 1 : i;
    const nk = name === NODE_FIELD ? k + 1 : k;
    const bytes = 8 * ni * nk;
    const start = nl + 1;
    if (start + bytes > buf.length) throw new Error(`truncated section ${name}`);
    // copy so the typed array is aligned and independent of the file buffer
    const section = Buffer.from(buf.subarray(start, start + bytes));
    const values = new Float64Array(section.buffer, section.byteOffset, ni * nk);
    fields.set(name, { name, ni, nk, values });
    off = start + bytes;
  }
  if (I < 0) throw new Error("empty snapshot");
  return { I, K, t, fields };
}

export function readSnapshot(path: string): Snapshot {
  return parseSnapshot(fs.readFileSync(path));
}

export interface RunMeta {
  constants: { R: number; c_p: number; p_ref: number; g: number; f: number };
  case: string;
  dx: number;
  dz: number;
  nx: number;
  nz: number;
}

export function readMeta(path: string): RunMeta {
  const doc = JSON.parse(fs.readFileSync(path, "utf-8"));
  const r = doc.resolved;
  return {
    constants: r.constants,
    case: r.case,
    dx: r.dx,
    dz: r.dz,
    nx: r.nx,
    nz: r.nz,
  };
}

export function fieldRow(f: Field, k: number): Float64Array {
  if (k < 0 || k >= f.nk) throw new Error(`row ${k} outside 0..${f.nk - 1}`);
  return f.values.subarray(k * f.ni, (k + 1) * f.ni);
}

// Derived reader-side diagnostics (equation-of-state lookups only).

export function thetaField(snap: Snapshot): Field {
  const P = snap.fields.get("P");
  const rho = snap.fields.get("rho");
  if (!P || !rho) throw new Error("snapshot lacks P/rho sections");
  const values = new Float64Array(P.values.length);
  for (let j = 0; j < values.length; j++) values[j] = P.values[j] / rho.values[j];
  return { name: "theta", ni: P.ni, nk: P.nk, values };
}

export function temperaturePerturbationField(
  snap: Snapshot,
  meta: RunMeta,
  tRef: number,
): Field {
  // T = Theta * pi with pi = (R P / p_ref)^(R/cv); T' = T - tRef
  const P = snap.fields.get("P");
  const rho = snap.fields.get("rho");
  if (!P || !rho) throw new Error("snapshot lacks P/rho sections");
  const { R, c_p, p_ref } = meta.constants;
  const cv = c_p - R;
  const values = new Float64Array(P.values.length);
  for (let j = 0; j < values.length; j++) {
    const pi = Math.pow((R * P.values[j]) / p_ref, R / cv);
    values[j] = (P.values[j] / rho.values[j]) * pi - tRef;
  }
  return { name: "temp_prime", ni: P.ni, nk: P.nk, values };
}
