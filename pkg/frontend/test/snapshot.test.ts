import { describe, expect, it } from "vitest";
import { fieldRow, parseSnapshot } from "../src/snapshot.js";

function section(name: string, I: number, K: number, t: number, values: number[]): Buffer {
  const header = Buffer.from(`AFVM1 ${name} ${I} ${K} ${t}\n`, "ascii");
  const data = Buffer.alloc(8 * values.length);
  values.forEach((v, j) => data.writeDoubleLE(v, 8 * j));
  return Buffer.concat([header, data]);
}

function syntheticSnapshot(): { buf: Buffer; rho: number[] } {
  const I = 3;
  const K = 2;
  // row-major with k outer: [k0: x0 x1 x2, k1: x0 x1 x2]
  const rho = [1.0, 1.25, 1.5, 2.0, 2.25, 2.5];
  const P = rho.map((v) => 300 * v);
  const nodes = Array.from({ length: (I + 1) * (K + 1) }, (_, j) => j * 1e-6);
  const buf = Buffer.concat([
    section("rho", I, K, 12.5, rho),
    section("P", I, K, 12.5, P),
    section("pi_prime_nodes", I, K, 12.5, nodes),
  ]);
  return { buf, rho };
}

describe("snapshot parser", () => {
  it("round-trips values, shapes, and time", () => {
    const { buf, rho } = syntheticSnapshot();
    const snap = parseSnapshot(buf);
    expect(snap.I).toBe(3);
    expect(snap.K).toBe(2);
    expect(snap.t).toBe(12.5);
    const f = snap.fields.get("rho")!;
    expect(Array.from(f.values)).toEqual(rho);
    expect(Array.from(fieldRow(f, 1))).toEqual(rho.slice(3));
    const n = snap.fields.get("pi_prime_nodes")!;
    expect(n.ni).toBe(4);
    expect(n.nk).toBe(3);
    expect(n.values[11]).toBeCloseTo(11e-6, 12);
  });

  it("rejects truncated sections", () => {
    const { buf } = syntheticSnapshot();
    expect(() => parseSnapshot(buf.subarray(0, buf.length - 4))).toThrow(/truncated/);
  });

  it("rejects foreign headers", () => {
    expect(() => parseSnapshot(Buffer.from("HELLO world 1 1 0\n"))).toThrow(/bad section/);
  });

  it("rejects inconsistent metadata between sections", () => {
    const bad = Buffer.concat([
      section("rho", 2, 1, 0.0, [1, 2]),
      section("P", 3, 1, 0.0, [1, 2, 3]),
    ]);
    expect(() => parseSnapshot(bad)).toThrow(/inconsistent/);
  });
});
