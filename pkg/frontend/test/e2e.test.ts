// End-to-end: run the solver CLI for a tiny cold-bubble case, then parse
// the snapshot it wrote and render both figure kinds.

import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { main } from "../src/cli.js";
import { readMeta, readSnapshot } from "../src/snapshot.js";

function solverAvailable(): boolean {
  try {
    execFileSync("python3", ["-c", "import atmoslab"], { stdio: "ignore" });
    return true;
  } catch {
    return false;
  }
}

const HAVE_SOLVER = solverAvailable();
const d = describe.skipIf(!HAVE_SOLVER);

d("end-to-end against the solver CLI", () => {
  let dir: string;
  let snap: string;
  let meta: string;

  beforeAll(() => {
    dir = fs.mkdtempSync(path.join(os.tmpdir(), "atmoslab-e2e-"));
    execFileSync("python3", ["-m", "atmoslab.cli", "run", "--case", "straka",
                             "--nx", "64", "--nz", "8", "--tmax", "120",
                             "--out", path.join(dir, "run")],
                 { stdio: "ignore" });
    const snaps = fs.readdirSync(path.join(dir, "run")).filter((f) => f.startsWith("snap_")).sort();
    snap = path.join(dir, "run", snaps[snaps.length - 1]);
    meta = path.join(dir, "run", "meta.json");
  }, 120_000);

  afterAll(() => {
    if (dir) fs.rmSync(dir, { recursive: true, force: true });
  });

  it("parses a real snapshot losslessly", () => {
    const s = readSnapshot(snap);
    expect(s.I).toBe(64);
    expect(s.K).toBe(8);
    expect(s.t).toBeCloseTo(120.0, 6);
    for (const name of ["rho", "u", "v", "w", "theta_prime", "pi_prime_nodes", "P"]) {
      expect(s.fields.has(name), name).toBe(true);
    }
    const rho = s.fields.get("rho")!;
    expect(rho.values.every((v) => Number.isFinite(v) && v > 0)).toBe(true);
    const m = readMeta(meta);
    expect(m.case).toBe("straka");
    expect(m.dx).toBeCloseTo(800.0, 9);
  });

  it("renders the bubble contour figure", () => {
    const out = path.join(dir, "bubble.svg");
    const rc = main(["contours", "--snap", snap,
                     "--spec", path.join(__dirname, "..", "specs", "bubble_theta_final.json"),
                     "--meta", meta, "--out", out]);
    expect(rc).toBe(0);
    const svg = fs.readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("<path");          // the cold anomaly has -1 K contours
  });

  it("renders the z = 1200 m cut", () => {
    const out = path.join(dir, "cut.svg");
    const rc = main(["cut", "--snap", snap, "--z", "1200", "--meta", meta, "--out", out]);
    expect(rc).toBe(0);
    expect(fs.readFileSync(out, "utf-8")).toContain("<polyline");
  });

  it("rejects a cut outside the domain", () => {
    const rc = main(["cut", "--snap", snap, "--z", "99000", "--meta", meta,
                     "--out", path.join(dir, "bad.svg")]);
    expect(rc).toBe(2);
  });
});
