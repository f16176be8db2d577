import { spawnSync } from "node:child_process";
import { existsSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { fixture, fixtureVariant, tempDir, PKG_DIR } from "./helpers.js";

const CLI = join(PKG_DIR, "dist", "cli.js");

function runCli(...args: string[]) {
  const proc = spawnSync(process.execPath, [CLI, ...args], { encoding: "utf8" });
  return { status: proc.status, stdout: proc.stdout, stderr: proc.stderr };
}

describe("plots CLI", () => {
  it("renders a figure from an output directory", () => {
    const out = join(tempDir(), "ratio.svg");
    const result = runCli("ratio-sweep", "--in", fixture("forward_tan_theta"), "--out", out);
    expect(result.status).toBe(0);
    expect(result.stdout).toContain(`wrote ${out}`);
    expect(existsSync(out)).toBe(true);
  });

  it("exits 2 on a malformed CSV", () => {
    const dir = fixtureVariant("forward_tan_theta",
      "experiment;order;eps1;eps2;channel;value\ngarbage\n");
    const result = runCli("ratio-sweep", "--in", dir, "--out", join(tempDir(), "x.svg"));
    expect(result.status).toBe(2);
    expect(result.stderr).toContain("SchemaMismatch");
  });

  it("exits 2 on an empty CSV", () => {
    const dir = fixtureVariant("classical_harmonic", "");
    const result = runCli("classical-convergence", "--in", dir,
      "--out", join(tempDir(), "x.svg"));
    expect(result.status).toBe(2);
    expect(result.stderr).toContain("MissingInput");
  });

  it("exits 2 when the directory lacks the input files", () => {
    const result = runCli("order-compare", "--in", tempDir(),
      "--out", join(tempDir(), "x.svg"));
    expect(result.status).toBe(2);
    expect(result.stderr).toContain("MissingInput");
  });

  it("rejects an unknown figure kind", () => {
    const result = runCli("pie-chart", "--in", fixture("forward_tan_theta"),
      "--out", join(tempDir(), "x.svg"));
    expect(result.status).not.toBe(0);
  });

  it("demands --in and --out", () => {
    const result = runCli("ratio-sweep");
    expect(result.status).not.toBe(0);
  });
});
