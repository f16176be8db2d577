import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export const TEST_DIR = dirname(fileURLToPath(import.meta.url));
export const PKG_DIR = dirname(TEST_DIR);

export function fixture(name: string): string {
  return join(TEST_DIR, "fixtures", name);
}

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "plots-test-"));
}

/** Copy a fixture into a temp dir, optionally replacing correlations.csv. */
export function fixtureVariant(name: string, csvText?: string): string {
  const dir = tempDir();
  const src = fixture(name);
  const csv = csvText ?? readFileSync(join(src, "correlations.csv"), "utf8");
  writeFileSync(join(dir, "correlations.csv"), csv);
  writeFileSync(join(dir, "summary.json"), readFileSync(join(src, "summary.json")));
  return dir;
}
