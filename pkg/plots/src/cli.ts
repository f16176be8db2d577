#!/usr/bin/env node
import { join } from "node:path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { MissingInput, SchemaMismatch } from "./errors.js";
import { FIGURE_KINDS, render, type FigureKind } from "./render.js";

const argv = await yargs(hideBin(process.argv))
  .scriptName("plots")
  .usage("$0 <figure-kind> --in <dir> --out <file.svg>")
  .command("$0 <figure-kind>", "render one figure from a weakorder output directory")
  .positional("figure-kind", {
    describe: "which figure to draw",
    choices: FIGURE_KINDS,
    type: "string",
  })
  .option("in", {
    describe: "directory containing correlations.csv and summary.json",
    type: "string",
    demandOption: true,
  })
  .option("out", {
    describe: "output SVG path",
    type: "string",
    demandOption: true,
  })
  .strict()
  .help()
  .parse();

const inDir = argv.in as string;
const outPath = argv.out as string;
try {
  render({
    kind: argv["figure-kind"] as FigureKind,
    csvPath: join(inDir, "correlations.csv"),
    summaryPath: join(inDir, "summary.json"),
    outPath,
  });
  console.log(`wrote ${outPath}`);
} catch (err) {
  if (err instanceof MissingInput || err instanceof SchemaMismatch) {
    console.error(`${err.name}: ${err.message}`);
    process.exit(2);
  }
  console.error(err instanceof Error ? err.message : String(err));
  process.exit(1);
}
