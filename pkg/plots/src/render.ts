import { writeFileSync } from "node:fs";
import {
  asymmetrySweep,
  classicalConvergence,
  orderCompare,
  ratioSweep,
} from "./figures.js";
import {
  asymmetrySummary,
  classicalSummary,
  loadCorrelations,
  loadSummary,
  orderSummary,
  requireConsistent,
  weakValueSummary,
} from "./schema.js";

export const FIGURE_KINDS = [
  "ratio-sweep",
  "order-compare",
  "asymmetry-sweep",
  "classical-convergence",
] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface PlotJob {
  kind: FigureKind;
  csvPath: string;
  summaryPath: string;
  outPath: string;
}

/** Validate both inputs and build the figure markup without writing it. */
export function buildFigure(job: Omit<PlotJob, "outPath">): string {
  const rows = loadCorrelations(job.csvPath);
  switch (job.kind) {
    case "ratio-sweep": {
      const summary = loadSummary(job.summaryPath, weakValueSummary);
      requireConsistent(rows, summary.experiment);
      return ratioSweep(summary);
    }
    case "order-compare": {
      const summary = loadSummary(job.summaryPath, orderSummary);
      requireConsistent(rows, summary.experiment);
      return orderCompare(summary);
    }
    case "asymmetry-sweep": {
      const summary = loadSummary(job.summaryPath, asymmetrySummary);
      requireConsistent(rows, summary.experiment);
      return asymmetrySweep(summary);
    }
    case "classical-convergence": {
      const summary = loadSummary(job.summaryPath, classicalSummary);
      requireConsistent(rows, summary.experiment);
      return classicalConvergence(summary);
    }
  }
}

export function render(job: PlotJob): void {
  writeFileSync(job.outPath, buildFigure(job), "utf8");
}
