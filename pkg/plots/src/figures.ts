import type {
  AsymmetrySummary,
  ClassicalSummary,
  OrderSummary,
  WeakValueSummary,
} from "./schema.js";
import { COLORS, Frame, fmtValue, padDomain } from "./svg.js";

interface Provenance {
  artifact: { name: string; version: string };
  config_sha256: string;
  seed: number;
}

function caption(summary: Provenance): string {
  return `${summary.artifact.name} ${summary.artifact.version}` +
    ` | config ${summary.config_sha256.slice(0, 12)} | seed ${summary.seed}`;
}

const DASHES = [undefined, "7,3", "2,3"];

/** Correlation ratios vs eps1 with the extrapolated limits as asymptotes. */
export function ratioSweep(summary: WeakValueSummary): string {
  const yValues = [summary.oracle.re, summary.oracle.im];
  let maxEps1 = 0;
  for (const est of summary.estimates) {
    for (const diag of [est.re_diagnostics, est.im_diagnostics]) {
      yValues.push(...diag.values, diag.limit);
      maxEps1 = Math.max(maxEps1, ...diag.eps1_schedule);
    }
  }
  const frame = new Frame({
    title: `${summary.experiment}: correlation ratio vs first coupling`,
    xLabel: "eps1",
    yLabel: "correlation / (eps1 eps2)",
    xDomain: [0, maxEps1 * 1.06],
    yDomain: padDomain(yValues),
    caption: caption(summary),
  });
  summary.estimates.forEach((est, i) => {
    const dash = DASHES[i % DASHES.length];
    for (const [part, diag, color] of [
      ["Re", est.re_diagnostics, COLORS.blue],
      ["Im", est.im_diagnostics, COLORS.red],
    ] as const) {
      const points = diag.eps1_schedule.map(
        (eps1, k) => [eps1, diag.values[k]] as [number, number],
      );
      frame.polyline(points, { stroke: color, dash });
      for (const [x, y] of points) {
        frame.marker(x, y, "circle", color, 3.5);
      }
      frame.hline(diag.limit, { stroke: color, dash: "5,4", opacity: 0.7 },
        i === 0 ? `${part} limit ${fmtValue(diag.limit)}` : undefined);
      frame.legend(`${part} ratio (eps2 = ${est.eps2})`, color);
    }
  });
  frame.hline(summary.oracle.re, { stroke: COLORS.gray, dash: "1,3" },
    `oracle Re ${fmtValue(summary.oracle.re)}`, "below");
  frame.hline(summary.oracle.im, { stroke: COLORS.gray, dash: "1,3" },
    `oracle Im ${fmtValue(summary.oracle.im)}`, "below");
  return frame.toString();
}

/** Forward estimate, conjugated reverse estimate, and oracle in the complex plane. */
export function orderCompare(summary: OrderSummary): string {
  const sweep = summary.forward.re_diagnostics.values.map(
    (re, k) => [re, summary.forward.im_diagnostics.values[k]] as [number, number],
  );
  const re = [summary.oracle.re, summary.forward.re, summary.conjugated_reverse.re,
    ...sweep.map((p) => p[0])];
  const im = [summary.oracle.im, summary.forward.im, summary.conjugated_reverse.im,
    ...sweep.map((p) => p[1])];
  const frame = new Frame({
    title: "order_symmetry: forward vs conjugated reverse",
    xLabel: "Re(weak value)",
    yLabel: "Im(weak value)",
    xDomain: padDomain(re),
    yDomain: padDomain(im),
    caption: caption(summary),
  });
  frame.polyline(sweep, { stroke: COLORS.blue, width: 1, opacity: 0.45 });
  for (const [x, y] of sweep) {
    frame.marker(x, y, "circle", COLORS.blue, 2.2);
  }
  frame.marker(summary.forward.re, summary.forward.im, "circle", COLORS.blue, 5);
  frame.marker(summary.conjugated_reverse.re, summary.conjugated_reverse.im,
    "square", COLORS.red, 5);
  frame.marker(summary.oracle.re, summary.oracle.im, "cross", COLORS.black, 6);
  frame.legend(`forward ${fmtValue(summary.forward.re)} + ${fmtValue(summary.forward.im)}i`,
    COLORS.blue);
  frame.legend(
    `conj(reverse) ${fmtValue(summary.conjugated_reverse.re)} + ` +
      `${fmtValue(summary.conjugated_reverse.im)}i`,
    COLORS.red,
  );
  frame.legend(`oracle ${fmtValue(summary.oracle.re)} + ${fmtValue(summary.oracle.im)}i`,
    COLORS.black);
  return frame.toString();
}

/** |forward - reverse| correlation gap vs eps1 with the pass threshold. */
export function asymmetrySweep(summary: AsymmetrySummary): string {
  const points = [...summary.points].sort((a, b) => a.eps1 - b.eps1);
  const check = summary.checks.find((c) => c.name === "asymmetry_exceeds_threshold");
  const threshold =
    check && typeof check.detail.threshold === "number" ? check.detail.threshold : undefined;
  const yValues = points.map((p) => p.asymmetry);
  if (threshold !== undefined) {
    yValues.push(threshold);
  }
  const frame = new Frame({
    title: "strong_asymmetry: order asymmetry vs first coupling",
    xLabel: "eps1",
    yLabel: "|correlation(A first) - correlation(B first)|",
    xDomain: [0, Math.max(...points.map((p) => p.eps1)) * 1.06],
    yDomain: [0, Math.max(...yValues) * 1.12],
    caption: caption(summary),
  });
  frame.polyline(points.map((p) => [p.eps1, p.asymmetry]), { stroke: COLORS.green });
  for (const p of points) {
    frame.marker(p.eps1, p.asymmetry, "circle", COLORS.green, 3.5);
  }
  if (threshold !== undefined) {
    frame.hline(threshold, { stroke: COLORS.gray, dash: "5,4" },
      `threshold ${fmtValue(threshold)}`);
  }
  frame.legend("measured asymmetry", COLORS.green);
  return frame.toString();
}

/** Monte Carlo ratios with 3 sigma bars against the quadrature value. */
export function classicalConvergence(summary: ClassicalSummary): string {
  const points = [...summary.points].sort((a, b) => a.eps1 - b.eps1);
  const yValues = [summary.rhs.total];
  for (const p of points) {
    yValues.push(p.ratio - 3 * p.ratio_stderr, p.ratio + 3 * p.ratio_stderr);
  }
  const frame = new Frame({
    title: "classical_check: Monte Carlo vs quadrature",
    xLabel: "eps1",
    yLabel: "estimate / (eps1 eps2)",
    xDomain: [0, Math.max(...points.map((p) => p.eps1)) * 1.08],
    yDomain: padDomain(yValues),
    caption: caption(summary),
  });
  frame.hline(summary.rhs.total, { stroke: COLORS.gray, width: 1.6 },
    `quadrature ${fmtValue(summary.rhs.total)}`);
  for (const p of points) {
    frame.errorBar(p.eps1, p.ratio, 3 * p.ratio_stderr, COLORS.blue);
    frame.marker(p.eps1, p.ratio, "circle", COLORS.blue, 4);
  }
  frame.legend(`MC ratio with 3 sigma bars (n = ${points[0].n_samples})`, COLORS.blue);
  return frame.toString();
}
