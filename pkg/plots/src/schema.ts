import { existsSync, readFileSync } from "node:fs";
import Papa from "papaparse";
import { z } from "zod";
import { MissingInput, SchemaMismatch } from "./errors.js";

export const CSV_COLUMNS = ["experiment", "order", "eps1", "eps2", "channel", "value"] as const;
export const CHANNELS = ["Q1Q2", "P1Q2", "Q1", "Q2"] as const;

const finite = z.number().finite();

const correlationRow = z.object({
  experiment: z.string().min(1),
  order: z.enum(["forward", "reverse"]),
  eps1: finite.positive(),
  eps2: finite.positive(),
  channel: z.enum(CHANNELS),
  value: finite,
});
export type CorrelationRow = z.infer<typeof correlationRow>;

const reIm = z.object({ re: finite, im: finite });
export type ReIm = z.infer<typeof reIm>;

const diagnostics = z
  .object({
    eps1_schedule: z.array(finite).min(2),
    values: z.array(finite),
    limit: finite,
    slope: finite,
    fit_residual: finite,
  })
  .refine((d) => d.values.length === d.eps1_schedule.length, {
    message: "diagnostics values and eps1_schedule lengths differ",
  });

const estimateBlock = z.object({
  eps2: finite.positive(),
  order: z.enum(["forward", "reverse"]),
  re: finite,
  im: finite,
  re_diagnostics: diagnostics,
  im_diagnostics: diagnostics,
  sigma_p1_squared: finite.positive(),
});
export type EstimateBlock = z.infer<typeof estimateBlock>;

const summaryBase = z.object({
  artifact: z.object({ name: z.string().min(1), version: z.string().min(1) }),
  config_sha256: z.string().regex(/^[0-9a-f]{64}$/),
  passed: z.boolean(),
  seed: z.number().int(),
});

const check = z.object({
  name: z.string(),
  passed: z.boolean(),
  detail: z.record(z.unknown()),
});

export const weakValueSummary = summaryBase.extend({
  experiment: z.enum(["forward_weak_value", "reverse_weak_value"]),
  oracle: reIm,
  estimates: z.array(estimateBlock).min(1),
});
export type WeakValueSummary = z.infer<typeof weakValueSummary>;

export const orderSummary = summaryBase.extend({
  experiment: z.literal("order_symmetry"),
  oracle: reIm,
  forward: estimateBlock,
  conjugated_reverse: reIm,
});
export type OrderSummary = z.infer<typeof orderSummary>;

export const asymmetrySummary = summaryBase.extend({
  experiment: z.literal("strong_asymmetry"),
  checks: z.array(check),
  points: z
    .array(
      z.object({
        eps1: finite.positive(),
        asymmetry: finite,
        correlation_ab: finite,
        correlation_ba: finite,
      }),
    )
    .min(1),
});
export type AsymmetrySummary = z.infer<typeof asymmetrySummary>;

export const classicalSummary = summaryBase.extend({
  experiment: z.literal("classical_check"),
  rhs: z.object({ product_term: finite, bracket_term: finite, total: finite }),
  points: z
    .array(
      z.object({
        eps1: finite.positive(),
        estimate: finite,
        stderr: finite.nonnegative(),
        ratio: finite,
        ratio_stderr: finite.nonnegative(),
        n_samples: z.number().int().positive(),
        seed: z.number().int(),
      }),
    )
    .min(1),
});
export type ClassicalSummary = z.infer<typeof classicalSummary>;

function readRequired(path: string, what: string): string {
  if (!existsSync(path)) {
    throw new MissingInput(`${what} not found: ${path}`);
  }
  const text = readFileSync(path, "utf8");
  if (text.trim() === "") {
    throw new MissingInput(`${what} is empty: ${path}`);
  }
  return text;
}

/** Parse correlations.csv and check it against the documented columns. */
export function loadCorrelations(csvPath: string): CorrelationRow[] {
  const text = readRequired(csvPath, "correlations CSV");
  const parsed = Papa.parse<Record<string, unknown>>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaMismatch(`CSV parse error at row ${first.row}: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== CSV_COLUMNS.join(",")) {
    throw new SchemaMismatch(
      `CSV columns are [${fields.join(",")}], expected [${CSV_COLUMNS.join(",")}]`,
    );
  }
  if (parsed.data.length === 0) {
    throw new MissingInput(`CSV has a header but no rows: ${csvPath}`);
  }
  const rows = z.array(correlationRow).safeParse(parsed.data);
  if (!rows.success) {
    throw new SchemaMismatch(`CSV rows malformed: ${rows.error.issues[0].message}`);
  }
  return rows.data;
}

/** Parse summary.json against the schema for one experiment family. */
export function loadSummary<S extends z.ZodTypeAny>(summaryPath: string, schema: S): z.infer<S> {
  const text = readRequired(summaryPath, "summary JSON");
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaMismatch(`summary is not valid JSON: ${(err as Error).message}`);
  }
  const result = schema.safeParse(raw);
  if (!result.success) {
    const issue = result.error.issues[0];
    throw new SchemaMismatch(
      `summary does not match the expected shape at ${issue.path.join(".") || "(root)"}: ${issue.message}`,
    );
  }
  return result.data;
}

/** Every CSV row must belong to the experiment the summary describes. */
export function requireConsistent(rows: CorrelationRow[], experiment: string): void {
  const alien = rows.find((row) => row.experiment !== experiment);
  if (alien) {
    throw new SchemaMismatch(
      `CSV row experiment "${alien.experiment}" does not match summary experiment "${experiment}"`,
    );
  }
}
