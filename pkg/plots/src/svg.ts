import { format } from "d3-format";
import { scaleLinear, type ScaleLinear } from "d3-scale";

export const WIDTH = 720;
export const HEIGHT = 480;
const MARGIN = { top: 48, right: 36, bottom: 64, left: 76 };
const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export const COLORS = {
  blue: "#1f77b4",
  red: "#d62728",
  green: "#2ca02c",
  gray: "#7f7f7f",
  black: "#202020",
};

const px = (v: number): string => v.toFixed(2);
// d3-format uses U+2212 for minus; keep labels plain ASCII
const ascii = (f: (v: number) => string) => (v: number) => f(v).replace(/−/g, "-");
export const fmtValue = ascii(format(".6~g"));
const fmtTick = ascii(format(".4~g"));

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface LineOptions {
  stroke: string;
  width?: number;
  dash?: string;
  opacity?: number;
}

export interface FrameSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xDomain: [number, number];
  yDomain: [number, number];
  caption: string;
}

/** Pad a data interval so points never sit on the frame border. */
export function padDomain(values: number[], fraction = 0.12): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo;
  const pad = span > 0 ? span * fraction : Math.max(Math.abs(hi), 1) * fraction;
  return [lo - pad, hi + pad];
}

/**
 * A fixed-size SVG scene with linear axes. All drawing methods take data
 * coordinates; output is a deterministic function of the inputs.
 */
export class Frame {
  readonly x: ScaleLinear<number, number>;
  readonly y: ScaleLinear<number, number>;
  private readonly parts: string[] = [];
  private readonly legends: string[] = [];

  constructor(private readonly spec: FrameSpec) {
    this.x = scaleLinear().domain(spec.xDomain).range([MARGIN.left, WIDTH - MARGIN.right]);
    this.y = scaleLinear().domain(spec.yDomain).range([HEIGHT - MARGIN.bottom, MARGIN.top]);
  }

  polyline(points: Array<[number, number]>, opts: LineOptions): void {
    const coords = points.map(([x, y]) => `${px(this.x(x))},${px(this.y(y))}`).join(" ");
    this.parts.push(
      `<polyline points="${coords}" fill="none" stroke="${opts.stroke}"` +
        ` stroke-width="${opts.width ?? 1.5}"` +
        (opts.dash ? ` stroke-dasharray="${opts.dash}"` : "") +
        (opts.opacity !== undefined ? ` stroke-opacity="${opts.opacity}"` : "") +
        ` />`,
    );
  }

  marker(xv: number, yv: number, kind: "circle" | "square" | "cross", color: string, r = 4): void {
    const cx = this.x(xv);
    const cy = this.y(yv);
    if (kind === "circle") {
      this.parts.push(`<circle cx="${px(cx)}" cy="${px(cy)}" r="${r}" fill="${color}" />`);
    } else if (kind === "square") {
      this.parts.push(
        `<rect x="${px(cx - r)}" y="${px(cy - r)}" width="${2 * r}" height="${2 * r}"` +
          ` fill="none" stroke="${color}" stroke-width="1.8" />`,
      );
    } else {
      this.parts.push(
        `<path d="M ${px(cx - r)} ${px(cy - r)} L ${px(cx + r)} ${px(cy + r)}` +
          ` M ${px(cx - r)} ${px(cy + r)} L ${px(cx + r)} ${px(cy - r)}"` +
          ` stroke="${color}" stroke-width="1.8" fill="none" />`,
      );
    }
  }

  /** Horizontal guide across the full plot width, with a right-edge label. */
  hline(yv: number, opts: LineOptions, label?: string, labelSide: "above" | "below" = "above"): void {
    const yPix = this.y(yv);
    this.parts.push(
      `<line x1="${px(MARGIN.left)}" y1="${px(yPix)}" x2="${px(WIDTH - MARGIN.right)}"` +
        ` y2="${px(yPix)}" stroke="${opts.stroke}" stroke-width="${opts.width ?? 1.2}"` +
        (opts.dash ? ` stroke-dasharray="${opts.dash}"` : "") +
        (opts.opacity !== undefined ? ` stroke-opacity="${opts.opacity}"` : "") +
        ` />`,
    );
    if (label) {
      const yText = labelSide === "above" ? yPix - 5 : yPix + 13;
      this.parts.push(
        `<text x="${px(WIDTH - MARGIN.right - 4)}" y="${px(yText)}" ${FONT}` +
          ` font-size="11" fill="${opts.stroke}" text-anchor="end">${escapeXml(label)}</text>`,
      );
    }
  }

  /** Vertical error bar with end caps, in data units. */
  errorBar(xv: number, yv: number, half: number, color: string): void {
    const cx = this.x(xv);
    const yLo = this.y(yv - half);
    const yHi = this.y(yv + half);
    this.parts.push(
      `<line x1="${px(cx)}" y1="${px(yLo)}" x2="${px(cx)}" y2="${px(yHi)}"` +
        ` stroke="${color}" stroke-width="1.4" />`,
      `<line x1="${px(cx - 5)}" y1="${px(yLo)}" x2="${px(cx + 5)}" y2="${px(yLo)}"` +
        ` stroke="${color}" stroke-width="1.4" />`,
      `<line x1="${px(cx - 5)}" y1="${px(yHi)}" x2="${px(cx + 5)}" y2="${px(yHi)}"` +
        ` stroke="${color}" stroke-width="1.4" />`,
    );
  }

  /** One legend row; rows stack in the top-left corner of the plot area. */
  legend(text: string, color: string): void {
    const yPix = MARGIN.top + 16 + this.legends.length * 16;
    this.legends.push(
      `<rect x="${px(MARGIN.left + 10)}" y="${px(yPix - 8)}" width="10" height="10" fill="${color}" />` +
        `<text x="${px(MARGIN.left + 26)}" y="${px(yPix + 1)}" ${FONT} font-size="12"` +
        ` fill="${COLORS.black}">${escapeXml(text)}</text>`,
    );
  }

  private axes(): string {
    const out: string[] = [];
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    out.push(
      `<line x1="${px(x0)}" y1="${px(y0)}" x2="${px(x1)}" y2="${px(y0)}" stroke="${COLORS.black}" />`,
      `<line x1="${px(x0)}" y1="${px(y0)}" x2="${px(x0)}" y2="${px(y1)}" stroke="${COLORS.black}" />`,
    );
    for (const tick of this.x.ticks(6)) {
      const cx = this.x(tick);
      out.push(
        `<line x1="${px(cx)}" y1="${px(y0)}" x2="${px(cx)}" y2="${px(y0 + 5)}" stroke="${COLORS.black}" />`,
        `<text x="${px(cx)}" y="${px(y0 + 18)}" ${FONT} font-size="11" fill="${COLORS.black}"` +
          ` text-anchor="middle">${fmtTick(tick)}</text>`,
      );
    }
    for (const tick of this.y.ticks(6)) {
      const cy = this.y(tick);
      out.push(
        `<line x1="${px(x0 - 5)}" y1="${px(cy)}" x2="${px(x0)}" y2="${px(cy)}" stroke="${COLORS.black}" />`,
        `<text x="${px(x0 - 8)}" y="${px(cy + 4)}" ${FONT} font-size="11" fill="${COLORS.black}"` +
          ` text-anchor="end">${fmtTick(tick)}</text>`,
      );
    }
    out.push(
      `<text x="${px((x0 + x1) / 2)}" y="${px(HEIGHT - 22)}" ${FONT} font-size="13"` +
        ` fill="${COLORS.black}" text-anchor="middle">${escapeXml(this.spec.xLabel)}</text>`,
      `<text x="20" y="${px((y0 + y1) / 2)}" ${FONT} font-size="13" fill="${COLORS.black}"` +
        ` text-anchor="middle" transform="rotate(-90 20 ${px((y0 + y1) / 2)})">` +
        `${escapeXml(this.spec.yLabel)}</text>`,
    );
    return out.join("\n");
  }

  toString(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}"` +
        ` viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="white" />`,
      `<text x="${px(WIDTH / 2)}" y="28" ${FONT} font-size="16" fill="${COLORS.black}"` +
        ` text-anchor="middle">${escapeXml(this.spec.title)}</text>`,
      this.axes(),
      ...this.parts,
      ...this.legends,
      `<text x="${px(WIDTH - 8)}" y="${px(HEIGHT - 8)}" ${FONT} font-size="10"` +
        ` fill="${COLORS.gray}" text-anchor="end">${escapeXml(this.spec.caption)}</text>`,
      `</svg>`,
      ``,
    ].join("\n");
  }
}
