/**
 * Minimal deterministic SVG builder: same scene in, byte-identical SVG out.
 *
 * Coordinates are emitted with a fixed number of decimals and attributes in
 * a fixed order, so rendered files diff cleanly across runs and platforms.
 * A tiny linear-axis helper covers every figure in the suite.
 */

export function fmt(x: number): string {
  const rounded = Number(x.toFixed(2));
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  rect(x: number, y: number, w: number, h: number, fill: string, stroke?: string): void {
    const s = stroke ? ` stroke="${stroke}" stroke-width="0.5"` : "";
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"${s}/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash?: string): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: [number, number][], stroke: string, width = 1.5): void {
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  polygon(points: [number, number][], fill: string, opacity = 1): void {
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polygon points="${path}" fill="${fill}" fill-opacity="${opacity}"/>`);
  }

  text(x: number, y: number, content: string, size = 11, anchor: "start" | "middle" | "end" = "start", fill = "#1a1a1a"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica,Arial,sans-serif" font-size="${size}" text-anchor="${anchor}" fill="${fill}">${escapeXml(content)}</text>`,
    );
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Linear mapping from data space to a pixel interval. */
export interface Scale {
  (value: number): number;
  lo: number;
  hi: number;
}

export function linearScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  const span = hi - lo || 1;
  const scale = ((value: number) => pxLo + ((value - lo) / span) * (pxHi - pxLo)) as Scale;
  scale.lo = lo;
  scale.hi = hi;
  return scale;
}

export function niceTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const unit = step * mult;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / unit) * unit; t <= hi + unit * 1e-9; t += unit) {
    ticks.push(Number(t.toFixed(10)));
  }
  return ticks;
}

export interface Frame {
  svg: Svg;
  x: Scale;
  y: Scale;
}

/** Plot frame with box, ticks and axis labels. */
export function frame(
  svg: Svg,
  box: { left: number; top: number; width: number; height: number },
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
): Frame {
  const x = linearScale(xDomain[0], xDomain[1], box.left, box.left + box.width);
  const y = linearScale(yDomain[0], yDomain[1], box.top + box.height, box.top);
  svg.rect(box.left, box.top, box.width, box.height, "none", "#1a1a1a");
  for (const t of niceTicks(xDomain[0], xDomain[1])) {
    svg.line(x(t), box.top + box.height, x(t), box.top + box.height + 4, "#1a1a1a");
    svg.text(x(t), box.top + box.height + 16, trimTick(t), 10, "middle");
  }
  for (const t of niceTicks(yDomain[0], yDomain[1])) {
    svg.line(box.left - 4, y(t), box.left, y(t), "#1a1a1a");
    svg.text(box.left - 7, y(t) + 3.5, trimTick(t), 10, "end");
  }
  svg.text(box.left + box.width / 2, box.top + box.height + 32, xLabel, 12, "middle");
  svg.text(14, box.top + box.height / 2, yLabel, 12, "middle");
  return { svg, x, y };
}

function trimTick(t: number): string {
  return String(Number(t.toPrecision(6)));
}
