/**
 * The figure suite. Every builder is a pure function from parsed tables to
 * an SVG string; the CLI handles files and rasterization.
 *
 * fig2  joint-action heatmaps (one panel per strategy, quantum (1,1) cell
 *       annotated)
 * fig3  geometry trails in the (coincidence, APMI) plane with the
 *       product-baseline reference line
 * fig4  differential total-correlation grid over (p, lambda)
 * fig5  scaling of both differentials with team size
 * fig6  differential APMI grid over (p, lambda)
 * fig7  shared-latent quality scan with quantum reference and crossover
 * fig8  convergence of delta-TC with the round budget
 */

import { diverging, sequential, STRATEGY_COLORS } from "./colormap.js";
import { expectKind, maybeNumber, numbers, strings, Table } from "./tables.js";
import { frame, linearScale, Svg } from "./svg.js";

export const FIGURE_IDS = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

export interface FigureInput {
  table: Table;
  label?: string;
}

function short(x: number): string {
  if (x === 0) return "0";
  const abs = Math.abs(x);
  if (abs >= 0.01) return x.toFixed(2).replace(/^(-?)0\./, "$1.");
  return x.toExponential(0);
}

// ---------------------------------------------------------------------------
// fig2: pair-joint heatmaps

export function fig2(inputs: FigureInput[]): string {
  if (inputs.length === 0) throw new Error("fig2 needs at least one pair_joint table");
  const panels = inputs.map(({ table, label }, pi) => {
    expectKind(table, "pair_joint");
    const ai = numbers(table, "action_i");
    const aj = numbers(table, "action_j");
    const prob = numbers(table, "probability");
    const m = Math.max(...ai);
    if (table.rows.length !== m * m) {
      throw new Error(`${table.path}: expected a dense ${m}x${m} pair joint`);
    }
    const grid: number[][] = Array.from({ length: m }, () => Array(m).fill(0));
    ai.forEach((a, idx) => (grid[a - 1][aj[idx] - 1] = prob[idx]));
    return { grid, m, label: label ?? `panel ${pi + 1}` };
  });

  const cell = 34;
  const m = panels[0].m;
  const panelW = m * cell;
  const gap = 46;
  const top = 54;
  const left = 52;
  const width = left + panels.length * (panelW + gap);
  const height = top + panelW + 58;
  const svg = new Svg(width, height);
  const maxProb = Math.max(...panels.flatMap((p) => p.grid.flat()));

  panels.forEach((panel, pi) => {
    const x0 = left + pi * (panelW + gap);
    svg.text(x0 + panelW / 2, top - 22, panel.label ?? "", 13, "middle");
    for (let i = 0; i < m; i++) {
      for (let j = 0; j < m; j++) {
        const value = panel.grid[i][j];
        svg.rect(x0 + j * cell, top + i * cell, cell, cell, sequential(value, 0, maxProb), "#ffffff");
        svg.text(
          x0 + j * cell + cell / 2, top + i * cell + cell / 2 + 3.5,
          short(value), 9, "middle", value > maxProb * 0.6 ? "#1a1a1a" : "#f0f0f0",
        );
      }
      svg.text(x0 - 7, top + i * cell + cell / 2 + 3.5, String(i + 1), 10, "end");
      svg.text(x0 + i * cell + cell / 2, top + panelW + 14, String(i + 1), 10, "middle");
    }
    svg.text(x0 + panelW / 2, top + panelW + 30, "a_j", 11, "middle");
    if ((panel.label ?? "").includes("quantum")) {
      // collision cell of the leader action, the structural hole
      svg.rect(x0, top, cell, cell, "none", "#d62728");
      svg.text(x0 + cell / 2, top - 6, `(1,1) = ${short(panel.grid[0][0])}`, 10, "middle", "#d62728");
    }
  });
  svg.text(16, top + panelW / 2, "a_i", 11, "middle");
  return svg.render();
}

// ---------------------------------------------------------------------------
// fig3: geometry trails

export function fig3(inputs: FigureInput[]): string {
  const table = expectKind(one(inputs, "fig3"), "geometry");
  const strategy = strings(table, "strategy");
  const p = numbers(table, "p");
  const coin = numbers(table, "coin");
  const apmi = numbers(table, "apmi");
  const productCoin = numbers(table, "product_coin");

  const svg = new Svg(460, 360);
  const pad = 0.04;
  const f = frame(
    svg, { left: 58, top: 30, width: 370, height: 270 },
    [Math.min(...coin) - pad, Math.max(...coin) + pad],
    [Math.min(...apmi) - pad, Math.max(...apmi) + pad],
    "pairwise coincidence", "APMI (bits)",
  );

  // product-baseline coincidence of the quantum rows, the grey reference
  const quantumBaseline = mean(productCoin.filter((_, i) => strategy[i] === "quantum"));
  f.svg.line(f.x(quantumBaseline), 30, f.x(quantumBaseline), 300, "#9a9a9a", 1, "5,4");
  f.svg.text(f.x(quantumBaseline) + 4, 42, "product baseline", 10, "start", "#9a9a9a");

  const order = [...new Set(strategy)];
  order.forEach((name, li) => {
    const idx = strategy.map((s, i) => (s === name ? i : -1)).filter((i) => i >= 0);
    idx.sort((a, b) => p[a] - p[b]);
    const pts: [number, number][] = idx.map((i) => [f.x(coin[i]), f.y(apmi[i])]);
    const color = STRATEGY_COLORS[name] ?? "#333333";
    svg.polyline(pts, color);
    pts.forEach(([x, y]) => svg.circle(x, y, 3, color));
    svg.text(320, 48 + 14 * li, name, 11, "start", color);
  });
  return svg.render();
}

// ---------------------------------------------------------------------------
// fig4 / fig6: differential grids

function differentialGrid(table: Table, column: "delta_tc" | "delta_apmi", title: string): string {
  expectKind(table, "differential");
  const p = numbers(table, "p");
  const lam = numbers(table, "lambda");
  const delta = numbers(table, column);
  const pValues = [...new Set(p)].sort((a, b) => a - b);
  const lamValues = [...new Set(lam)].sort((a, b) => a - b);

  const cell = Math.min(30, Math.floor(360 / lamValues.length));
  const left = 64;
  const top = 44;
  const gridW = lamValues.length * cell;
  const gridH = pValues.length * cell;
  const svg = new Svg(left + gridW + 92, top + gridH + 56);
  const absMax = Math.max(...delta.map(Math.abs));

  svg.text(left + gridW / 2, 22, title, 13, "middle");
  const index = new Map<string, number>();
  p.forEach((pv, i) => index.set(`${pv}|${lam[i]}`, delta[i]));
  pValues.forEach((pv, row) => {
    lamValues.forEach((lv, col) => {
      const value = index.get(`${pv}|${lv}`);
      if (value === undefined) throw new Error(`missing grid cell p=${pv}, lambda=${lv}`);
      svg.rect(left + col * cell, top + row * cell, cell, cell, diverging(value, absMax), "#ffffff");
    });
    svg.text(left - 7, top + row * cell + cell / 2 + 3.5, short(pv), 9, "end");
  });
  lamValues.forEach((lv, col) => {
    svg.text(left + col * cell + cell / 2, top + gridH + 13, short(lv), 9, "middle");
  });
  svg.text(left + gridW / 2, top + gridH + 30, "lambda", 11, "middle");
  svg.text(16, top + gridH / 2, "p", 11, "middle");

  // colorbar
  const barX = left + gridW + 22;
  const steps = 40;
  for (let s = 0; s < steps; s++) {
    const value = absMax - (2 * absMax * s) / (steps - 1);
    svg.rect(barX, top + (gridH * s) / steps, 14, gridH / steps + 0.5, diverging(value, absMax));
  }
  svg.text(barX + 18, top + 8, `+${short(absMax)}`, 9);
  svg.text(barX + 18, top + gridH / 2 + 3, "0", 9);
  svg.text(barX + 18, top + gridH, `-${short(absMax)}`, 9);
  return svg.render();
}

export function fig4(inputs: FigureInput[]): string {
  return differentialGrid(one(inputs, "fig4"), "delta_tc", "delta TC (bits)");
}

export function fig6(inputs: FigureInput[]): string {
  return differentialGrid(one(inputs, "fig6"), "delta_apmi", "delta APMI (bits)");
}

// ---------------------------------------------------------------------------
// fig5: scaling lines

export function fig5(inputs: FigureInput[]): string {
  const table = expectKind(one(inputs, "fig5"), "scaling");
  const n = numbers(table, "n");
  const dtc = numbers(table, "delta_tc");
  const dapmi = numbers(table, "delta_apmi");

  const lo = Math.min(...dtc, ...dapmi, 0);
  const hi = Math.max(...dtc, ...dapmi, 0);
  const svg = new Svg(440, 340);
  const f = frame(
    svg, { left: 62, top: 28, width: 340, height: 250 },
    [Math.min(...n) - 0.3, Math.max(...n) + 0.3],
    [lo - 0.5, hi + 0.5],
    "team size N", "differential (bits)",
  );
  f.svg.line(62, f.y(0), 402, f.y(0), "#bbbbbb", 1, "3,3");
  const series: [number[], string, string][] = [
    [dtc, "#d62728", "delta TC"],
    [dapmi, "#1f77b4", "delta APMI"],
  ];
  series.forEach(([values, color, label], si) => {
    const pts: [number, number][] = n.map((nv, i) => [f.x(nv), f.y(values[i])]);
    svg.polyline(pts, color);
    pts.forEach(([x, y]) => svg.circle(x, y, 3.5, color));
    svg.text(300, 48 + 14 * si, label, 11, "start", color);
  });
  return svg.render();
}

// ---------------------------------------------------------------------------
// fig7: shared-latent quality scan

export function fig7(inputs: FigureInput[]): string {
  if (inputs.length !== 2) {
    throw new Error("fig7 needs the qscan curve table and the qscan_summary table");
  }
  const sorted = [...inputs].sort((a, b) => a.table.kind.localeCompare(b.table.kind));
  const curve = expectKind(sorted[0].table, "qscan");
  const summary = expectKind(sorted[1].table, "qscan_summary");

  const q = numbers(curve, "q");
  const tc = numbers(curve, "tc_mean");
  const std = numbers(curve, "tc_std");
  const row = summary.rows[0];
  const tcQuantum = Number(row["tc_quantum"]);
  const tcIndependent = Number(row["tc_independent"]);
  const crossover = maybeNumber(row, "crossover_q");

  const hi = Math.max(...tc.map((v, i) => v + std[i]), tcQuantum) * 1.06 + 0.1;
  const svg = new Svg(470, 350);
  const f = frame(
    svg, { left: 58, top: 26, width: 380, height: 264 },
    [0, 1], [0, hi],
    "shared-latent strength q", "TC (bits)",
  );

  // one-sigma band around the classical curve (zero-width in exact mode)
  const band: [number, number][] = [
    ...q.map((qv, i) => [f.x(qv), f.y(tc[i] + std[i])] as [number, number]),
    ...[...q.keys()].reverse().map((i) => [f.x(q[i]), f.y(Math.max(0, tc[i] - std[i]))] as [number, number]),
  ];
  svg.polygon(band, "#aec7e8", 0.45);
  svg.polyline(q.map((qv, i) => [f.x(qv), f.y(tc[i])]), "#1f77b4");

  svg.line(f.x(0), f.y(tcQuantum), f.x(1), f.y(tcQuantum), "#ff7f0e", 1.5, "6,4");
  svg.text(f.x(0.02), f.y(tcQuantum) - 5, `TC quantum = ${short(tcQuantum)}`, 10, "start", "#ff7f0e");
  svg.line(f.x(0), f.y(tcIndependent), f.x(1), f.y(tcIndependent), "#9a9a9a", 1, "2,3");
  svg.text(f.x(0.75), f.y(tcIndependent) - 5, "TC independent", 10, "start", "#9a9a9a");

  if (crossover !== null) {
    svg.line(f.x(crossover), f.y(0), f.x(crossover), 26, "#d62728", 1.5, "4,3");
    svg.text(f.x(crossover) + 4, 40, `q* = ${row["crossover_q"]}`, 11, "start", "#d62728");
  }
  return svg.render();
}

// ---------------------------------------------------------------------------
// fig8: convergence trace

export function fig8(inputs: FigureInput[]): string {
  const table = expectKind(one(inputs, "fig8"), "convergence");
  const rounds = numbers(table, "rounds");
  const delta = numbers(table, "delta_tc");
  const std = numbers(table, "delta_tc_std");

  const logR = rounds.map(Math.log10);
  const lo = Math.min(...delta.map((d, i) => d - 3 * std[i]));
  const hi = Math.max(...delta.map((d, i) => d + 3 * std[i]), 0);
  const svg = new Svg(470, 340);
  const f = frame(
    svg, { left: 64, top: 26, width: 376, height: 252 },
    [Math.min(...logR) - 0.1, Math.max(...logR) + 0.1],
    [lo - 0.2, hi + 0.2],
    "log10 rounds R", "delta TC (bits)",
  );
  f.svg.line(f.x(f.x.lo), f.y(0), f.x(f.x.hi), f.y(0), "#bbbbbb", 1, "3,3");
  const pts: [number, number][] = logR.map((r, i) => [f.x(r), f.y(delta[i])]);
  logR.forEach((r, i) => {
    svg.line(f.x(r), f.y(delta[i] - std[i]), f.x(r), f.y(delta[i] + std[i]), "#1f77b4", 1);
  });
  svg.polyline(pts, "#1f77b4");
  pts.forEach(([x, y]) => svg.circle(x, y, 3.5, "#1f77b4"));
  return svg.render();
}

// ---------------------------------------------------------------------------

const BUILDERS: Record<FigureId, (inputs: FigureInput[]) => string> = {
  fig2, fig3, fig4, fig5, fig6, fig7, fig8,
};

export function renderFigure(id: string, inputs: FigureInput[]): string {
  const builder = BUILDERS[id as FigureId];
  if (!builder) {
    throw new Error(`unknown figure id "${id}" (expected one of ${FIGURE_IDS.join(", ")})`);
  }
  return builder(inputs);
}

function one(inputs: FigureInput[], figure: string): Table {
  if (inputs.length !== 1) {
    throw new Error(`${figure} takes exactly one input table, got ${inputs.length}`);
  }
  return inputs[0].table;
}

function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}
