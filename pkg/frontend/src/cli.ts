/**
 * hfc-figures --figure fig7 --in qscan.csv --in qscan_summary.csv --out fig7.svg
 *
 * Reads the simulator's exported tables and writes one figure as SVG plus a
 * PNG alongside (same basename). --label values pair with --in inputs in
 * order (fig2 uses them as panel titles and to locate the quantum panel).
 * Nothing is written when any input fails to parse.
 */

import { writeFileSync } from "node:fs";
import sharp from "sharp";

import { FIGURE_IDS, FigureInput, renderFigure } from "./figures.js";
import { readTable } from "./tables.js";

interface Args {
  figure: string;
  inputs: string[];
  labels: string[];
  out: string;
  png: boolean;
}

export function parseArgs(argv: string[]): Args {
  const args: Args = { figure: "", inputs: [], labels: [], out: "", png: true };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`${flag} expects a value`);
      return argv[++i];
    };
    if (flag === "--figure") args.figure = next();
    else if (flag === "--in") args.inputs.push(next());
    else if (flag === "--label") args.labels.push(next());
    else if (flag === "--out") args.out = next();
    else if (flag === "--no-png") args.png = false;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!args.figure) throw new Error(`--figure is required (${FIGURE_IDS.join(", ")})`);
  if (args.inputs.length === 0) throw new Error("--in is required at least once");
  if (!args.out) throw new Error("--out is required (path of the SVG to write)");
  return args;
}

export async function run(argv: string[]): Promise<number> {
  const args = parseArgs(argv);
  const inputs: FigureInput[] = args.inputs.map((path, i) => ({
    table: readTable(path),
    label: args.labels[i],
  }));
  const svg = renderFigure(args.figure, inputs);
  writeFileSync(args.out, svg);
  console.log(`wrote ${args.out}`);
  if (args.png) {
    const pngPath = args.out.replace(/\.svg$/, "") + ".png";
    const buffer = await sharp(Buffer.from(svg), { density: 144 }).png().toBuffer();
    writeFileSync(pngPath, buffer);
    console.log(`wrote ${pngPath}`);
  }
  return 0;
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js");
if (invokedDirectly) {
  run(process.argv.slice(2))
    .then((code) => process.exit(code))
    .catch((err) => {
      console.error(`error: ${err instanceof Error ? err.message : err}`);
      process.exit(1);
    });
}
