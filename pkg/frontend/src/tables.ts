/**
 * Reader for the simulator's schema-versioned CSV tables.
 *
 * Every table starts with "# schema: hfc/<kind>/v1", then a header row.
 * Parsing is strict: a missing schema line, an unexpected kind, a missing
 * column or an empty body all throw, naming the offender, so a figure is
 * never built from half-understood data.
 */

import { readFileSync } from "node:fs";

export interface Table {
  kind: string;
  columns: string[];
  rows: Record<string, string>[];
  path: string;
}

const SCHEMA_PREFIX = "# schema: ";

export function readTable(path: string): Table {
  const lines = readFileSync(path, "utf8").split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || !lines[0].startsWith(SCHEMA_PREFIX)) {
    throw new Error(`${path}: missing schema line ("${SCHEMA_PREFIX}hfc/<kind>/v1")`);
  }
  const tag = lines[0].slice(SCHEMA_PREFIX.length);
  const parts = tag.split("/");
  if (parts.length !== 3 || parts[0] !== "hfc" || parts[2] !== "v1") {
    throw new Error(`${path}: unsupported schema tag "${tag}"`);
  }
  if (lines.length < 2) {
    throw new Error(`${path}: schema line but no header row`);
  }
  const columns = lines[1].split(",");
  const rows: Record<string, string>[] = [];
  for (const line of lines.slice(2)) {
    const values = line.split(",");
    if (values.length !== columns.length) {
      throw new Error(`${path}: row has ${values.length} fields, header has ${columns.length}`);
    }
    const row: Record<string, string> = {};
    columns.forEach((c, i) => (row[c] = values[i]));
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new Error(`${path}: table has no data rows`);
  }
  return { kind: parts[1], columns, rows, path };
}

export function expectKind(table: Table, kind: string): Table {
  if (table.kind !== kind) {
    throw new Error(`${table.path}: expected an hfc/${kind}/v1 table, got hfc/${table.kind}/v1`);
  }
  return table;
}

/** Numeric column, validated row by row; names the column on failure. */
export function numbers(table: Table, column: string): number[] {
  if (!table.columns.includes(column)) {
    throw new Error(`${table.path}: missing column "${column}"`);
  }
  return table.rows.map((row, i) => {
    const value = Number(row[column]);
    if (!Number.isFinite(value)) {
      throw new Error(`${table.path}: column "${column}" row ${i + 1} is not numeric (${row[column]})`);
    }
    return value;
  });
}

export function strings(table: Table, column: string): string[] {
  if (!table.columns.includes(column)) {
    throw new Error(`${table.path}: missing column "${column}"`);
  }
  return table.rows.map((row) => row[column]);
}

/** Optional numeric cell ("" stays null), for columns like crossover_q. */
export function maybeNumber(row: Record<string, string>, column: string): number | null {
  const raw = row[column];
  if (raw === undefined) return null;
  if (raw === "") return null;
  const value = Number(raw);
  return Number.isFinite(value) ? value : null;
}
