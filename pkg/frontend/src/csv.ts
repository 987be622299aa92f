/**
 * Parsers for the simulation-log file contracts.
 *
 * Primary log: 25 columns (t, xi blocks, error blocks, thrust, omega, V,
 * v_bound). States companion: 7 columns (t, p, p_bar). Any header mismatch
 * raises with per-column diagnostics.
 */

import { readFileSync } from "fs";

export const LOG_COLUMNS: readonly string[] = [
  "t",
  ...["p", "v", "r"].flatMap((b) => ["x", "y", "z"].map((a) => `xi_${b}_${a}`)),
  ...["p", "v", "r"].flatMap((b) => ["x", "y", "z"].map((a) => `e_${b}_${a}`)),
  "thrust",
  "omega_x",
  "omega_y",
  "omega_z",
  "V",
  "v_bound",
];

export const STATES_COLUMNS: readonly string[] = [
  "t",
  "p_x",
  "p_y",
  "p_z",
  "p_bar_x",
  "p_bar_y",
  "p_bar_z",
];

export interface Table {
  columns: string[];
  /** column-major: data.get(name) is the full series for that column */
  data: Map<string, number[]>;
  rows: number;
}

export class SchemaError extends Error {}

function diagnoseHeader(actual: string[], expected: readonly string[]): string {
  if (actual.length !== expected.length) {
    return `expected ${expected.length} columns, got ${actual.length}`;
  }
  const bad: string[] = [];
  for (let i = 0; i < expected.length; i++) {
    if (actual[i] !== expected[i]) {
      bad.push(`column ${i}: expected "${expected[i]}", got "${actual[i]}"`);
    }
  }
  return bad.join("; ");
}

export function parseCsv(text: string, expected: readonly string[]): Table {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length === 0 || lines[0].length === 0) {
    throw new SchemaError("empty file");
  }
  const header = lines[0].split(",");
  const diag = diagnoseHeader(header, expected);
  if (diag.length > 0) {
    throw new SchemaError(`header mismatch: ${diag}`);
  }
  const data = new Map<string, number[]>(expected.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== expected.length) {
      throw new SchemaError(`row ${i}: expected ${expected.length} fields, got ${parts.length}`);
    }
    for (let j = 0; j < parts.length; j++) {
      const v = Number(parts[j]);
      if (Number.isNaN(v) && parts[j].trim().toLowerCase() !== "nan") {
        throw new SchemaError(`row ${i}, column "${expected[j]}": not a number: "${parts[j]}"`);
      }
      data.get(expected[j])!.push(v);
    }
  }
  return { columns: [...expected], data, rows: lines.length - 1 };
}

export function readLog(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), LOG_COLUMNS);
}

export function readStates(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), STATES_COLUMNS);
}

export function column(table: Table, name: string): number[] {
  const col = table.data.get(name);
  if (col === undefined) {
    throw new SchemaError(`no such column: ${name}`);
  }
  return col;
}
