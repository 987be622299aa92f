import { describe, expect, it } from "vitest";

import { LOG_COLUMNS, STATES_COLUMNS, SchemaError, column, parseCsv } from "../src/csv.js";

export function makeLogCsv(rows: number, boundNaN = false): string {
  const lines = [LOG_COLUMNS.join(",")];
  for (let k = 0; k < rows; k++) {
    const t = k * 0.01;
    const V = 2.0 * Math.exp(-t);
    const bound = boundNaN ? "nan" : String(2.0 * Math.exp(-t) * 1.01);
    const xi = Array(9).fill("0.1");
    const e = Array(9).fill("0.05");
    lines.push([t, ...xi, ...e, 9.81, 0.01, -0.02, 0.0, V, bound].join(","));
  }
  return lines.join("\n") + "\n";
}

describe("parseCsv", () => {
  it("accepts the documented log schema", () => {
    const table = parseCsv(makeLogCsv(5), LOG_COLUMNS);
    expect(table.rows).toBe(5);
    expect(column(table, "t").length).toBe(5);
    expect(column(table, "V")[0]).toBeCloseTo(2.0);
  });

  it("parses nan bound values", () => {
    const table = parseCsv(makeLogCsv(3, true), LOG_COLUMNS);
    expect(Number.isNaN(column(table, "v_bound")[0])).toBe(true);
  });

  it("names the offending column on header mismatch", () => {
    const bad = makeLogCsv(2).replace("xi_p_x", "xi_px");
    expect(() => parseCsv(bad, LOG_COLUMNS)).toThrowError(/column 1.*xi_p_x.*xi_px/);
  });

  it("reports wrong column counts", () => {
    const bad = "a,b\n1,2\n";
    expect(() => parseCsv(bad, LOG_COLUMNS)).toThrowError(/expected 25 columns, got 2/);
  });

  it("reports bad numeric fields with row and column", () => {
    const lines = makeLogCsv(2).split("\n");
    lines[1] = lines[1].replace("9.81", "oops");
    expect(() => parseCsv(lines.join("\n"), LOG_COLUMNS)).toThrowError(/row 1.*thrust.*oops/);
  });

  it("rejects short rows", () => {
    const lines = makeLogCsv(2).split("\n");
    lines[2] = "1,2,3";
    expect(() => parseCsv(lines.join("\n"), LOG_COLUMNS)).toThrowError(SchemaError);
  });

  it("validates the states schema", () => {
    const text = STATES_COLUMNS.join(",") + "\n0,1,2,3,1,2,3\n";
    const table = parseCsv(text, STATES_COLUMNS);
    expect(column(table, "p_bar_z")[0]).toBe(3);
  });
});
