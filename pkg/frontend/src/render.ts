/**
 * The three figure kinds.
 *
 * decay:        V(t) against the exponential envelope from the log's bound
 *               column (annotated with alpha from the sidecar when present).
 * trajectory3d: actual vs reference position curves from the states
 *               companion file, drawn in a fixed orthographic projection.
 * inputs:       thrust and body angular velocity traces.
 */

import { Table, column, readLog, readStates } from "./csv.js";
import { Sidecar } from "./sidecar.js";
import { Series, renderChart } from "./svg.js";

export type FigureKind = "decay" | "trajectory3d" | "inputs";

export interface PlotSpec {
  kind: FigureKind;
  input: string;
  output: string;
  logScale?: boolean;
  sidecar?: Sidecar | null;
}

export function renderDecay(log: Table, sidecar: Sidecar | null, logScale = true): string {
  const t = column(log, "t");
  const V = column(log, "V");
  const bound = column(log, "v_bound");
  const series: Series[] = [{ x: t, y: V, label: "V(t)", color: "#1f5fad" }];
  const haveBound = bound.some((v) => Number.isFinite(v));
  if (haveBound) {
    series.push({ x: t, y: bound, label: "envelope", color: "#c23b22", dash: "6,4" });
  }
  let title = "Lyapunov decay";
  const alpha = sidecar?.stability?.alpha;
  if (haveBound && alpha !== undefined && alpha !== null) {
    title = `Lyapunov decay vs V(0)e^(-2*${alpha}*t)`;
  } else if (!haveBound) {
    title = "Lyapunov decay (envelope not applicable)";
  }
  return renderChart(series, {
    title,
    xLabel: "t [s]",
    yLabel: logScale ? "V (log scale)" : "V",
    logY: logScale,
  });
}

/** Fixed orthographic projection used by the 3-D figure. */
export function project(x: number, y: number, z: number): [number, number] {
  // view direction chosen so all three axes are visible; constants fixed for
  // deterministic output
  const c = Math.SQRT1_2;
  return [x * c - y * c, z - 0.5 * (x * c + y * c)];
}

export function renderTrajectory(states: Table): string {
  const names: [string, string, string][] = [
    ["p_x", "p_y", "p_z"],
    ["p_bar_x", "p_bar_y", "p_bar_z"],
  ];
  const series: Series[] = [];
  const labels = ["actual", "reference"];
  const colors = ["#1f5fad", "#c23b22"];
  for (let k = 0; k < 2; k++) {
    const [cx, cy, cz] = names[k];
    const xs = column(states, cx);
    const ys = column(states, cy);
    const zs = column(states, cz);
    const px: number[] = [];
    const py: number[] = [];
    for (let i = 0; i < xs.length; i++) {
      const [u, v] = project(xs[i], ys[i], zs[i]);
      px.push(u);
      py.push(v);
    }
    series.push({ x: px, y: py, label: labels[k], color: colors[k], dash: k === 1 ? "6,4" : undefined });
  }
  return renderChart(series, {
    title: "Trajectory (orthographic projection)",
    xLabel: "projected east-north [m]",
    yLabel: "projected up [m]",
  });
}

export function renderInputs(log: Table): string {
  const t = column(log, "t");
  const series: Series[] = [
    { x: t, y: column(log, "thrust"), label: "thrust [m/s^2]", color: "#1f5fad" },
    { x: t, y: column(log, "omega_x"), label: "omega_x [rad/s]", color: "#c23b22" },
    { x: t, y: column(log, "omega_y"), label: "omega_y [rad/s]", color: "#2e8b57" },
    { x: t, y: column(log, "omega_z"), label: "omega_z [rad/s]", color: "#8a5db8" },
  ];
  return renderChart(series, {
    title: "Control inputs",
    xLabel: "t [s]",
    yLabel: "thrust, omega",
  });
}

export function renderFigure(spec: PlotSpec): string {
  if (spec.kind === "decay") {
    return renderDecay(readLog(spec.input), spec.sidecar ?? null, spec.logScale ?? true);
  }
  if (spec.kind === "trajectory3d") {
    return renderTrajectory(readStates(spec.input));
  }
  if (spec.kind === "inputs") {
    return renderInputs(readLog(spec.input));
  }
  throw new Error(`unknown figure kind: ${(spec as PlotSpec).kind}`);
}
