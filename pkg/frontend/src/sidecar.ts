/** Reader for the JSON sidecar written next to each run log. */

import { existsSync, readFileSync } from "fs";

export interface StabilityInfo {
  alpha: number;
  margin: number;
  condition_holds: boolean;
}

export interface Sidecar {
  stability: StabilityInfo | null;
  scenario: Record<string, unknown> | null;
}

/** Sidecar path convention: <log path>.meta.json */
export function sidecarPath(csvPath: string): string {
  return `${csvPath}.meta.json`;
}

export function readSidecar(csvPath: string): Sidecar | null {
  const path = sidecarPath(csvPath);
  if (!existsSync(path)) {
    return null;
  }
  const raw = JSON.parse(readFileSync(path, "utf8"));
  return {
    stability: raw.stability ?? null,
    scenario: raw.scenario ?? null,
  };
}
