#!/usr/bin/env node
/**
 * plot --kind decay|trajectory3d|inputs --in <csv> --out <svg> [--linear]
 *
 * decay/inputs read the 25-column run log (decay also picks up the JSON
 * sidecar next to it); trajectory3d reads the states companion file.
 * Exit codes: 0 success, 1 data/schema error, 2 usage error.
 */

import { writeFileSync } from "fs";

import { SchemaError } from "./csv.js";
import { readSidecar } from "./sidecar.js";
import { FigureKind, renderFigure } from "./render.js";

const USAGE =
  "usage: plot --kind decay|trajectory3d|inputs --in <csv> --out <svg> [--linear]";

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
  logScale: boolean;
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] === "plot") {
    argv = argv.slice(1);
  }
  const opts = new Map<string, string>();
  let logScale = true;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--linear") {
      logScale = false;
      continue;
    }
    if (a === "--kind" || a === "--in" || a === "--out") {
      const v = argv[i + 1];
      if (v === undefined) {
        throw new UsageError(`missing value for ${a}`);
      }
      opts.set(a, v);
      i++;
      continue;
    }
    throw new UsageError(`unknown argument: ${a}`);
  }
  const kind = opts.get("--kind");
  const input = opts.get("--in");
  const output = opts.get("--out");
  if (!kind || !input || !output) {
    throw new UsageError("missing required --kind/--in/--out");
  }
  if (kind !== "decay" && kind !== "trajectory3d" && kind !== "inputs") {
    throw new UsageError(`invalid --kind: ${kind}`);
  }
  return { kind, input, output, logScale };
}

export class UsageError extends Error {}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    console.error(USAGE);
    return 2;
  }
  try {
    const sidecar = args.kind === "decay" ? readSidecar(args.input) : null;
    const svg = renderFigure({
      kind: args.kind,
      input: args.input,
      output: args.output,
      logScale: args.logScale,
      sidecar,
    });
    writeFileSync(args.output, svg);
    console.log(`wrote ${args.output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(String(err instanceof Error ? err.message : err));
    }
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
