#!/usr/bin/env node
import { readFileSync, writeFileSync, mkdirSync, realpathSync } from "fs";
import path from "path";
import { fileURLToPath } from "url";

import { plotBank } from "./bank.js";
import { curveFromSweep, plotCurve } from "./curve.js";
import { PlotkitError } from "./errors.js";
import { parseGrid } from "./grid.js";
import { parseTrace } from "./trace.js";

const USAGE = `usage:
  plotkit bank  --trace trace_0.csv --grid grid.csv [--t 20] [--sigma 1] --out fig.svg
  plotkit curve --summary sweep_summary.json [--summary more.json] --axis dimension [--log-y] --out mse.svg`;

interface Args {
  flags: Map<string, string[]>;
  bools: Set<string>;
}

function parseArgs(argv: string[], boolNames: string[]): Args {
  const flags = new Map<string, string[]>();
  const bools = new Set<string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) {
      throw new PlotkitError(`unexpected argument ${arg}`);
    }
    const name = arg.slice(2);
    if (boolNames.includes(name)) {
      bools.add(name);
      continue;
    }
    const value = argv[++i];
    if (value === undefined) {
      throw new PlotkitError(`--${name} needs a value`);
    }
    const list = flags.get(name) ?? [];
    list.push(value);
    flags.set(name, list);
  }
  return { flags, bools };
}

function required(args: Args, name: string): string {
  const v = args.flags.get(name);
  if (!v) throw new PlotkitError(`missing --${name}`);
  return v[v.length - 1];
}

function writeSvg(out: string, svg: string): void {
  mkdirSync(path.dirname(path.resolve(out)), { recursive: true });
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
}

function runBank(argv: string[]): void {
  const args = parseArgs(argv, []);
  const trace = parseTrace(readFileSync(required(args, "trace"), "utf-8"));
  const grid = parseGrid(readFileSync(required(args, "grid"), "utf-8"));
  const tRaw = args.flags.get("t");
  const t = tRaw ? Number(tRaw[tRaw.length - 1]) : trace.iterations[trace.iterations.length - 1];
  const sigmaRaw = args.flags.get("sigma");
  const nSigma = sigmaRaw ? Number(sigmaRaw[sigmaRaw.length - 1]) : 1;
  const svg = plotBank(trace, grid, t, { nSigma });
  writeSvg(required(args, "out"), svg);
}

function runCurve(argv: string[]): void {
  const args = parseArgs(argv, ["log-y"]);
  const axis = required(args, "axis");
  const summaries = args.flags.get("summary");
  if (!summaries) throw new PlotkitError("missing --summary");
  const tables = summaries.map((file) =>
    curveFromSweep(JSON.parse(readFileSync(file, "utf-8")), axis)
  );
  const svg = plotCurve(tables, {
    logY: args.bools.has("log-y"),
    xLabel: axis,
    yLabel: "MSE of the mean estimate",
  });
  writeSvg(required(args, "out"), svg);
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    switch (command) {
      case "bank":
        runBank(rest);
        return 0;
      case "curve":
        runCurve(rest);
        return 0;
      case undefined:
      case "--help":
      case "-h":
        console.log(USAGE);
        return command === undefined ? 1 : 0;
      default:
        throw new PlotkitError(`unknown command ${command}`);
    }
  } catch (err) {
    if (err instanceof PlotkitError) {
      console.error(`plotkit: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err && (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`plotkit: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const invokedAs = process.argv[1];
if (invokedAs) {
  let isEntry = false;
  try {
    isEntry = realpathSync(invokedAs) === fileURLToPath(import.meta.url);
  } catch {
    isEntry = false;
  }
  if (isEntry) process.exit(main(process.argv.slice(2)));
}
