#!/usr/bin/env node
/** Command line: render decay figures from sweep result CSVs.
 *
 * Usage:
 *   qntk-plots render --input results.csv [--input more.csv] --out fig.svg
 *                     [--y-field var_k|mean_k] [--group-by observable|d]
 *                     [--annotate-slopes] [--title "..."]
 */
import { readFileSync, writeFileSync } from "node:fs";
import { CsvEmptyError, CsvSchemaError, parseSweepCsv, SweepRow } from "./csv.js";
import { FigureOptions, GroupBy, renderSvg, YField } from "./figure.js";

interface CliArgs {
  inputs: string[];
  out: string;
  yField: YField;
  groupBy: GroupBy;
  annotateSlopes: boolean;
  title?: string;
}

export function parseArgs(argv: string[]): CliArgs {
  if (argv.length === 0 || argv[0] !== "render") {
    throw new Error("usage: qntk-plots render --input <csv> --out <svg> [options]");
  }
  const args: CliArgs = {
    inputs: [],
    out: "",
    yField: "var_k",
    groupBy: "observable",
    annotateSlopes: false,
  };
  for (let i = 1; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`flag ${flag} needs a value`);
      return argv[i];
    };
    switch (flag) {
      case "--input":
        args.inputs.push(next());
        break;
      case "--out":
        args.out = next();
        break;
      case "--y-field": {
        const v = next();
        if (v !== "var_k" && v !== "mean_k") throw new Error(`invalid --y-field: ${v}`);
        args.yField = v;
        break;
      }
      case "--group-by": {
        const v = next();
        if (v !== "observable" && v !== "d") throw new Error(`invalid --group-by: ${v}`);
        args.groupBy = v;
        break;
      }
      case "--annotate-slopes":
        args.annotateSlopes = true;
        break;
      case "--title":
        args.title = next();
        break;
      default:
        throw new Error(`unknown flag: ${flag}`);
    }
  }
  if (args.inputs.length === 0) throw new Error("at least one --input is required");
  if (!args.out) throw new Error("--out is required");
  if (!args.out.endsWith(".svg")) throw new Error("output must be an .svg path");
  return args;
}

export function runRender(args: CliArgs): void {
  const rows: SweepRow[] = [];
  for (const path of args.inputs) {
    rows.push(...parseSweepCsv(readFileSync(path, "utf-8"), path));
  }
  const opts: FigureOptions = {
    yField: args.yField,
    groupBy: args.groupBy,
    annotateSlopes: args.annotateSlopes,
    title: args.title,
  };
  writeFileSync(args.out, renderSvg(rows, opts), "utf-8");
}

export function main(argv: string[]): number {
  try {
    runRender(parseArgs(argv));
    return 0;
  } catch (err) {
    if (err instanceof CsvSchemaError || err instanceof CsvEmptyError) {
      console.error(`data error: ${(err as Error).message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 1;
  }
}

const isDirectRun = process.argv[1]?.endsWith("cli.js");
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
