import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { existsSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { main, parseArgs } from "../src/cli.js";

const FIXTURE = join(__dirname, "fixtures", "sweep_two_observables.csv");

let dir: string;

beforeEach(() => {
  dir = mkdtempSync(join(tmpdir(), "qntk-plots-"));
});

afterEach(() => {
  rmSync(dir, { recursive: true, force: true });
  vi.restoreAllMocks();
});

describe("parseArgs", () => {
  it("parses a full command line", () => {
    const args = parseArgs([
      "render",
      "--input", "a.csv",
      "--input", "b.csv",
      "--out", "fig.svg",
      "--y-field", "mean_k",
      "--group-by", "d",
      "--annotate-slopes",
    ]);
    expect(args.inputs).toEqual(["a.csv", "b.csv"]);
    expect(args.yField).toBe("mean_k");
    expect(args.groupBy).toBe("d");
    expect(args.annotateSlopes).toBe(true);
  });

  it("rejects bad usage", () => {
    expect(() => parseArgs([])).toThrow(/usage/);
    expect(() => parseArgs(["render", "--out", "x.svg"])).toThrow(/--input/);
    expect(() => parseArgs(["render", "--input", "a.csv"])).toThrow(/--out/);
    expect(() => parseArgs(["render", "--input", "a.csv", "--out", "x.png"])).toThrow(/svg/);
    expect(() => parseArgs(["render", "--input", "a.csv", "--out", "x.svg", "--y-field", "zzz"]))
      .toThrow(/y-field/);
  });
});

describe("main", () => {
  it("renders a figure end to end", () => {
    const out = join(dir, "fig.svg");
    const code = main([
      "render", "--input", FIXTURE, "--out", out, "--annotate-slopes",
    ]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("slope");
  });

  it("reports a named missing column with exit 1", () => {
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "n,d,encoding\n4,4,global_haar\n");
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const code = main(["render", "--input", bad, "--out", join(dir, "f.svg")]);
    expect(code).toBe(1);
    expect(err.mock.calls.flat().join(" ")).toMatch(/var_k/);
  });

  it("reports empty files with exit 1", () => {
    const empty = join(dir, "empty.csv");
    writeFileSync(
      empty,
      "n,d,lambda,encoding,observable,num_pairs,mean_k,se_mean,var_k,se_var,bound_var,seed\n",
    );
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const code = main(["render", "--input", empty, "--out", join(dir, "f.svg")]);
    expect(code).toBe(1);
    expect(err.mock.calls.flat().join(" ")).toMatch(/zero/);
  });
});
