/** Parsing for the sweep results CSV emitted by the simulation CLI. */

export const REQUIRED_COLUMNS = [
  "n",
  "d",
  "lambda",
  "encoding",
  "observable",
  "num_pairs",
  "mean_k",
  "se_mean",
  "var_k",
  "se_var",
  "bound_var",
  "seed",
] as const;

export interface SweepRow {
  n: number;
  d: number;
  lambda: number;
  encoding: string;
  observable: string;
  num_pairs: number;
  mean_k: number;
  se_mean: number;
  var_k: number;
  se_var: number;
  bound_var: number;
  seed: number;
}

export class CsvSchemaError extends Error {}
export class CsvEmptyError extends Error {}

/** Parse one results CSV; throws on missing columns or zero data rows. */
export function parseSweepCsv(text: string, source = "<input>"): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvEmptyError(`${source}: file contains no rows`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new CsvSchemaError(`${source}: missing column(s): ${missing.join(", ")}`);
  }
  if (lines.length === 1) {
    throw new CsvEmptyError(`${source}: zero data rows`);
  }
  const index = new Map(header.map((h, i) => [h, i]));
  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length < header.length) {
      throw new CsvSchemaError(`${source}: row ${i + 1} has ${parts.length} fields, expected ${header.length}`);
    }
    const str = (col: string) => parts[index.get(col)!].trim();
    const num = (col: string) => {
      const value = Number(str(col));
      if (!Number.isFinite(value)) {
        throw new CsvSchemaError(`${source}: row ${i + 1}, column ${col} is not a number: ${str(col)}`);
      }
      return value;
    };
    rows.push({
      n: num("n"),
      d: num("d"),
      lambda: num("lambda"),
      encoding: str("encoding"),
      observable: str("observable"),
      num_pairs: num("num_pairs"),
      mean_k: num("mean_k"),
      se_mean: num("se_mean"),
      var_k: num("var_k"),
      se_var: num("se_var"),
      bound_var: num("bound_var"),
      seed: num("seed"),
    });
  }
  return rows;
}
