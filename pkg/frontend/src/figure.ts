/** SVG figure rendering: decay curves of kernel statistics versus qubit count.
 *
 * Rendering is a pure function of the parsed rows and the figure options, so
 * identical inputs produce byte-identical SVG output.
 */
import { SweepRow } from "./csv.js";
import { fitLog2Slope } from "./slope.js";

export type YField = "mean_k" | "var_k";
export type GroupBy = "observable" | "d";

export interface FigureOptions {
  yField: YField;
  groupBy: GroupBy;
  annotateSlopes: boolean;
  title?: string;
}

export interface Series {
  key: string;
  points: Array<{ n: number; log2Value: number }>;
  slope?: number;
  excluded: number;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 190, top: 44, bottom: 56 };
const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

function groupKey(row: SweepRow, groupBy: GroupBy): string {
  return groupBy === "observable" ? row.observable : `d=${row.d}`;
}

export function buildSeries(rows: SweepRow[], opts: FigureOptions): Series[] {
  const groups = new Map<string, SweepRow[]>();
  for (const row of rows) {
    const key = groupKey(row, opts.groupBy);
    const bucket = groups.get(key);
    if (bucket) bucket.push(row);
    else groups.set(key, [row]);
  }
  const keys = [...groups.keys()].sort((a, b) => {
    const da = a.match(/^d=(\d+)$/);
    const db = b.match(/^d=(\d+)$/);
    if (da && db) return Number(da[1]) - Number(db[1]);
    return a < b ? -1 : a > b ? 1 : 0;
  });
  const series: Series[] = [];
  for (const key of keys) {
    const bucket = groups.get(key)!.slice().sort((a, b) => a.n - b.n);
    const points: Array<{ n: number; log2Value: number }> = [];
    let excluded = 0;
    for (const row of bucket) {
      const v = Math.abs(row[opts.yField]);
      if (v <= 0) {
        excluded += 1;
        continue;
      }
      points.push({ n: row.n, log2Value: Math.log2(v) });
    }
    if (points.length === 0) {
      series.push({ key, points, excluded });
      continue;
    }
    let slope: number | undefined;
    if (opts.annotateSlopes) {
      const ns = bucket.map((r) => r.n);
      const vs = bucket.map((r) => r[opts.yField]);
      try {
        slope = fitLog2Slope(ns, vs).slope;
      } catch {
        slope = undefined; // fewer than two usable depths; legend omits the slope
      }
    }
    series.push({ key, points, slope, excluded });
  }
  return series;
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (lo === hi) return [lo];
  const step = Math.max(1, Math.round((hi - lo) / count));
  const out: number[] = [];
  for (let v = Math.ceil(lo); v <= Math.floor(hi); v += step) out.push(v);
  if (out.length === 0) out.push(Math.round((lo + hi) / 2));
  return out;
}

function fmt(x: number): string {
  return x.toFixed(2);
}

/** Render the decay figure as an SVG document string. */
export function renderSvg(rows: SweepRow[], opts: FigureOptions): string {
  const series = buildSeries(rows, opts);
  const drawable = series.filter((s) => s.points.length > 0);
  if (drawable.length === 0) {
    throw new Error("no plottable points: every value is zero");
  }
  const allN = drawable.flatMap((s) => s.points.map((p) => p.n));
  const allY = drawable.flatMap((s) => s.points.map((p) => p.log2Value));
  const nLo = Math.min(...allN);
  const nHi = Math.max(...allN);
  const yLo = Math.min(...allY);
  const yHi = Math.max(...allY);
  const yPad = (yHi - yLo || 1) * 0.08;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (n: number) =>
    MARGIN.left + (nHi === nLo ? plotW / 2 : ((n - nLo) / (nHi - nLo)) * plotW);
  const sy = (y: number) =>
    MARGIN.top + plotH - ((y - (yLo - yPad)) / (yHi + yPad - (yLo - yPad))) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  const title = opts.title ?? `${opts.yField} vs qubit count`;
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">${title}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="black"/>`,
  );
  parts.push(
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`,
  );
  for (const n of ticks(nLo, nHi, 8)) {
    const x = sx(n);
    parts.push(`<line x1="${fmt(x)}" y1="${y0}" x2="${fmt(x)}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${fmt(x)}" y="${y0 + 20}" text-anchor="middle" font-family="sans-serif" font-size="12">${n}</text>`,
    );
  }
  for (const t of ticks(yLo - yPad, yHi + yPad, 6)) {
    const y = sy(t);
    parts.push(`<line x1="${x0 - 5}" y1="${fmt(y)}" x2="${x0}" y2="${fmt(y)}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 9}" y="${fmt(y + 4)}" text-anchor="end" font-family="sans-serif" font-size="12">2^${t}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-family="sans-serif" font-size="13">qubit count n</text>`,
  );
  parts.push(
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${opts.yField} (log2 scale)</text>`,
  );

  // series
  drawable.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const coords = s.points.map((p) => `${fmt(sx(p.n))},${fmt(sy(p.log2Value))}`);
    if (coords.length > 1) {
      parts.push(
        `<polyline points="${coords.join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
      );
    }
    for (const p of s.points) {
      parts.push(
        `<circle cx="${fmt(sx(p.n))}" cy="${fmt(sy(p.log2Value))}" r="3" fill="${color}"/>`,
      );
    }
    const ly = MARGIN.top + 16 + i * 20;
    const lx = MARGIN.left + plotW + 14;
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${color}" stroke-width="1.5"/>`);
    const label =
      s.slope !== undefined && opts.annotateSlopes
        ? `${s.key} (slope ${s.slope.toFixed(2)})`
        : s.key;
    parts.push(
      `<text x="${lx + 28}" y="${ly}" font-family="sans-serif" font-size="12">${label}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
