/** Least-squares decay-rate fit shared with the simulation package.
 *
 * Slope of log2(|y|) against the qubit count n, computed with the plain
 * centered-sums formula so the result agrees with the Python implementation
 * to double-precision accuracy.  Values that are exactly zero cannot enter
 * the log and are excluded (their count is reported).
 */

export interface SlopeFit {
  slope: number;
  intercept: number;
  rSquared: number;
  numUsed: number;
  numExcluded: number;
}

export function fitLog2Slope(ns: number[], values: number[]): SlopeFit {
  if (ns.length !== values.length) {
    throw new Error(`length mismatch: ${ns.length} vs ${values.length}`);
  }
  const xs: number[] = [];
  const ys: number[] = [];
  let excluded = 0;
  for (let i = 0; i < ns.length; i++) {
    const v = Math.abs(values[i]);
    if (v <= 0) {
      excluded += 1;
      continue;
    }
    xs.push(ns[i]);
    ys.push(Math.log2(v));
  }
  if (new Set(xs).size < 2) {
    throw new Error("not enough positive values at distinct n to fit a slope");
  }
  const xMean = xs.reduce((a, b) => a + b, 0) / xs.length;
  const yMean = ys.reduce((a, b) => a + b, 0) / ys.length;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < xs.length; i++) {
    sxx += (xs[i] - xMean) ** 2;
    sxy += (xs[i] - xMean) * (ys[i] - yMean);
  }
  const slope = sxy / sxx;
  const intercept = yMean - slope * xMean;
  let ssRes = 0;
  let ssTot = 0;
  for (let i = 0; i < xs.length; i++) {
    ssRes += (ys[i] - (intercept + slope * xs[i])) ** 2;
    ssTot += (ys[i] - yMean) ** 2;
  }
  const rSquared = ssTot === 0 ? 1 : 1 - ssRes / ssTot;
  return { slope, intercept, rSquared, numUsed: xs.length, numExcluded: excluded };
}
