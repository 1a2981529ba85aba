import type { Row } from "../schema.js";
import { num } from "../schema.js";

/** "2^-10" when eps is an exact binary power, else the plain value. */
export function epsLabel(eps: number): string {
  const k = Math.log2(eps);
  if (Math.abs(k - Math.round(k)) < 1e-9) return `2^${Math.round(k)}`;
  return String(eps);
}

export function groupBy<K extends string>(rows: Row[], key: (r: Row) => K): Map<K, Row[]> {
  const out = new Map<K, Row[]>();
  for (const r of rows) {
    const k = key(r);
    const bucket = out.get(k);
    if (bucket) bucket.push(r);
    else out.set(k, [r]);
  }
  return out;
}

/** Sorted positive (x, y) pairs; log plots cannot hold zeros. */
export function positivePoints(
  rows: Row[],
  xCol: string,
  yCol: string,
): Array<[number, number]> {
  const pts = rows
    .map((r): [number, number] => [num(r, xCol), num(r, yCol)])
    .filter(([x, y]) => x > 0 && y > 0);
  pts.sort((a, b) => a[0] - b[0]);
  return pts;
}

export function extent(values: number[]): [number, number] | null {
  if (values.length === 0) return null;
  let lo = values[0]!;
  let hi = values[0]!;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

export function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}
