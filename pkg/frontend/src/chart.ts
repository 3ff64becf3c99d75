import type { WindowPayload } from "./types.js";

/** Pure geometry for the stacked weekly chart.
 *
 * Every rendered coordinate maps to a value in the payload; a missing cell
 * breaks the band for that column instead of being drawn as zero.
 */

export const PALETTE = [
  "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

export interface Band {
  x0: number;
  x1: number;
  kind: "flagged" | "dirty";
}

export interface SeriesArea {
  column: string;
  color: string;
  d: string; // SVG path, possibly several closed subpaths
}

export interface Tick {
  pos: number;
  label: string;
}

export interface ChartLayout {
  width: number;
  height: number;
  plot: { x: number; y: number; w: number; h: number };
  areas: SeriesArea[];
  bands: Band[];
  xTicks: Tick[];
  yTicks: Tick[];
  maxY: number;
  keyAt(x: number): string | null;
  xFor(index: number): number;
}

const MARGIN = { left: 56, right: 12, top: 10, bottom: 26 };

function niceCeiling(value: number): number {
  if (value <= 0) return 1;
  const magnitude = 10 ** Math.floor(Math.log10(value));
  for (const step of [1, 2, 2.5, 5, 10]) {
    if (value <= step * magnitude) return step * magnitude;
  }
  return 10 * magnitude;
}

function runs(indices: number[]): Array<[number, number]> {
  const out: Array<[number, number]> = [];
  for (const i of indices) {
    const last = out[out.length - 1];
    if (last && i === last[1] + 1) last[1] = i;
    else out.push([i, i]);
  }
  return out;
}

export function buildChart(
  payload: WindowPayload,
  visibleColumns: string[],
  currentFlags: number[],
  dirtyKeys: Set<string>,
  width = 960,
  height = 360,
): ChartLayout {
  const n = payload.keys.length;
  const plot = {
    x: MARGIN.left,
    y: MARGIN.top,
    w: width - MARGIN.left - MARGIN.right,
    h: height - MARGIN.top - MARGIN.bottom,
  };
  const xFor = (i: number) => plot.x + (n <= 1 ? 0 : (i * plot.w) / (n - 1));

  const columns = visibleColumns.filter((c) => c in payload.series);

  // stack bottoms/tops per index; null contributes nothing and breaks
  // the band for the column it belongs to
  const bottoms = new Array<number>(n).fill(0);
  const stacked: Array<{ column: string; lo: number[]; hi: (number | null)[] }> = [];
  for (const column of columns) {
    const values = payload.series[column];
    const lo = [...bottoms];
    const hi: (number | null)[] = new Array(n).fill(null);
    for (let i = 0; i < n; i++) {
      const v = values[i];
      if (v === null || v === undefined) continue;
      hi[i] = bottoms[i] + v;
      bottoms[i] = hi[i] as number;
    }
    stacked.push({ column, lo, hi });
  }

  const maxY = niceCeiling(Math.max(1, ...bottoms));
  const yFor = (v: number) => plot.y + plot.h * (1 - v / maxY);

  const areas: SeriesArea[] = [];
  stacked.forEach((entry, order) => {
    const present = [...entry.hi.keys()].filter((i) => entry.hi[i] !== null);
    const pieces: string[] = [];
    for (const [start, end] of runs(present)) {
      const top: string[] = [];
      const bottom: string[] = [];
      for (let i = start; i <= end; i++) {
        top.push(`${xFor(i).toFixed(1)},${yFor(entry.hi[i] as number).toFixed(1)}`);
        bottom.unshift(`${xFor(i).toFixed(1)},${yFor(entry.lo[i]).toFixed(1)}`);
      }
      pieces.push(`M${top.join("L")}L${bottom.join("L")}Z`);
    }
    if (pieces.length) {
      areas.push({
        column: entry.column,
        color: PALETTE[order % PALETTE.length],
        d: pieces.join(""),
      });
    }
  });

  const half = n <= 1 ? plot.w / 2 : plot.w / (n - 1) / 2;
  const bands: Band[] = [];
  const flaggedIdx = [...currentFlags.keys()].filter((i) => currentFlags[i] === 0);
  for (const [start, end] of runs(flaggedIdx)) {
    bands.push({ x0: xFor(start) - half, x1: xFor(end) + half, kind: "flagged" });
  }
  const dirtyIdx = [...payload.keys.keys()].filter((i) => dirtyKeys.has(payload.keys[i]));
  for (const [start, end] of runs(dirtyIdx)) {
    bands.push({ x0: xFor(start) - half, x1: xFor(end) + half, kind: "dirty" });
  }

  const xTicks: Tick[] = [];
  for (let i = 0; i < n; i++) {
    if (payload.keys[i].endsWith("_01")) {
      xTicks.push({ pos: xFor(i), label: payload.keys[i].slice(5, 10) });
    }
  }
  const yTicks: Tick[] = [0, 0.25, 0.5, 0.75, 1].map((f) => ({
    pos: yFor(f * maxY),
    label: `${Math.round(f * maxY)}`,
  }));

  const keyAt = (x: number): string | null => {
    if (n === 0) return null;
    const i = Math.round(((x - plot.x) / plot.w) * (n - 1));
    return i >= 0 && i < n ? payload.keys[i] : null;
  };

  return { width, height, plot, areas, bands, xTicks, yTicks, maxY, keyAt, xFor };
}
