/**
 * Focus-mode distortion: a discrete Cartesian fisheye over the treemap.
 *
 * Enlarging a cell is done by remapping the parent's x and y axes with a
 * monotone piecewise-linear function that stretches the focused intervals
 * and compresses the rest. Because every nested coordinate goes through the
 * same map, sibling order, adjacency, and strict containment survive, and
 * each parent's total child area is conserved (the interior still tiles the
 * same box). The effect recurses down the hover path until cells reach the
 * minimum legible size; locked loci stay enlarged simultaneously, and a
 * locked locus may swap its interior for a details card.
 */

import { LayoutCell, MIN_CELL, Rect } from "./treemap";

/** Fraction of the parent span a focused cell tries to occupy. */
export const FOCUS_FRACTION = 0.6;
/** Focused intervals never take more than this share of an axis. */
const MAX_FOCUS_SHARE = 0.9;

export interface DistortionOptions {
  focusFraction?: number;
  /** Loci rendered as a details card instead of nested children. */
  detailCards?: Set<string>;
}

type Interval = { lo: number; hi: number };

interface FocusBlock extends Interval {
  /** How many focused cells merged into this block; each one claims its own
   * share of the axis. */
  count: number;
}

function mergeIntervals(intervals: Interval[]): FocusBlock[] {
  const sorted = intervals
    .filter((iv) => iv.hi > iv.lo)
    .sort((a, b) => a.lo - b.lo);
  const out: FocusBlock[] = [];
  for (const iv of sorted) {
    const last = out[out.length - 1];
    if (last && iv.lo <= last.hi) {
      last.hi = Math.max(last.hi, iv.hi);
      last.count += 1;
    } else {
      out.push({ ...iv, count: 1 });
    }
  }
  return out;
}

export type AxisMap = (v: number) => number;

/**
 * Monotone piecewise-linear map of [lo, hi] onto itself that grows each
 * focus interval toward `fraction` of the axis (never shrinking it) while
 * compressing the gaps proportionally.
 */
export function buildAxisMap(lo: number, hi: number, focus: Interval[], fraction: number): AxisMap {
  const span = hi - lo;
  const merged = mergeIntervals(
    focus.map((iv) => ({ lo: Math.max(iv.lo, lo), hi: Math.min(iv.hi, hi) })),
  );
  if (span <= 0 || merged.length === 0) return (v) => v;

  const focusSizes = merged.map((iv) => iv.hi - iv.lo);
  const focusTotal = focusSizes.reduce((a, b) => a + b, 0);
  const gapTotal = span - focusTotal;
  if (gapTotal <= 1e-9) return (v) => v;

  // Each merged block claims fraction-of-axis per focused cell it contains;
  // growth (never shrinkage) is scaled down to fit under the focus cap.
  const raw = merged.map((iv, i) => Math.max(focusSizes[i], iv.count * fraction * span));
  const growth = raw.map((t, i) => t - focusSizes[i]);
  const growthTotal = growth.reduce((a, b) => a + b, 0);
  const cap = MAX_FOCUS_SHARE * span;
  const allowed = Math.max(cap - focusTotal, 0);
  const scale = growthTotal > allowed ? allowed / growthTotal : 1;
  const targets = focusSizes.map((s, i) => s + growth[i] * scale);
  const newFocusTotal = targets.reduce((a, b) => a + b, 0);
  const gapScale = (span - newFocusTotal) / gapTotal;

  // Breakpoints of the piecewise map: [gap][focus][gap][focus]...[gap]
  const sourceStops: number[] = [lo];
  const targetStops: number[] = [lo];
  let cursor = lo;
  let mapped = lo;
  merged.forEach((iv, i) => {
    mapped += (iv.lo - cursor) * gapScale;
    sourceStops.push(iv.lo);
    targetStops.push(mapped);
    mapped += targets[i];
    sourceStops.push(iv.hi);
    targetStops.push(mapped);
    cursor = iv.hi;
  });
  sourceStops.push(hi);
  targetStops.push(hi); // closing gap lands exactly on the axis end

  return (v: number) => {
    if (v <= lo) return lo + (v - lo);
    if (v >= hi) return hi + (v - hi);
    let seg = sourceStops.length - 2;
    for (let i = 1; i < sourceStops.length; i++) {
      if (v <= sourceStops[i]) {
        seg = i - 1;
        break;
      }
    }
    const s0 = sourceStops[seg];
    const s1 = sourceStops[seg + 1];
    const t0 = targetStops[seg];
    const t1 = targetStops[seg + 1];
    if (s1 <= s0) return t0;
    return t0 + ((v - s0) / (s1 - s0)) * (t1 - t0);
  };
}

function remapCell(cell: LayoutCell, mapX: AxisMap, mapY: AxisMap): LayoutCell {
  const x0 = mapX(cell.x);
  const x1 = mapX(cell.x + cell.w);
  const y0 = mapY(cell.y);
  const y1 = mapY(cell.y + cell.h);
  return {
    ...cell,
    x: x0,
    w: x1 - x0,
    y: y0,
    h: y1 - y0,
    children: cell.children.map((c) => remapCell(c, mapX, mapY)),
  };
}

function isFocusTarget(cell: LayoutCell, hoverPath: string[], depth: number, loci: Set<string>): boolean {
  return hoverPath[depth] === cell.id || loci.has(cell.id);
}

/** Every cell on a path from the root to a locus: a locked locus keeps its
 * whole ancestor chain expanded, like a hover frozen in place. */
function locusPaths(root: LayoutCell, loci: Set<string>): Set<string> {
  const out = new Set<string>();
  const walk = (cell: LayoutCell, trail: string[]): void => {
    if (loci.has(cell.id)) {
      for (const id of trail) out.add(id);
      out.add(cell.id);
    }
    for (const child of cell.children) walk(child, [...trail, cell.id]);
  };
  for (const child of root.children) walk(child, []);
  return out;
}

function distortLevel(
  parent: LayoutCell,
  hoverPath: string[],
  depth: number,
  loci: Set<string>,
  fraction: number,
): LayoutCell {
  if (parent.children.length === 0) return parent;
  if (parent.w < MIN_CELL.w * 2 || parent.h < MIN_CELL.h * 2) return parent;

  const focused = parent.children.filter((c) => isFocusTarget(c, hoverPath, depth, loci));
  let children = parent.children;
  if (focused.length > 0 && focused.length < children.length) {
    const mapX = buildAxisMap(
      Math.min(...children.map((c) => c.x)),
      Math.max(...children.map((c) => c.x + c.w)),
      focused.map((c) => ({ lo: c.x, hi: c.x + c.w })),
      fraction,
    );
    const mapY = buildAxisMap(
      Math.min(...children.map((c) => c.y)),
      Math.max(...children.map((c) => c.y + c.h)),
      focused.map((c) => ({ lo: c.y, hi: c.y + c.h })),
      fraction,
    );
    children = children.map((c) => remapCell(c, mapX, mapY));
  }
  return {
    ...parent,
    children: children.map((c) => distortLevel(c, hoverPath, depth + 1, loci, fraction)),
  };
}

/**
 * Apply the focus distortion to a laid-out treemap. `hoverPath` lists cell
 * ids from the root's child down to the hovered cell. Identity when focus
 * mode is off.
 */
export function applyFocusDistortion(
  layout: LayoutCell,
  hoverPath: string[],
  loci: Set<string>,
  focusMode: boolean,
  options: DistortionOptions = {},
): LayoutCell {
  if (!focusMode) return layout;
  const fraction = options.focusFraction ?? FOCUS_FRACTION;
  return distortLevel(layout, hoverPath, 0, locusPaths(layout, loci), fraction);
}

export function totalArea(cells: { w: number; h: number }[]): number {
  return cells.reduce((acc, c) => acc + c.w * c.h, 0);
}

export function cellsOverlapArea(a: Rect, b: Rect): number {
  const w = Math.min(a.x + a.w, b.x + b.w) - Math.max(a.x, b.x);
  const h = Math.min(a.y + a.h, b.y + b.h) - Math.max(a.y, b.y);
  return Math.max(w, 0) * Math.max(h, 0);
}
