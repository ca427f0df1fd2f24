/**
 * Nested treemap layout.
 *
 * Concepts are rectangles; children are nested strictly inside their
 * parent's cell, siblings never overlap, and sibling areas follow the
 * configured scaling mode (equal, subtree size, or child count). The tiling
 * ratio states the preferred cell aspect ratio: strips are chosen
 * squarified-style, scoring each candidate against that target.
 */

import type { Neighborhood, NeighborhoodNode, ScalingMode, ViewState } from "./types";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface LayoutCell extends Rect {
  id: string;
  label: string;
  depth: number; // nesting level within this layout, 0 = root cell
  layerLabel: string | null;
  children: LayoutCell[];
}

/** Inner padding so children sit strictly inside their parent. */
export const CELL_PADDING = 3;
/** Space reserved for the cell's own label row. */
export const HEADER_HEIGHT = 16;
/** Cells are never shrunk below this legible size. */
export const MIN_CELL = { w: 24, h: 14 };

interface TreeNode {
  node: NeighborhoodNode;
  children: TreeNode[];
}

/** The subgraph arrives as a node/edge list; rebuild the nesting tree under
 * the focused concept. A node with several parents in the subgraph nests
 * under its id-smallest parent so it is rendered exactly once. */
export function buildHierarchy(subgraph: Neighborhood, rootId: string): TreeNode | null {
  const byId = new Map(subgraph.nodes.map((n) => [n.id, n]));
  const root = byId.get(rootId);
  if (!root) return null;
  const childIds = new Map<string, string[]>();
  const seen = new Set<string>();
  const sortedEdges = [...subgraph.edges].sort(
    (a, b) => a.child.localeCompare(b.child) || a.parent.localeCompare(b.parent),
  );
  for (const e of sortedEdges) {
    if (!byId.has(e.parent) || !byId.has(e.child)) continue;
    if (seen.has(e.child)) continue; // first (id-smallest) parent wins
    seen.add(e.child);
    const list = childIds.get(e.parent) ?? [];
    list.push(e.child);
    childIds.set(e.parent, list);
  }
  const build = (id: string): TreeNode => ({
    node: byId.get(id)!,
    children: (childIds.get(id) ?? []).sort().map(build),
  });
  return build(rootId);
}

function weight(node: TreeNode, mode: ScalingMode, normalization: boolean): number {
  let w: number;
  switch (mode) {
    case "equal":
      w = 1;
      break;
    case "subtree":
      w = Math.max(node.node.subtree_size, 1);
      break;
    case "children":
      w = Math.max(node.node.child_count, 1);
      break;
  }
  // Normalization softens dominance: big cells shrink, small ones grow.
  return normalization ? Math.sqrt(w) : w;
}

function worstAspect(
  areas: number[],
  total: number,
  side: number,
  target: number,
  horizontal: boolean,
): number {
  const thickness = total / side;
  let worst = 0;
  for (const a of areas) {
    const span = a / thickness;
    // width/height: horizontal strips stack cells side by side (span wide,
    // thickness tall); vertical strips are the transpose.
    const ratio = horizontal ? span / thickness : thickness / span;
    const score = Math.max(ratio / target, target / ratio);
    if (score > worst) worst = score;
  }
  return worst;
}

interface Weighted<T> {
  item: T;
  area: number;
}

/** Squarified strip packing that keeps input order within each strip. */
function packStrips<T>(items: Weighted<T>[], rect: Rect, target: number): Map<T, Rect> {
  const out = new Map<T, Rect>();
  if (items.length === 0) return out;
  let { x, y, w, h } = rect;
  let rest = items;
  while (rest.length > 0) {
    const horizontal = h > w / Math.max(target, 1e-6);
    const side = Math.max(horizontal ? w : h, 1e-9);
    const strip: Weighted<T>[] = [rest[0]];
    let stripTotal = rest[0].area;
    let score = worstAspect([rest[0].area], stripTotal, side, target, horizontal);
    let i = 1;
    while (i < rest.length) {
      const nextAreas = strip.map((s) => s.area).concat(rest[i].area);
      const nextTotal = stripTotal + rest[i].area;
      const nextScore = worstAspect(nextAreas, nextTotal, side, target, horizontal);
      if (nextScore > score) break;
      strip.push(rest[i]);
      stripTotal = nextTotal;
      score = nextScore;
      i += 1;
    }
    const thickness = stripTotal / side;
    let pos = 0;
    for (let s = 0; s < strip.length; s++) {
      const isLast = s === strip.length - 1;
      const span = isLast ? side - pos : strip[s].area / thickness;
      if (horizontal) {
        out.set(strip[s].item, { x: x + pos, y, w: span, h: thickness });
      } else {
        out.set(strip[s].item, { x, y: y + pos, w: thickness, h: span });
      }
      pos += span;
    }
    if (horizontal) {
      y += thickness;
      h -= thickness;
    } else {
      x += thickness;
      w -= thickness;
    }
    rest = rest.slice(strip.length);
  }
  return out;
}

function interior(rect: Rect): Rect {
  return {
    x: rect.x + CELL_PADDING,
    y: rect.y + HEADER_HEIGHT,
    w: Math.max(rect.w - 2 * CELL_PADDING, 0),
    h: Math.max(rect.h - HEADER_HEIGHT - CELL_PADDING, 0),
  };
}

function layoutNode(tree: TreeNode, rect: Rect, state: ViewState, level: number): LayoutCell {
  const cell: LayoutCell = {
    ...rect,
    id: tree.node.id,
    label: tree.node.label,
    depth: level,
    layerLabel: state.showLayers ? String(tree.node.depth) : null,
    children: [],
  };
  if (level >= state.depth || tree.children.length === 0) return cell;
  const inner = interior(rect);
  if (inner.w < MIN_CELL.w || inner.h < MIN_CELL.h) return cell;
  const weighted = tree.children.map((child) => ({ item: child, area: 0, raw: weight(child, state.scaling, state.normalization) }));
  const totalWeight = weighted.reduce((acc, c) => acc + c.raw, 0);
  const innerArea = inner.w * inner.h;
  for (const c of weighted) c.area = (c.raw / totalWeight) * innerArea;
  const rects = packStrips(weighted.map(({ item, area }) => ({ item, area })), inner, state.tilingRatio);
  for (const child of tree.children) {
    const r = rects.get(child);
    if (!r) continue;
    cell.children.push(layoutNode(child, r, state, level + 1));
  }
  return cell;
}

/** Lay the subgraph out inside the viewport; the focused concept is the
 * outermost cell. Depth 1 shows only the root and its direct children. */
export function layoutTreemap(subgraph: Neighborhood, state: ViewState, viewport: Rect): LayoutCell | null {
  const tree = buildHierarchy(subgraph, state.focusedConcept);
  if (!tree) return null;
  return layoutNode(tree, viewport, state, 0);
}

export function collectCells(root: LayoutCell): LayoutCell[] {
  const out: LayoutCell[] = [];
  const stack = [root];
  while (stack.length) {
    const cell = stack.pop()!;
    out.push(cell);
    stack.push(...cell.children);
  }
  return out;
}

const AREA_EPSILON = 1e-6;

/** True when `inner` sits strictly inside `outer` (header row excluded). */
export function containedIn(inner: Rect, outer: Rect): boolean {
  return (
    inner.x >= outer.x - AREA_EPSILON &&
    inner.y >= outer.y - AREA_EPSILON &&
    inner.x + inner.w <= outer.x + outer.w + AREA_EPSILON &&
    inner.y + inner.h <= outer.y + outer.h + AREA_EPSILON
  );
}

export function overlaps(a: Rect, b: Rect): boolean {
  return (
    a.x + a.w > b.x + AREA_EPSILON &&
    b.x + b.w > a.x + AREA_EPSILON &&
    a.y + a.h > b.y + AREA_EPSILON &&
    b.y + b.h > a.y + AREA_EPSILON
  );
}
