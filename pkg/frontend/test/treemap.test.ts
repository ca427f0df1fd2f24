import { describe, expect, it } from "vitest";

import {
  buildHierarchy,
  collectCells,
  containedIn,
  layoutTreemap,
  LayoutCell,
  overlaps,
} from "../src/treemap";
import { defaultViewState, ScalingMode } from "../src/types";
import { miniSubgraph, wideSubgraph } from "./fixtures";

const VIEWPORT = { x: 0, y: 0, w: 900, h: 600 };

function layoutMini(overrides: Partial<ReturnType<typeof defaultViewState>> = {}) {
  const state = { ...defaultViewState("i", "R"), ...overrides };
  const layout = layoutTreemap(miniSubgraph(), state, VIEWPORT);
  expect(layout).not.toBeNull();
  return layout!;
}

function cellById(root: LayoutCell, id: string): LayoutCell {
  const hit = collectCells(root).find((c) => c.id === id);
  expect(hit, `cell ${id}`).toBeDefined();
  return hit!;
}

function area(c: { w: number; h: number }): number {
  return c.w * c.h;
}

function assertInvariants(root: LayoutCell): void {
  const stack = [root];
  while (stack.length) {
    const parent = stack.pop()!;
    for (const child of parent.children) {
      expect(containedIn(child, parent)).toBe(true);
    }
    for (let i = 0; i < parent.children.length; i++) {
      for (let j = i + 1; j < parent.children.length; j++) {
        expect(overlaps(parent.children[i], parent.children[j])).toBe(false);
      }
    }
    stack.push(...parent.children);
  }
}

describe("layoutTreemap", () => {
  it("equal scaling gives the root's two children equal area", () => {
    const layout = layoutMini({ scaling: "equal" });
    const a = cellById(layout, "A");
    const b = cellById(layout, "B");
    expect(area(a)).toBeCloseTo(area(b), 6);
  });

  it("subtree scaling yields the 3:2 sibling area ratio", () => {
    const layout = layoutMini({ scaling: "subtree" });
    const ratio = area(cellById(layout, "A")) / area(cellById(layout, "B"));
    expect(ratio).toBeCloseTo(3 / 2, 6);
  });

  it("children scaling sizes by child count", () => {
    const layout = layoutMini({ scaling: "children" });
    const ratio = area(cellById(layout, "A")) / area(cellById(layout, "B"));
    expect(ratio).toBeCloseTo(2 / 1, 6);
  });

  it("containment and sibling non-overlap hold in every mode", () => {
    for (const scaling of ["equal", "subtree", "children"] as ScalingMode[]) {
      for (const tilingRatio of [0.6, 1.0, 1.6, 3.0]) {
        assertInvariants(layoutMini({ scaling, tilingRatio }));
        const wide = layoutTreemap(
          wideSubgraph(),
          { ...defaultViewState("i", "R"), scaling, tilingRatio },
          VIEWPORT,
        )!;
        assertInvariants(wide);
      }
    }
  });

  it("depth 1 renders only the root and its direct children", () => {
    const layout = layoutMini({ depth: 1 });
    const ids = collectCells(layout).map((c) => c.id).sort();
    expect(ids).toEqual(["A", "B", "R"]);
  });

  it("depth 2 renders the whole fixture", () => {
    const ids = collectCells(layoutMini({ depth: 2 })).map((c) => c.id).sort();
    expect(ids).toEqual(["A", "B", "L1", "L2", "L3", "R"]);
  });

  it("children fill their parent's interior area", () => {
    const layout = layoutMini({ scaling: "subtree" });
    const a = cellById(layout, "A");
    const childSum = a.children.reduce((acc, c) => acc + area(c), 0);
    expect(childSum).toBeGreaterThan(0);
    expect(childSum).toBeLessThanOrEqual(area(a));
  });

  it("layer labels appear only when requested", () => {
    const plain = layoutMini({ showLayers: false });
    expect(collectCells(plain).every((c) => c.layerLabel === null)).toBe(true);
    const labeled = layoutMini({ showLayers: true });
    expect(cellById(labeled, "L1").layerLabel).toBe("2");
  });

  it("a multi-parent node is nested exactly once", () => {
    const sub = miniSubgraph();
    sub.nodes.find((n) => n.id === "L3")!.parents = ["A", "B"];
    sub.edges.push({ parent: "A", child: "L3" });
    const tree = buildHierarchy(sub, "R")!;
    const count = (t: typeof tree): number =>
      (t.node.id === "L3" ? 1 : 0) + t.children.reduce((acc, c) => acc + count(c), 0);
    expect(count(tree)).toBe(1);
  });

  it("returns null when the focus is not in the subgraph", () => {
    expect(layoutTreemap(miniSubgraph(), defaultViewState("i", "NOPE"), VIEWPORT)).toBeNull();
  });
});
