/** Shared test fixtures mirroring the backend's toy taxonomies. */

import type { Neighborhood, NeighborhoodNode } from "../src/types";

function node(
  id: string,
  label: string,
  depth: number,
  subtree: number,
  children: number,
  parents: string[],
): NeighborhoodNode {
  return {
    id,
    label,
    depth,
    subtree_size: subtree,
    child_count: children,
    is_leaf: children === 0,
    definition: null,
    parents,
    is_focus: false,
    is_ancestor: false,
  };
}

/** The six-concept tree R -> {A, B}, A -> {L1, L2}, B -> {L3}. */
export function miniSubgraph(): Neighborhood {
  return {
    focus: "R",
    depth: 2,
    nodes: [
      node("R", "root", 0, 6, 2, []),
      node("A", "branch a", 1, 3, 2, ["R"]),
      node("B", "branch b", 1, 2, 1, ["R"]),
      node("L1", "leaf one", 2, 1, 0, ["A"]),
      node("L2", "leaf two", 2, 1, 0, ["A"]),
      node("L3", "leaf three", 2, 1, 0, ["B"]),
    ],
    edges: [
      { parent: "R", child: "A" },
      { parent: "R", child: "B" },
      { parent: "A", child: "L1" },
      { parent: "A", child: "L2" },
      { parent: "B", child: "L3" },
    ],
  };
}

/** A wider taxonomy for layout stress tests (12 children under one branch). */
export function wideSubgraph(): Neighborhood {
  const nodes = [node("R", "root", 0, 14, 2, []), node("S", "small", 1, 1, 0, ["R"])];
  const edges = [
    { parent: "R", child: "S" },
    { parent: "R", child: "W" },
  ];
  nodes.push(node("W", "wide", 1, 13, 12, ["R"]));
  for (let i = 0; i < 12; i++) {
    const id = `W${String(i).padStart(2, "0")}`;
    nodes.push(node(id, `wide child ${i}`, 2, 1, 0, ["W"]));
    edges.push({ parent: "W", child: id });
  }
  return { focus: "R", depth: 2, nodes, edges };
}

/** Three branches so two loci can grow while a third branch compresses. */
export function threeBranchSubgraph(): Neighborhood {
  return {
    focus: "R",
    depth: 2,
    nodes: [
      node("R", "root", 0, 8, 3, []),
      node("A", "branch a", 1, 3, 2, ["R"]),
      node("B", "branch b", 1, 3, 2, ["R"]),
      node("C", "branch c", 1, 1, 0, ["R"]),
      node("A1", "a one", 2, 1, 0, ["A"]),
      node("A2", "a two", 2, 1, 0, ["A"]),
      node("B1", "b one", 2, 1, 0, ["B"]),
      node("B2", "b two", 2, 1, 0, ["B"]),
    ],
    edges: [
      { parent: "R", child: "A" },
      { parent: "R", child: "B" },
      { parent: "R", child: "C" },
      { parent: "A", child: "A1" },
      { parent: "A", child: "A2" },
      { parent: "B", child: "B1" },
      { parent: "B", child: "B2" },
    ],
  };
}

export const hpoLikeSummaries = [
  { id: "HP:0002200", label: "Pseudobulbar signs", depth: 4, subtree_size: 2, child_count: 1, is_leaf: false },
  { id: "HP:0007024", label: "Pseudobulbar paralysis", depth: 5, subtree_size: 1, child_count: 0, is_leaf: true },
  { id: "HP:0001283", label: "Bulbar palsy", depth: 4, subtree_size: 1, child_count: 0, is_leaf: true },
  { id: "HP:0002015", label: "Dysphagia", depth: 3, subtree_size: 1, child_count: 0, is_leaf: true },
  { id: "HP:0001350", label: "Slurred speech", depth: 5, subtree_size: 1, child_count: 0, is_leaf: true },
];
