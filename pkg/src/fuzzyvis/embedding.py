"""Membership-vector embeddings of taxonomy concepts.

Each embedding coordinate corresponds to one synthetic domain element. A
domain element is built by drawing an anchor leaf uniformly at random: the
anchor gets membership 1, every other leaf decays as ``alpha ** d`` with d
the two-sided taxonomic distance to the anchor, and internal concepts take
the fuzzy union (t-conorm fold) of their children. By construction a parent's
degree is never below any child's, so subsumption holds in the fuzzy sense.

`anchor_memberships` and `lift_internal` are the readable one-column
reference; `generate` runs the same arithmetic vectorized over columns and is
bit-identical to composing the two (same IEEE-754 expressions, same fold
order, shared alpha-power table).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .algebra import FuzzyConfig, OperatorFamily, fold_tconorm
from .errors import DuplicateId, InvalidDegree, MissingEmbedding, NoCommonAncestor, NoLeaves, NotALeaf
from .ontology import OntologyGraph, leaf_distance

_COLUMN_CHUNK = 64


@dataclass(frozen=True)
class AlphaParams:
    """Generation knobs: decay base, embedding dimension, RNG seed."""

    alpha: float
    dim: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha!r}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class Provenance:
    source: str  # "generated" | "imported"
    family: str
    alpha: float | None = None
    seed: int | None = None


class EmbeddingMatrix:
    """Immutable id -> membership-vector map backed by one float64 array."""

    def __init__(self, dim: int, ids: list[str], values: np.ndarray, provenance: Provenance):
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != (len(ids), dim):
            raise ValueError(f"values shape {values.shape} != ({len(ids)}, {dim})")
        if len(set(ids)) != len(ids):
            seen: set[str] = set()
            for cid in ids:
                if cid in seen:
                    raise DuplicateId(cid)
                seen.add(cid)
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            bad = values[(values < 0.0) | (values > 1.0)].flat[0]
            raise InvalidDegree(float(bad))
        values.setflags(write=False)
        self.dim = dim
        self.ids = list(ids)
        self.values = values
        self.provenance = provenance
        self._row = {cid: i for i, cid in enumerate(self.ids)}

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self._row

    def vector(self, concept_id: str) -> np.ndarray:
        try:
            return self.values[self._row[concept_id]]
        except KeyError:
            raise MissingEmbedding(concept_id) from None

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        for cid in self.ids:
            yield cid, self.values[self._row[cid]]


def _alpha_powers(alpha: float, max_exp: int) -> list[float]:
    # Shared by the scalar and vectorized paths so alpha**d is computed the
    # same way everywhere (np.power may differ from libm pow in the last ulp).
    return [alpha**d for d in range(max_exp + 1)]


def anchor_memberships(graph: OntologyGraph, anchor_leaf: str, alpha: float) -> dict[str, float]:
    """Leaf membership degrees for one domain element anchored at a leaf.

    The anchor maps to 1.0, every other leaf to ``alpha ** distance``;
    leaves in other connected components map to 0.0.
    """
    if anchor_leaf not in graph.leaves:
        graph.record(anchor_leaf)
        raise NotALeaf(anchor_leaf)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    distances = {}
    for leaf in graph.leaves:
        try:
            distances[leaf] = leaf_distance(graph, anchor_leaf, leaf)
        except NoCommonAncestor:
            distances[leaf] = None
    finite = [d for d in distances.values() if d is not None]
    powers = _alpha_powers(alpha, max(finite))
    return {
        leaf: 0.0 if d is None else powers[d]
        for leaf, d in distances.items()
    }


def lift_internal(
    graph: OntologyGraph,
    leaf_degrees: Mapping[str, float],
    config: FuzzyConfig,
) -> dict[str, float]:
    """Propagate leaf degrees to every concept via t-conorm folds.

    Internal nodes fold their direct children's degrees in concept-id order,
    processed in reverse-topological order; leaves pass through unchanged.
    """
    degrees: dict[str, float] = {}
    for cid in reversed(graph.topological_order()):
        rec = graph.concepts[cid]
        if not rec.children:
            degrees[cid] = leaf_degrees[cid]
        else:
            degrees[cid] = fold_tconorm(config, [degrees[c] for c in sorted(rec.children)])
    return degrees


class _ColumnKernel:
    """Graph compiled to index arrays for vectorized column generation."""

    def __init__(self, graph: OntologyGraph):
        self.ids = list(graph.concepts)  # already sorted by id
        self.index = {cid: i for i, cid in enumerate(self.ids)}
        n = len(self.ids)
        self.parent_rows: list[list[int]] = [[] for _ in range(n)]
        level = [0] * n
        for cid in graph.topological_order():
            row = self.index[cid]
            for pid in graph.concepts[cid].parents:
                prow = self.index[pid]
                self.parent_rows[row].append(prow)
                level[row] = max(level[row], level[prow] + 1)
        self.leaf_rows = np.array(sorted(self.index[l] for l in graph.leaves), dtype=np.int64)

        # Downward min-distance propagation: edges grouped by child level.
        by_level: dict[int, tuple[list[int], list[int]]] = {}
        for row, prows in enumerate(self.parent_rows):
            for prow in prows:
                group = by_level.setdefault(level[row], ([], []))
                group[0].append(prow)
                group[1].append(row)
        self.down_groups = [
            (np.array(ps, dtype=np.int64), np.array(cs, dtype=np.int64))
            for _, (ps, cs) in sorted(by_level.items())
        ]

        # Upward t-conorm folds: internal nodes grouped by level (descending),
        # then by child position so each numpy step is one fold iteration.
        # Children are visited in row order == concept-id order.
        children_sorted: dict[int, list[int]] = {}
        for row, prows in enumerate(self.parent_rows):
            for prow in prows:
                children_sorted.setdefault(prow, []).append(row)
        for rows in children_sorted.values():
            rows.sort()
        self.fold_groups: list[list[tuple[np.ndarray, np.ndarray]]] = []
        levels_desc = sorted({level[p] for p in children_sorted}, reverse=True)
        for lvl in levels_desc:
            nodes = [p for p in children_sorted if level[p] == lvl]
            max_k = max(len(children_sorted[p]) for p in nodes)
            steps = []
            for k in range(max_k):
                ps = [p for p in nodes if len(children_sorted[p]) > k]
                cs = [children_sorted[p][k] for p in ps]
                steps.append((np.array(ps, dtype=np.int64), np.array(cs, dtype=np.int64)))
            self.fold_groups.append(steps)

    def ancestor_distances(self, row: int) -> tuple[np.ndarray, np.ndarray]:
        dist = {row: 0}
        frontier = [row]
        while frontier:
            nxt = []
            for r in frontier:
                for p in self.parent_rows[r]:
                    if p not in dist:
                        dist[p] = dist[r] + 1
                        nxt.append(p)
            frontier = nxt
        rows = np.fromiter(dist.keys(), dtype=np.int64, count=len(dist))
        ds = np.fromiter(dist.values(), dtype=np.float64, count=len(dist))
        return rows, ds

    def leaf_distance_columns(self, anchor_rows: list[int]) -> np.ndarray:
        """Min two-sided distance from each anchor (one per column) to every
        node; +inf where no common ancestor exists."""
        n_cols = len(anchor_rows)
        dist = np.full((len(self.ids), n_cols), np.inf)
        cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for j, arow in enumerate(anchor_rows):
            if arow not in cache:
                cache[arow] = self.ancestor_distances(arow)
            rows, ds = cache[arow]
            dist[rows, j] = ds
        for parents, children in self.down_groups:
            np.minimum.at(dist, children, dist[parents] + 1.0)
        return dist

    def lift_columns(self, leaf_deg: np.ndarray, config: FuzzyConfig) -> np.ndarray:
        """Fold leaf degrees (one column per domain element) up the graph."""
        family = config.family
        acc = np.zeros((len(self.ids), leaf_deg.shape[1]))
        acc[self.leaf_rows] = leaf_deg
        for steps in self.fold_groups:
            first = True
            for ps, cs in steps:
                x = acc[cs]
                if first:
                    acc[ps] = x
                    first = False
                elif family is OperatorFamily.PRODUCT:
                    a = acc[ps]
                    acc[ps] = a + x - a * x
                elif family is OperatorFamily.GOEDEL:
                    acc[ps] = np.maximum(acc[ps], x)
                else:
                    acc[ps] = np.minimum(1.0, acc[ps] + x)
        return acc


def _anchor_for_column(seed: int, column: int, n_leaves: int) -> int:
    rng = np.random.Generator(np.random.Philox(key=[seed, column]))
    return int(rng.integers(n_leaves))


def generate(
    graph: OntologyGraph,
    params: AlphaParams,
    config: FuzzyConfig,
    workers: int | None = None,
    column_offset: int = 0,
) -> EmbeddingMatrix:
    """Build the full embedding matrix for a graph.

    Column i's anchor leaf comes from a counter-based RNG substream keyed by
    (seed, column_offset + i), so columns are independent: any slice of
    columns can be generated alone (or in parallel) with bit-identical output.
    """
    if not graph.leaves:
        raise NoLeaves("graph has no leaf concepts")
    kernel = _ColumnKernel(graph)
    n_leaves = len(kernel.leaf_rows)
    anchors = [
        int(kernel.leaf_rows[_anchor_for_column(params.seed, column_offset + i, n_leaves)])
        for i in range(params.dim)
    ]
    out = np.empty((len(kernel.ids), params.dim))

    def run_chunk(start: int, stop: int) -> None:
        dist = kernel.leaf_distance_columns(anchors[start:stop])
        leaf_dist = dist[kernel.leaf_rows]
        finite = np.isfinite(leaf_dist)
        max_d = int(leaf_dist[finite].max()) if finite.any() else 0
        powers = np.array(_alpha_powers(params.alpha, max_d) + [0.0])
        exp = np.where(finite, leaf_dist, max_d + 1).astype(np.int64)
        out[:, start:stop] = kernel.lift_columns(powers[exp], config)

    chunks = [
        (s, min(s + _COLUMN_CHUNK, params.dim))
        for s in range(0, params.dim, _COLUMN_CHUNK)
    ]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda c: run_chunk(*c), chunks))
    else:
        for chunk in chunks:
            run_chunk(*chunk)

    provenance = Provenance(
        source="generated",
        family=config.family.value,
        alpha=params.alpha,
        seed=params.seed,
    )
    return EmbeddingMatrix(params.dim, kernel.ids, out, provenance)
