"""Taxonomy loading, validation and graph queries.

Two input formats are supported: a subset of the OBO flat-file format
(``[Term]`` stanzas with ``id:``, ``name:``, ``def:``, ``is_a:``,
``is_obsolete:``) and a small JSON schema
(``{"concepts": [{"id", "label", "definition"?, "parents": [...]}]}``).
Both produce the same validated, immutable :class:`OntologyGraph`.

Graphs are DAGs: multiple parents and multiple roots are allowed, cycles are
not. Obsolete OBO terms are dropped at parse time and carry no edges.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass

from .errors import (
    CycleDetected,
    DanglingParent,
    DuplicateId,
    EmptyQuery,
    MissingId,
    NoCommonAncestor,
    NotALeaf,
    SchemaError,
    UnknownConcept,
)


@dataclass(frozen=True)
class ConceptRecord:
    """A single concept: identity, text, and its edges in the taxonomy."""

    id: str
    label: str
    definition: str | None
    parents: frozenset[str]
    children: frozenset[str]
    obsolete: bool = False


@dataclass(frozen=True)
class ConceptMetadata:
    """Derived per-concept statistics used by search results and the UI."""

    depth: int
    subtree_size: int
    child_count: int
    is_leaf: bool


class OntologyGraph:
    """Validated, immutable concept DAG.

    ``concepts`` maps id -> ConceptRecord with keys in sorted-id order so
    every iteration over the graph is deterministic.
    """

    def __init__(self, concepts: dict[str, ConceptRecord]):
        self.concepts = concepts
        self.roots = frozenset(c.id for c in concepts.values() if not c.parents)
        self.leaves = frozenset(c.id for c in concepts.values() if not c.children)

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self.concepts

    def __len__(self) -> int:
        return len(self.concepts)

    def record(self, concept_id: str) -> ConceptRecord:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise UnknownConcept(concept_id) from None

    def topological_order(self) -> list[str]:
        """Concept ids with every parent before any of its children.

        Ties are broken by id, so the order is deterministic.
        """
        remaining = {cid: len(rec.parents) for cid, rec in self.concepts.items()}
        heap = [cid for cid, n in remaining.items() if n == 0]
        heapq.heapify(heap)
        out: list[str] = []
        while heap:
            cid = heapq.heappop(heap)
            out.append(cid)
            for child in self.concepts[cid].children:
                remaining[child] -= 1
                if remaining[child] == 0:
                    heapq.heappush(heap, child)
        return out

    def ancestors(self, concept_id: str) -> dict[str, int]:
        """Map of ancestor-or-self -> minimum edge count from ``concept_id``."""
        rec = self.record(concept_id)
        dist = {rec.id: 0}
        queue = deque([rec.id])
        while queue:
            cur = queue.popleft()
            for parent in self.concepts[cur].parents:
                if parent not in dist:
                    dist[parent] = dist[cur] + 1
                    queue.append(parent)
        return dist


def _build_graph(
    order: list[str],
    labels: dict[str, str],
    definitions: dict[str, str | None],
    parents: dict[str, list[str]],
) -> OntologyGraph:
    """Validate raw stanza data and assemble the immutable graph.

    Raises DanglingParent / CycleDetected; DuplicateId and MissingId are the
    callers' business since they depend on the source syntax.
    """
    declared = set(order)
    children: dict[str, set[str]] = {cid: set() for cid in order}
    parent_sets: dict[str, set[str]] = {}
    for cid in order:
        pset = set()
        for pid in parents.get(cid, []):
            if pid not in declared:
                raise DanglingParent(cid, pid)
            if pid == cid:
                raise CycleDetected([cid, cid])
            pset.add(pid)
            children[pid].add(cid)
        parent_sets[cid] = pset

    _check_acyclic(order, parent_sets, children)

    records = {}
    for cid in sorted(order):
        records[cid] = ConceptRecord(
            id=cid,
            label=labels.get(cid) or cid,
            definition=definitions.get(cid),
            parents=frozenset(parent_sets[cid]),
            children=frozenset(children[cid]),
        )
    return OntologyGraph(records)


def _check_acyclic(
    order: list[str],
    parents: dict[str, set[str]],
    children: dict[str, set[str]],
) -> None:
    indegree = {cid: len(parents[cid]) for cid in order}
    queue = deque(cid for cid in order if indegree[cid] == 0)
    seen = 0
    while queue:
        cid = queue.popleft()
        seen += 1
        for child in children[cid]:
            indegree[child] -= 1
            if indegree[child] == 0:
                queue.append(child)
    if seen == len(order):
        return
    # Walk parent edges inside the leftover set until a node repeats.
    stuck = {cid for cid in order if indegree[cid] > 0}
    start = min(stuck)
    path, seen_at = [start], {start: 0}
    while True:
        nxt = min(p for p in parents[path[-1]] if p in stuck)
        if nxt in seen_at:
            raise CycleDetected(path[seen_at[nxt]:] + [nxt])
        seen_at[nxt] = len(path)
        path.append(nxt)


def _unquote(value: str) -> str:
    """First double-quoted string in an OBO value, honoring backslash escapes."""
    start = value.find('"')
    if start < 0:
        return value.strip()
    out = []
    i = start + 1
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            out.append(value[i + 1])
            i += 2
            continue
        if ch == '"':
            return "".join(out)
        out.append(ch)
        i += 1
    return "".join(out)


def parse_obo(text: str) -> OntologyGraph:
    """Parse the OBO flat-file subset into a validated graph.

    Recognized stanza keys: id, name, def, is_a, is_obsolete; all other keys
    and non-[Term] stanzas are ignored. ``is_a: X ! comment`` keeps only the
    id before the ``!``. Obsolete terms are dropped entirely.
    """
    order: list[str] = []
    labels: dict[str, str] = {}
    definitions: dict[str, str | None] = {}
    parents: dict[str, list[str]] = {}

    in_term = False
    stanza_line = 0
    cur_id: str | None = None
    cur_label: str | None = None
    cur_def: str | None = None
    cur_parents: list[str] = []
    cur_obsolete = False

    def flush():
        if not in_term:
            return
        if cur_id is None:
            raise MissingId(stanza_line)
        if cur_obsolete:
            return
        if cur_id in labels:
            raise DuplicateId(cur_id)
        order.append(cur_id)
        labels[cur_id] = cur_label or cur_id
        definitions[cur_id] = cur_def
        parents[cur_id] = cur_parents

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        if stripped.startswith("["):
            flush()
            in_term = stripped == "[Term]"
            stanza_line = lineno
            cur_id, cur_label, cur_def = None, None, None
            cur_parents, cur_obsolete = [], False
            continue
        if not in_term or not stripped:
            continue
        key, sep, value = stripped.partition(":")
        if not sep:
            continue
        key = key.strip()
        value = value.strip()
        if key == "id":
            cur_id = value
        elif key == "name":
            cur_label = value
        elif key == "def":
            cur_def = _unquote(value)
        elif key == "is_a":
            target = value.split("!")[0].strip()
            if target:
                cur_parents.append(target.split()[0])
        elif key == "is_obsolete":
            cur_obsolete = value.lower().startswith("true")
    flush()

    return _build_graph(order, labels, definitions, parents)


def parse_json(text: str) -> OntologyGraph:
    """Parse the JSON taxonomy schema into a validated graph."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "document must be an object")
    concepts = doc.get("concepts")
    if not isinstance(concepts, list):
        raise SchemaError("$.concepts", "must be an array")

    order: list[str] = []
    labels: dict[str, str] = {}
    definitions: dict[str, str | None] = {}
    parents: dict[str, list[str]] = {}
    for i, item in enumerate(concepts):
        path = f"$.concepts[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(path, "must be an object")
        cid = item.get("id")
        if not isinstance(cid, str) or not cid or cid.split() != [cid]:
            raise SchemaError(f"{path}.id", "must be a non-empty token without whitespace")
        label = item.get("label", cid)
        if not isinstance(label, str):
            raise SchemaError(f"{path}.label", "must be a string")
        definition = item.get("definition")
        if definition is not None and not isinstance(definition, str):
            raise SchemaError(f"{path}.definition", "must be a string or null")
        plist = item.get("parents", [])
        if not isinstance(plist, list):
            raise SchemaError(f"{path}.parents", "must be an array")
        for j, pid in enumerate(plist):
            if not isinstance(pid, str) or not pid:
                raise SchemaError(f"{path}.parents[{j}]", "must be a non-empty string")
        if cid in labels:
            raise DuplicateId(cid)
        order.append(cid)
        labels[cid] = label
        definitions[cid] = definition
        parents[cid] = list(plist)

    return _build_graph(order, labels, definitions, parents)


def compute_metadata(graph: OntologyGraph) -> dict[str, ConceptMetadata]:
    """Depth (min edges to a root), distinct-descendant counts, child counts.

    Subtree sizes use set semantics: in a DAG diamond the shared descendant
    is counted once.
    """
    depth: dict[str, int] = {}
    queue = deque()
    for rid in graph.roots:
        depth[rid] = 0
        queue.append(rid)
    while queue:
        cid = queue.popleft()
        for child in graph.concepts[cid].children:
            if child not in depth:
                depth[child] = depth[cid] + 1
                queue.append(child)

    descendants: dict[str, set[str]] = {}
    for cid in reversed(graph.topological_order()):
        acc = {cid}
        for child in graph.concepts[cid].children:
            acc |= descendants[child]
        descendants[cid] = acc

    out = {}
    for cid, rec in graph.concepts.items():
        out[cid] = ConceptMetadata(
            depth=depth[cid],
            subtree_size=len(descendants[cid]),
            child_count=len(rec.children),
            is_leaf=not rec.children,
        )
    return out


def search_labels(graph: OntologyGraph, query: str, limit: int) -> list[str]:
    """Case-insensitive substring search over labels.

    Ranked by (match position, label length, id); at most ``limit`` ids.
    """
    needle = query.strip().lower()
    if not needle:
        raise EmptyQuery("search query is empty")
    hits = []
    for cid, rec in graph.concepts.items():
        pos = rec.label.lower().find(needle)
        if pos >= 0:
            hits.append((pos, len(rec.label), cid))
    hits.sort()
    return [cid for _, _, cid in hits[: max(limit, 0)]]


def neighborhood(graph: OntologyGraph, concept_id: str, depth: int) -> OntologyGraph:
    """Induced subgraph: descendants within ``depth`` child edges plus the
    full ancestor chain(s) of ``concept_id`` up to the root(s)."""
    rec = graph.record(concept_id)
    keep = set(graph.ancestors(rec.id))
    frontier = {rec.id}
    for _ in range(max(depth, 0)):
        nxt = set()
        for cid in frontier:
            nxt |= graph.concepts[cid].children
        nxt -= keep
        if not nxt:
            break
        keep |= nxt
        frontier = nxt

    records = {}
    for cid in sorted(keep):
        old = graph.concepts[cid]
        records[cid] = ConceptRecord(
            id=cid,
            label=old.label,
            definition=old.definition,
            parents=old.parents & keep,
            children=old.children & keep,
        )
    return OntologyGraph(records)


def leaf_distance(graph: OntologyGraph, a: str, b: str) -> int:
    """Two-sided taxonomic distance between two leaves.

    Minimum over all common ancestors W of (edges a->W) + (edges b->W);
    0 iff a == b.
    """
    for cid in (a, b):
        if cid not in graph.leaves:
            graph.record(cid)  # raises UnknownConcept if absent
            raise NotALeaf(cid)
    up_a = graph.ancestors(a)
    up_b = graph.ancestors(b)
    common = up_a.keys() & up_b.keys()
    if not common:
        raise NoCommonAncestor(a, b)
    return min(up_a[w] + up_b[w] for w in common)
