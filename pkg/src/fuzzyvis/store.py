"""Vector persistence and top-k cosine retrieval.

The index is an exhaustive scanner by contract: any future acceleration must
return results identical to the brute-force scan, so callers can treat the
ranking as deterministic ground truth. Ties break by concept id ascending.

The text file format (shared with embedding generation):

    #fuzzyvis-embedding v1 dim=<d> source=<generated|imported> [alpha=<a> seed=<s>] family=<f>
    <concept-id>\\t<v1>,<v2>,...,<vd>

Rows are written sorted by concept id with 17-significant-digit floats so a
write/read round trip is exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingMatrix, Provenance
from .errors import (
    DimensionMismatch,
    DimMismatchAcrossRows,
    EmptyIndex,
    EmptyMatrix,
    HeaderMissing,
    UnknownConceptWarning,
    ValueClampedWarning,
    ValueOutOfRange,
)
from .ontology import OntologyGraph

CLAMP_TOLERANCE = 1e-6
_HEADER_PREFIX = "#fuzzyvis-embedding v1"


@dataclass(frozen=True)
class RankedHit:
    concept: str
    score: float


@dataclass(frozen=True)
class TopKResult:
    """Ranked hits plus the zero-vector marker.

    ``zero_query`` distinguishes "the query has no signal" (every cosine is 0
    by convention) from genuinely low similarity.
    """

    hits: list[RankedHit]
    zero_query: bool


class VectorIndex:
    """Immutable scan index: entries sorted by concept id, norms precomputed."""

    def __init__(self, dim: int, ids: list[str], matrix: np.ndarray):
        self.dim = dim
        self.ids = ids
        self.matrix = matrix
        self.norms = np.sqrt(np.einsum("ij,ij->i", matrix, matrix))

    def __len__(self) -> int:
        return len(self.ids)


def build_index(matrix: EmbeddingMatrix) -> VectorIndex:
    """Index every concept that has a vector; order fixed to sorted ids."""
    if len(matrix) == 0:
        raise EmptyMatrix("embedding matrix has no vectors")
    order = sorted(range(len(matrix.ids)), key=lambda i: matrix.ids[i])
    ids = [matrix.ids[i] for i in order]
    values = matrix.values[order] if order != list(range(len(matrix.ids))) else matrix.values
    return VectorIndex(matrix.dim, ids, values)


def cosine(u, v) -> float:
    """Cosine similarity; 0.0 when either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape[0] != v.shape[0]:
        raise DimensionMismatch(u.shape[0], v.shape[0])
    nu = math.sqrt(float(np.dot(u, u)))
    nv = math.sqrt(float(np.dot(v, v)))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v)) / (nu * nv)


def top_k(index: VectorIndex, query, k: int) -> TopKResult:
    """Exhaustive-scan top-k by cosine score.

    Hits are sorted by score descending, ties by concept id ascending, and
    truncated to min(k, index size). An all-zero query scores 0 everywhere
    and is flagged.
    """
    if len(index) == 0:
        raise EmptyIndex("index has no entries")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query = np.asarray(query, dtype=np.float64)
    if query.shape[0] != index.dim:
        raise DimensionMismatch(index.dim, query.shape[0])
    qnorm = math.sqrt(float(np.dot(query, query)))
    if qnorm == 0.0:
        scores = np.zeros(len(index))
    else:
        denom = index.norms * qnorm
        dots = index.matrix @ query
        scores = np.divide(dots, denom, out=np.zeros_like(dots), where=denom != 0.0)
    # Entries are id-sorted, so a stable sort on -score breaks ties by id.
    order = np.argsort(-scores, kind="stable")[: min(k, len(index))]
    hits = [RankedHit(index.ids[i], float(scores[i])) for i in order]
    return TopKResult(hits=hits, zero_query=qnorm == 0.0)


def export_embedding(matrix: EmbeddingMatrix) -> str:
    """Serialize a matrix to the embedding file format (id-sorted rows)."""
    prov = matrix.provenance
    parts = [_HEADER_PREFIX, f"dim={matrix.dim}", f"source={prov.source}"]
    if prov.alpha is not None:
        parts.append(f"alpha={prov.alpha!r}")
    if prov.seed is not None:
        parts.append(f"seed={prov.seed}")
    parts.append(f"family={prov.family}")
    lines = [" ".join(parts)]
    for cid in sorted(matrix.ids):
        vec = matrix.vector(cid)
        lines.append(cid + "\t" + ",".join(f"{x:.17g}" for x in vec))
    return "\n".join(lines) + "\n"


def import_embedding(text: str, graph: OntologyGraph | None = None) -> EmbeddingMatrix:
    """Parse the embedding file format into a matrix.

    Values outside [0,1] by at most 1e-6 are clamped with a warning, worse is
    an error. When a graph is given, rows for concepts it does not contain
    are dropped with a warning and excluded from retrieval.
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith(_HEADER_PREFIX):
        raise HeaderMissing(f"first line must start with {_HEADER_PREFIX!r}")
    fields = {}
    for token in lines[0][len(_HEADER_PREFIX):].split():
        key, sep, value = token.partition("=")
        if sep:
            fields[key] = value
    try:
        dim = int(fields["dim"])
    except (KeyError, ValueError):
        raise HeaderMissing("header must carry dim=<integer>") from None
    family = fields.get("family", "product")
    alpha = float(fields["alpha"]) if "alpha" in fields else None
    seed = int(fields["seed"]) if "seed" in fields else None
    source = fields.get("source", "imported")

    ids: list[str] = []
    rows: list[np.ndarray] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cid, sep, payload = line.partition("\t")
        if not sep:
            raise DimMismatchAcrossRows(lineno, dim, 0)
        values = payload.split(",")
        if len(values) != dim:
            raise DimMismatchAcrossRows(lineno, dim, len(values))
        try:
            row = np.array([float(v) for v in values])
        except ValueError:
            raise ValueOutOfRange(lineno, math.nan) from None
        if not np.isfinite(row).all():
            raise ValueOutOfRange(lineno, float(row[~np.isfinite(row)][0]))
        low, high = float(row.min()), float(row.max())
        if low < -CLAMP_TOLERANCE or high > 1.0 + CLAMP_TOLERANCE:
            raise ValueOutOfRange(lineno, low if low < 0 else high)
        if low < 0.0 or high > 1.0:
            warnings.warn(
                f"line {lineno}: value outside [0, 1] by <= {CLAMP_TOLERANCE}, clamped",
                ValueClampedWarning,
                stacklevel=2,
            )
            row = np.clip(row, 0.0, 1.0)
        if graph is not None and cid not in graph:
            warnings.warn(
                f"line {lineno}: concept {cid!r} not in the loaded ontology, row dropped",
                UnknownConceptWarning,
                stacklevel=2,
            )
            continue
        ids.append(cid)
        rows.append(row)

    values_arr = np.vstack(rows) if rows else np.empty((0, dim))
    provenance = Provenance(source=source, family=family, alpha=alpha, seed=seed)
    return EmbeddingMatrix(dim, ids, values_arr, provenance)
