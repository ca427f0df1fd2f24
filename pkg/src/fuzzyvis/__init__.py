"""Fuzzy membership-vector embeddings of taxonomies with compositional
concept queries and top-k cosine retrieval."""

from .algebra import FuzzyConfig, OperatorFamily
from .embedding import AlphaParams, EmbeddingMatrix, anchor_memberships, generate, lift_internal
from .ontology import (
    ConceptMetadata,
    ConceptRecord,
    OntologyGraph,
    compute_metadata,
    leaf_distance,
    neighborhood,
    parse_json,
    parse_obo,
    search_labels,
)
from .query import (
    And,
    ConceptRef,
    Not,
    Or,
    QueryResult,
    answer,
    evaluate,
    format_expression,
    parse_expression,
)
from .store import (
    RankedHit,
    TopKResult,
    VectorIndex,
    build_index,
    cosine,
    export_embedding,
    import_embedding,
    top_k,
)

__version__ = "0.1.0"
