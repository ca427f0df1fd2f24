"""HTTP API over the ontology, embedding, and query layers.

Instances are independent (ontology, operator family, embedding) bundles;
reads are concurrent, instances are replaced rather than mutated, and
embedding generation runs in a background job so large ontologies do not
block instance creation. All error responses carry a machine-readable code
and a human message; stack traces never go over the wire.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, replace
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import ontology as onto
from .algebra import FuzzyConfig
from .embedding import AlphaParams, EmbeddingMatrix, generate
from .errors import (
    AmbiguousLabel,
    DimensionMismatch,
    EmptyQuery,
    FuzzyvisError,
    InvalidParams,
    MissingEmbedding,
    NoEmbedding,
    OntologyError,
    QuerySyntaxError,
    UnknownConcept,
    UnknownInstance,
    UnsupportedFormat,
)
from .ontology import ConceptMetadata, OntologyGraph
from .query import answer, node_from_json, parse_expression
from .store import VectorIndex, build_index, import_embedding

MAX_K = 200
MAX_SEARCH_LIMIT = 500


@dataclass(frozen=True)
class OntologyInstance:
    instance_id: str
    name: str
    graph: OntologyGraph
    metadata: dict[str, ConceptMetadata]
    config: FuzzyConfig
    matrix: EmbeddingMatrix | None = None
    index: VectorIndex | None = None

    @property
    def ready(self) -> bool:
        return self.index is not None


@dataclass
class JobStatus:
    job_id: str
    state: str  # queued | running | done | failed
    detail: str = ""


class Registry:
    """In-memory instance/job store; published objects are immutable."""

    def __init__(self):
        self._lock = threading.Lock()
        self._counter = itertools.count(1)
        self.instances: dict[str, OntologyInstance] = {}
        self.jobs: dict[str, JobStatus] = {}

    def next_token(self, prefix: str) -> str:
        with self._lock:
            return f"{prefix}-{next(self._counter):04d}"

    def publish(self, instance: OntologyInstance) -> None:
        with self._lock:
            self.instances[instance.instance_id] = instance

    def get(self, instance_id: str) -> OntologyInstance:
        try:
            return self.instances[instance_id]
        except KeyError:
            raise UnknownInstance(instance_id) from None


class EmbeddingSpec(BaseModel):
    mode: str  # "generate" | "upload"
    alpha: float | None = None
    dim: int | None = None
    seed: int | None = None
    data: str | None = None


class CreateInstanceRequest(BaseModel):
    ontology: str
    format: str
    name: str | None = None
    family: str = "product"
    embedding: EmbeddingSpec | None = None


class QueryRequest(BaseModel):
    expr: str | None = None
    ast: dict | None = None


_STATUS_BY_ERROR: list[tuple[type, int]] = [
    (UnknownInstance, 404),
    (UnknownConcept, 404),
    (NoEmbedding, 409),
    (EmptyQuery, 400),
    (UnsupportedFormat, 400),
    (InvalidParams, 400),
    (OntologyError, 422),
    (QuerySyntaxError, 422),
    (AmbiguousLabel, 422),
    (MissingEmbedding, 422),
    (DimensionMismatch, 422),
    (FuzzyvisError, 422),
]


def _error_payload(exc: FuzzyvisError) -> dict:
    payload: dict[str, Any] = {"code": exc.code, "message": str(exc)}
    if isinstance(exc, UnknownConcept) and exc.suggestions:
        payload["suggestions"] = exc.suggestions
    if isinstance(exc, AmbiguousLabel):
        payload["matches"] = exc.matches
    if isinstance(exc, QuerySyntaxError):
        payload["position"] = exc.position
        if exc.expected:
            payload["expected"] = exc.expected
    return {"error": payload}


def _summary(inst: OntologyInstance, cid: str) -> dict:
    rec = inst.graph.concepts[cid]
    meta = inst.metadata[cid]
    return {
        "id": cid,
        "label": rec.label,
        "depth": meta.depth,
        "subtree_size": meta.subtree_size,
        "child_count": meta.child_count,
        "is_leaf": meta.is_leaf,
    }


def _parse_ontology(text: str, fmt: str) -> OntologyGraph:
    if fmt == "obo":
        return onto.parse_obo(text)
    if fmt == "json":
        return onto.parse_json(text)
    raise UnsupportedFormat(fmt)


def create_app(registry: Registry | None = None) -> FastAPI:
    registry = registry or Registry()
    app = FastAPI(title="fuzzyvis", version="0.1.0")
    app.state.registry = registry
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(FuzzyvisError)
    async def fuzzyvis_error(_req: Request, exc: FuzzyvisError):
        for etype, status in _STATUS_BY_ERROR:
            if isinstance(exc, etype):
                return JSONResponse(status_code=status, content=_error_payload(exc))
        return JSONResponse(status_code=422, content=_error_payload(exc))

    @app.exception_handler(RequestValidationError)
    async def validation_error(_req: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(p) for p in first.get("loc", ()))
        message = f"{loc}: {first.get('msg', 'invalid request')}" if loc else "invalid request"
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "InvalidParams", "message": message}},
        )

    @app.post("/instances", status_code=201)
    def create_instance(body: CreateInstanceRequest):
        try:
            config = FuzzyConfig.from_name(body.family)
        except ValueError as exc:
            raise InvalidParams(str(exc)) from None
        graph = _parse_ontology(body.ontology, body.format)
        metadata = onto.compute_metadata(graph)
        instance_id = registry.next_token("inst")
        inst = OntologyInstance(
            instance_id=instance_id,
            name=body.name or instance_id,
            graph=graph,
            metadata=metadata,
            config=config,
        )

        job: JobStatus | None = None
        spec = body.embedding
        if spec is not None and spec.mode == "upload":
            if not spec.data:
                raise InvalidParams("embedding upload needs 'data'")
            matrix = import_embedding(spec.data, graph)
            inst = replace(inst, matrix=matrix, index=build_index(matrix))
        elif spec is not None and spec.mode == "generate":
            if spec.alpha is None or spec.dim is None or spec.seed is None:
                raise InvalidParams("embedding generation needs alpha, dim, and seed")
            try:
                params = AlphaParams(alpha=spec.alpha, dim=spec.dim, seed=spec.seed)
            except ValueError as exc:
                raise InvalidParams(str(exc)) from None
            job = JobStatus(job_id=registry.next_token("job"), state="queued")
            registry.jobs[job.job_id] = job
            _start_generation(registry, inst, params, job)
        elif spec is not None:
            raise InvalidParams(f"unknown embedding mode {spec.mode!r}")

        registry.publish(inst)
        response = {
            "instance_id": instance_id,
            "name": inst.name,
            "concepts": len(graph),
            "family": config.family.value,
            "ready": inst.ready,
        }
        if job is not None:
            response["job"] = {"job_id": job.job_id, "state": job.state, "detail": job.detail}
        return response

    @app.get("/instances")
    def list_instances():
        items = []
        for iid in sorted(registry.instances):
            inst = registry.instances[iid]
            items.append(
                {
                    "instance_id": iid,
                    "name": inst.name,
                    "concepts": len(inst.graph),
                    "family": inst.config.family.value,
                    "dim": inst.matrix.dim if inst.matrix else None,
                    "ready": inst.ready,
                }
            )
        return {"instances": items}

    @app.get("/instances/{instance_id}/concepts/{concept_id}")
    def get_concept(instance_id: str, concept_id: str):
        inst = registry.get(instance_id)
        rec = inst.graph.record(concept_id)
        meta = inst.metadata[concept_id]
        return {
            "id": rec.id,
            "label": rec.label,
            "definition": rec.definition,
            "parents": sorted(rec.parents),
            "children": sorted(rec.children),
            "metadata": {
                "depth": meta.depth,
                "subtree_size": meta.subtree_size,
                "child_count": meta.child_count,
                "is_leaf": meta.is_leaf,
            },
        }

    @app.get("/instances/{instance_id}/search")
    def search(instance_id: str, q: str = "", limit: int = Query(default=20, ge=1, le=MAX_SEARCH_LIMIT)):
        inst = registry.get(instance_id)
        hits = onto.search_labels(inst.graph, q, limit)
        return {"query": q, "hits": [_summary(inst, cid) for cid in hits]}

    @app.get("/instances/{instance_id}/neighborhood/{concept_id}")
    def neighborhood(instance_id: str, concept_id: str, depth: int = Query(default=1, ge=0)):
        inst = registry.get(instance_id)
        sub = onto.neighborhood(inst.graph, concept_id, depth)
        ancestors = set(inst.graph.ancestors(concept_id)) - {concept_id}
        nodes = []
        edges = []
        for cid in sorted(sub.concepts):
            rec = sub.concepts[cid]
            node = _summary(inst, cid)
            node["definition"] = rec.definition
            node["parents"] = sorted(rec.parents)
            node["is_focus"] = cid == concept_id
            node["is_ancestor"] = cid in ancestors
            nodes.append(node)
            edges.extend({"parent": pid, "child": cid} for pid in sorted(rec.parents))
        return {"focus": concept_id, "depth": depth, "nodes": nodes, "edges": edges}

    @app.post("/instances/{instance_id}/query")
    def query(
        instance_id: str,
        body: QueryRequest,
        request: Request,
        k: int = Query(default=10, ge=1),
    ):
        inst = registry.get(instance_id)
        if inst.index is None or inst.matrix is None:
            raise NoEmbedding(instance_id)
        config = inst.config
        override = request.headers.get("x-fuzzy-family")
        if override:
            try:
                config = FuzzyConfig.from_name(override)
            except ValueError as exc:
                raise InvalidParams(str(exc)) from None
        if (body.expr is None) == (body.ast is None):
            raise InvalidParams("provide exactly one of 'expr' or 'ast'")
        effective_k = min(k, MAX_K)
        try:
            if body.expr is not None:
                node = parse_expression(body.expr, inst.graph)
            else:
                node = node_from_json(body.ast)
            result = answer(node, inst.index, inst.matrix, config, effective_k, inst.graph)
        except UnknownConcept as exc:
            # Inside a query an unresolved name is a query defect (422 with
            # suggestions), not a missing resource.
            return JSONResponse(status_code=422, content=_error_payload(exc))
        return {
            "echo": result.echo,
            "zero_query": result.zero_query,
            "k": effective_k,
            "family": config.family.value,
            "hits": [
                {**_summary(inst, hit.concept), "score": hit.score}
                for hit in result.hits
            ],
        }

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        job = registry.jobs.get(job_id)
        if job is None:
            return JSONResponse(
                status_code=404,
                content={"error": {"code": "UnknownJob", "message": f"no such job: {job_id!r}"}},
            )
        return {"job_id": job.job_id, "state": job.state, "detail": job.detail}

    return app


def _start_generation(
    registry: Registry,
    inst: OntologyInstance,
    params: AlphaParams,
    job: JobStatus,
) -> None:
    def run():
        job.state = "running"
        try:
            matrix = generate(inst.graph, params, inst.config)
            ready = replace(inst, matrix=matrix, index=build_index(matrix))
            registry.publish(ready)
            job.state = "done"
            job.detail = f"generated {len(matrix)} vectors of dim {matrix.dim}"
        except Exception as exc:  # published as job detail, never a 500
            job.state = "failed"
            job.detail = f"{type(exc).__name__}: {exc}"

    threading.Thread(target=run, name=f"fuzzyvis-{job.job_id}", daemon=True).start()


app = create_app()
