"""HTTP facade over one in-memory catalog.

The service holds immutable snapshots. Readers work against whichever
snapshot was current when their request started; writers (ingest,
reconcile) rebuild the whole graph from retained records plus
directives under a single writer lock, then swap the snapshot in one
assignment. Every response carries the snapshot version in the
X-Catalog-Version header, so clients can detect when two reads span a
write.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .graph import CatalogError, Graph, Iri, Literal, Subgraph
from .ingest import (
    FlatRecord,
    PromoteResult,
    ReconciliationPlan,
    parse_directives,
    parse_records,
    promote,
)
from .model import DEFAULT_NAMESPACE, RDF_TYPE, Vocabulary, mint_iri, validate
from .resolve import (
    NoLabelError,
    NotManifestationError,
    entity_kind,
    nomen_entries,
    render_record_view,
    resolve_label,
    search_nomens,
)
from .serialize import export_ntriples, export_turtle


def namespace_from_env() -> str:
    return os.environ.get("CATALOG_NAMESPACE", DEFAULT_NAMESPACE)


def default_lang_from_env() -> str:
    return os.environ.get("CATALOG_DEFAULT_LANG", "en")


@dataclass
class CatalogConfig:
    namespace: str = DEFAULT_NAMESPACE
    default_lang: str = "en"
    max_depth: int = 3
    cors_origins: tuple = ("*",)

    @classmethod
    def from_env(cls) -> CatalogConfig:
        return cls(namespace=namespace_from_env(), default_lang=default_lang_from_env())


@dataclass(frozen=True)
class Snapshot:
    version: int
    graph: Graph
    records: tuple = ()
    plan: ReconciliationPlan = field(default_factory=ReconciliationPlan.empty)
    counts: dict = field(default_factory=lambda: {"entities": 0, "nomens": 0, "triples": 0})


class CatalogState:
    """Current snapshot plus the single-writer lock."""

    def __init__(self, config: CatalogConfig):
        self.config = config
        self.vocab = Vocabulary(config.namespace)
        self.snapshot = Snapshot(version=0, graph=Graph().freeze())
        self._write_lock = threading.Lock()

    def replace(self, records: tuple, plan: ReconciliationPlan) -> PromoteResult:
        """Promote and swap. Raises without touching the snapshot on
        any failure, so a bad batch never corrupts served state."""
        with self._write_lock:
            result = promote(records, plan, namespace=self.config.namespace, vocab=self.vocab)
            self.snapshot = Snapshot(
                version=self.snapshot.version + 1,
                graph=result.graph,
                records=tuple(records),
                plan=plan,
                counts=result.counts(),
            )
            return result


def _term_json(term) -> dict:
    if isinstance(term, Iri):
        return {"type": "iri", "value": term.value}
    assert isinstance(term, Literal)
    out = {"type": "literal", "value": term.lexical}
    if term.lang_norm:
        out["lang"] = term.lang_norm
    return out


def _subgraph_json(sub: Subgraph) -> dict:
    return {
        "root": sub.root.value,
        "depth": sub.depth,
        "root_present": sub.root_present,
        "triples": [
            {"s": t.subject.value, "p": t.predicate.value, "o": _term_json(t.object)}
            for t in sub.sorted_triples()
        ],
    }


def create_app(config: Optional[CatalogConfig] = None) -> FastAPI:
    config = config or CatalogConfig.from_env()
    state = CatalogState(config)
    app = FastAPI(title="nomengraph catalog", docs_url=None, redoc_url=None)
    app.state.catalog = state

    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["X-Catalog-Version"],
    )

    @app.middleware("http")
    async def version_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Catalog-Version"] = str(state.snapshot.version)
        return response

    def bad_request(exc: CatalogError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/")
    def info():
        snap = state.snapshot
        return {
            "service": "nomengraph",
            "version": snap.version,
            "namespace": config.namespace,
            "default_lang": config.default_lang,
            "counts": snap.counts,
        }

    @app.post("/ingest")
    async def ingest(request: Request, directives: Optional[str] = Query(default=None)):
        """Replace the catalog contents. Body: JSON Lines records;
        ``directives`` optionally names a directives file on the
        server's filesystem."""
        body = await request.body()
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            return JSONResponse(status_code=400, content={"detail": "body must be UTF-8"})
        plan = ReconciliationPlan.empty()
        try:
            if directives:
                try:
                    with open(directives, "r", encoding="utf-8") as fh:
                        plan = parse_directives(fh.read())
                except OSError as exc:
                    return JSONResponse(
                        status_code=400, content={"detail": f"cannot read directives file: {exc}"}
                    )
            records = parse_records(text)
            result = state.replace(tuple(records), plan)
        except CatalogError as exc:
            return bad_request(exc)
        return {
            "version": state.snapshot.version,
            "counts": result.counts(),
            "warnings": result.warnings,
        }

    @app.post("/reconcile")
    async def reconcile(request: Request):
        """Add merge directives on top of the retained ones and replay
        promotion over the retained records."""
        body = await request.body()
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            return JSONResponse(status_code=400, content={"detail": "body must be UTF-8"})
        try:
            new_plan = parse_directives(text)
            snap = state.snapshot
            merged = snap.plan.merged_with(new_plan)
            state.replace(snap.records, merged)
        except CatalogError as exc:
            return bad_request(exc)
        merged_entities = sum(len(s) - 1 for s in merged.closure())
        return {
            "version": state.snapshot.version,
            "merged_entities": merged_entities,
            "counts": state.snapshot.counts,
        }

    def entity_payload(iri: str, lang: Optional[str], depth: int) -> dict:
        snap = state.snapshot
        vocab = state.vocab
        graph = snap.graph
        if depth < 0 or depth > config.max_depth:
            raise HTTPException(status_code=422, detail=f"depth must be between 0 and {config.max_depth}")
        node = _resolve_node(graph, iri, config.namespace)
        if node is None:
            raise HTTPException(status_code=404, detail=f"no such node: {iri}")

        kind = entity_kind(graph, node, vocab)
        try:
            res = resolve_label(graph, node, lang, config.default_lang, vocab)
            label, label_lang, rule = res.label, res.lang, res.rule
        except NoLabelError:
            label = label_lang = rule = None

        nomens = []
        for nomen, lit in nomen_entries(graph, node, vocab):
            ntype = None
            for t in graph.triples_matching(subject=nomen, predicate=RDF_TYPE):
                if isinstance(t.object, Iri):
                    got = vocab.nomen_type_for_class(t.object)
                    if got is not None:
                        ntype = got.value
            relations = []
            for t in graph.triples_matching(subject=nomen):
                rel = vocab.nomen_relation_name(t.predicate)
                if rel is not None and isinstance(t.object, Iri):
                    relations.append({"rel": rel, "direction": "out", "other": t.object.value})
            for t in graph.triples_matching(object=nomen):
                rel = vocab.nomen_relation_name(t.predicate)
                if rel is not None:
                    relations.append({"rel": rel, "direction": "in", "other": t.subject.value})
            relations.sort(key=lambda r: (r["rel"], r["direction"], r["other"]))
            schemes = sorted(
                t.object.lexical
                for t in graph.triples_matching(subject=nomen, predicate=vocab.in_scheme)
                if isinstance(t.object, Literal)
            )
            entry = {
                "iri": nomen.value,
                "value": lit.lexical,
                "lang": lit.lang_norm,
                "type": ntype,
                "relations": relations,
            }
            if schemes:
                entry["schemes"] = schemes
            nomens.append(entry)

        return {
            "iri": node.value,
            "kind": kind.value if kind else None,
            "label": label,
            "lang": label_lang,
            "rule_fired": rule,
            "nomens": nomens,
            "relations": _entity_relations(graph, node, vocab),
            "subgraph": _subgraph_json(graph.neighborhood(node, depth)),
        }

    @app.get("/entity")
    def entity_by_query(iri: str, lang: Optional[str] = None, depth: int = 1):
        return entity_payload(iri, lang, depth)

    @app.get("/entity/{iri:path}")
    def entity(iri: str, lang: Optional[str] = None, depth: int = 1):
        return entity_payload(iri, lang, depth)

    def record_payload(iri: str, lang: Optional[str]) -> dict:
        snap = state.snapshot
        node = _resolve_node(snap.graph, iri, config.namespace)
        if node is None:
            raise HTTPException(status_code=404, detail=f"no such node: {iri}")
        try:
            rows = render_record_view(snap.graph, node, lang, config.default_lang, state.vocab)
        except NotManifestationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "iri": node.value,
            "rows": [
                {
                    "slot": r.slot,
                    "value": r.value,
                    "lang": r.lang,
                    "source": r.source.value,
                    "source_kind": r.source_kind,
                }
                for r in rows
            ],
        }

    @app.get("/record")
    def record_by_query(iri: str, lang: Optional[str] = None):
        return record_payload(iri, lang)

    @app.get("/record/{iri:path}")
    def record(iri: str, lang: Optional[str] = None):
        return record_payload(iri, lang)

    @app.get("/search")
    def search(q: str, mode: str = "substring"):
        snap = state.snapshot
        try:
            hits = search_nomens(snap.graph, q, mode, config.default_lang, state.vocab)
        except CatalogError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "query": q,
            "mode": mode,
            "hits": [
                {
                    "nomen": h.nomen.value,
                    "value": h.value,
                    "lang": h.lang,
                    "exact": h.exact,
                    "owners": [
                        {"iri": o.iri.value, "kind": o.kind, "label": o.label} for o in h.owners
                    ],
                }
                for h in hits
            ],
        }

    @app.get("/export")
    def export(format: str = "ntriples"):
        snap = state.snapshot
        if format == "ntriples":
            return Response(content=export_ntriples(snap.graph), media_type="application/n-triples")
        if format == "turtle":
            return Response(
                content=export_turtle(snap.graph, namespace=config.namespace),
                media_type="text/turtle",
            )
        raise HTTPException(status_code=422, detail=f"unknown format {format!r}")

    @app.get("/validate")
    def run_validate():
        snap = state.snapshot
        violations = validate(snap.graph, state.vocab)
        return {
            "count": len(violations),
            "violations": [
                {"code": v.code, "node": v.node.value, "message": v.message} for v in violations
            ],
        }

    return app


def _resolve_node(graph: Graph, raw: str, namespace: str) -> Optional[Iri]:
    """Find the node a client-supplied IRI denotes.

    Path parameters arrive percent-decoded, which mangles minted IRIs
    (their local keys are percent-encoded). If the raw string misses,
    re-encode the local key of a namespace IRI and try again.
    """
    candidates = []
    try:
        candidates.append(Iri(raw))
    except CatalogError:
        pass
    if raw.startswith(namespace):
        kind, sep, local = raw[len(namespace):].partition("/")
        if sep and kind and local:
            try:
                candidates.append(mint_iri(namespace, kind, local))
            except CatalogError:
                pass
    for candidate in candidates:
        if graph.has_node(candidate):
            return candidate
    return None


def _entity_relations(graph: Graph, node: Iri, vocab: Vocabulary) -> list[dict]:
    """Substantive edges touching this entity, including name
    provenance running through its nomens. Plumbing triples (types,
    appellations, strings, schemes) are not relations."""
    rows: list[dict] = []

    def transcribed_name(pred: Iri) -> Optional[str]:
        if pred == vocab.title_nomen:
            return "title"
        if pred == vocab.place_of_publication_nomen:
            return "place_of_publication"
        if pred == vocab.statement_of_responsibility_nomen:
            return "statement_of_responsibility"
        return vocab.role_nomen_label(pred)

    def nomen_owner(nomen: Iri) -> Optional[Iri]:
        owners = graph.triples_matching(predicate=vocab.has_appellation, object=nomen)
        for t in sorted(owners, key=lambda x: x.subject.value):
            return t.subject
        return None

    for t in graph.triples_matching(subject=node):
        name = vocab.entity_relation_name(t.predicate)
        if name is not None and isinstance(t.object, Iri):
            rows.append({"rel": name, "direction": "out", "other": t.object.value})
            continue
        tname = transcribed_name(t.predicate)
        if tname is not None and isinstance(t.object, Iri):
            owner = nomen_owner(t.object)
            if owner is not None and owner != node:
                rows.append(
                    {
                        "rel": tname,
                        "direction": "out",
                        "other": owner.value,
                        "via_nomen": t.object.value,
                    }
                )
    for t in graph.triples_matching(object=node):
        name = vocab.entity_relation_name(t.predicate)
        if name is not None:
            rows.append({"rel": name, "direction": "in", "other": t.subject.value})

    own_nomens = {
        t.object
        for t in graph.triples_matching(subject=node, predicate=vocab.has_appellation)
        if isinstance(t.object, Iri)
    }
    for nomen in own_nomens:
        for t in graph.triples_matching(object=nomen):
            tname = transcribed_name(t.predicate)
            if tname is not None and t.subject != node:
                rows.append(
                    {
                        "rel": tname,
                        "direction": "in",
                        "other": t.subject.value,
                        "via_nomen": nomen.value,
                    }
                )

    rows.sort(key=lambda r: (r["rel"], r["direction"], r["other"], r.get("via_nomen", "")))
    return rows
