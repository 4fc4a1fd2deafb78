"""Read-side operations: labels, record views, name search.

A label is never stored on an entity; it is always resolved at read
time from the entity's nomens, preferring the reader's language. The
resolution ladder is fixed and every result reports which rung fired,
so callers can tell a precise match from a fallback:

1   an own nomen whose language tag matches exactly
1b  an own nomen matching on the primary language subtag
2   (works) a title of one of the work's expressions, exact match
3   an own nomen (then, for works, an expression title) in the
    catalog default language
4   the nomen with the smallest IRI, any language

Within a rung, ties break on the smallest nomen IRI, so resolution is
deterministic for a given graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import CatalogError, Graph, Iri, Literal, term_sort_key
from .model import RDF_TYPE, EntityKind, NomenType, Vocabulary

DEFAULT_LANG = "en"


class NoLabelError(CatalogError):
    """The entity has no nomen to label it with."""


class NotManifestationError(CatalogError):
    """Record views are defined for manifestations only."""


@dataclass(frozen=True)
class LabelResult:
    label: str
    lang: Optional[str]
    rule: str
    nomen: Iri


@dataclass(frozen=True)
class ViewRow:
    slot: str
    value: str
    lang: Optional[str]
    source: Iri
    source_kind: str  # "nomen" for transcribed values, "entity" for resolved ones


@dataclass(frozen=True)
class Owner:
    iri: Iri
    kind: Optional[str]
    label: Optional[str]


@dataclass(frozen=True)
class Hit:
    nomen: Iri
    value: str
    lang: Optional[str]
    exact: bool
    owners: tuple


def entity_kind(graph: Graph, node: Iri, vocab: Vocabulary) -> Optional[EntityKind]:
    for t in graph.triples_matching(subject=node, predicate=RDF_TYPE):
        if isinstance(t.object, Iri):
            kind = vocab.entity_kind_for_class(t.object)
            if kind is not None:
                return kind
    return None


def nomen_entries(graph: Graph, owner: Iri, vocab: Vocabulary, titles_only: bool = False) -> list[tuple[Iri, Literal]]:
    """(nomen IRI, string literal) for each appellation of ``owner``,
    in nomen-IRI order. Nomens without a string are skipped here; the
    validator reports them."""
    entries = []
    for t in graph.triples_matching(subject=owner, predicate=vocab.has_appellation):
        nomen = t.object
        if not isinstance(nomen, Iri):
            continue
        if titles_only:
            types = {
                tt.object
                for tt in graph.triples_matching(subject=nomen, predicate=RDF_TYPE)
                if isinstance(tt.object, Iri)
            }
            if vocab.nomen_class(NomenType.title) not in types:
                continue
        strings = sorted(
            (s.object for s in graph.triples_matching(subject=nomen, predicate=vocab.has_string)
             if isinstance(s.object, Literal)),
            key=term_sort_key,
        )
        if strings:
            entries.append((nomen, strings[0]))
    entries.sort(key=lambda e: e[0].value)
    return entries


def _expression_entries(graph: Graph, work: Iri, vocab: Vocabulary) -> list[tuple[Iri, Literal]]:
    realizes = vocab.prop("realizes")
    expressions = sorted(
        {t.subject for t in graph.triples_matching(predicate=realizes, object=work)},
        key=lambda i: i.value,
    )
    entries = []
    for expr in expressions:
        entries.extend(nomen_entries(graph, expr, vocab, titles_only=True))
    return entries


def resolve_label(
    graph: Graph,
    entity: Iri,
    lang: Optional[str] = None,
    default_lang: str = DEFAULT_LANG,
    vocab: Optional[Vocabulary] = None,
) -> LabelResult:
    """Resolve a display label for ``entity``, preferring ``lang``.

    Raises NoLabelError if no nomen with a string is reachable.
    """
    vocab = vocab or Vocabulary()
    own = nomen_entries(graph, entity, vocab)
    is_work = entity_kind(graph, entity, vocab) is EntityKind.work
    expr = _expression_entries(graph, entity, vocab) if is_work else []

    def result(entry: tuple[Iri, Literal], rule: str) -> LabelResult:
        nomen, lit = entry
        return LabelResult(label=lit.lexical, lang=lit.lang_norm, rule=rule, nomen=nomen)

    if lang is not None:
        req = lang.lower()
        for entry in own:
            if entry[1].lang_norm == req:
                return result(entry, "1")
        req_primary = req.split("-")[0]
        subtag_hits = [
            e for e in own if e[1].lang_norm is not None and e[1].lang_norm.split("-")[0] == req_primary
        ]
        if subtag_hits:
            subtag_hits.sort(key=lambda e: (len(e[1].lang_norm or ""), e[1].lang_norm or "", e[0].value))
            return result(subtag_hits[0], "1b")
        for entry in expr:
            if entry[1].lang_norm == req:
                return result(entry, "2")

    default_norm = default_lang.lower()
    for entry in own:
        if entry[1].lang_norm == default_norm:
            return result(entry, "3")
    for entry in expr:
        if entry[1].lang_norm == default_norm:
            return result(entry, "3")

    reachable = sorted(own + expr, key=lambda e: e[0].value)
    if reachable:
        return result(reachable[0], "4")
    raise NoLabelError(f"no nomen reachable from <{entity.value}>")


# --- record views ---------------------------------------------------------------


def render_record_view(
    graph: Graph,
    manifestation: Iri,
    lang: Optional[str] = None,
    default_lang: str = DEFAULT_LANG,
    vocab: Optional[Vocabulary] = None,
) -> list[ViewRow]:
    """Flatten a manifestation back into catalog-card rows.

    Transcribed slots (title, statement of responsibility, place of
    publication) reproduce the stored string byte for byte and cite the
    nomen they came from; agent slots show each agent's resolved label
    and cite the entity.
    """
    vocab = vocab or Vocabulary()
    if entity_kind(graph, manifestation, vocab) is not EntityKind.manifestation:
        raise NotManifestationError(f"<{manifestation.value}> is not a manifestation")

    rows: list[ViewRow] = []

    def transcribed(slot: str, predicate: Iri):
        nomens = sorted(
            (t.object for t in graph.triples_matching(subject=manifestation, predicate=predicate)
             if isinstance(t.object, Iri)),
            key=lambda i: i.value,
        )
        for nomen in nomens:
            strings = sorted(
                (s.object for s in graph.triples_matching(subject=nomen, predicate=vocab.has_string)
                 if isinstance(s.object, Literal)),
                key=term_sort_key,
            )
            for lit in strings[:1]:
                rows.append(ViewRow(slot, lit.lexical, lit.lang_norm, nomen, "nomen"))

    transcribed("title", vocab.title_nomen)
    transcribed("statement_of_responsibility", vocab.statement_of_responsibility_nomen)
    transcribed("place_of_publication", vocab.place_of_publication_nomen)

    def labeled(slot: str, target: Iri):
        try:
            res = resolve_label(graph, target, lang, default_lang, vocab)
            rows.append(ViewRow(slot, res.label, res.lang, target, "entity"))
        except NoLabelError:
            rows.append(ViewRow(slot, target.value, None, target, "entity"))

    publishers = sorted(
        (t.object for t in graph.triples_matching(subject=manifestation, predicate=vocab.prop("publisher"))
         if isinstance(t.object, Iri)),
        key=lambda i: i.value,
    )
    for target in publishers:
        labeled("publisher", target)

    agents = []
    for t in graph.triples_matching(subject=manifestation):
        if not isinstance(t.object, Iri):
            continue
        role = vocab.role_label(t.predicate)
        if role is not None:
            agents.append((role, t.object))
        elif t.predicate == vocab.prop("creator"):
            agents.append(("creator", t.object))
    for slot, target in sorted(agents, key=lambda a: (a[0], a[1].value)):
        labeled(slot, target)

    return rows


# --- search ----------------------------------------------------------------------


def search_nomens(
    graph: Graph,
    query: str,
    mode: str = "substring",
    default_lang: str = DEFAULT_LANG,
    vocab: Optional[Vocabulary] = None,
) -> list[Hit]:
    """Find nomens by their string. ``exact`` compares code points;
    ``substring`` is a casefolded containment test."""
    if mode not in ("exact", "substring"):
        raise CatalogError(f"unknown search mode {mode!r}")
    if not query:
        raise CatalogError("empty search query")
    vocab = vocab or Vocabulary()
    needle = query.casefold()
    hits = []
    for t in graph.triples_matching(predicate=vocab.has_string):
        if not isinstance(t.object, Literal):
            continue
        lexical = t.object.lexical
        if mode == "exact":
            if lexical != query:
                continue
        else:
            if needle not in lexical.casefold():
                continue
        owners = []
        for ot in sorted(
            graph.triples_matching(predicate=vocab.has_appellation, object=t.subject),
            key=lambda x: x.subject.value,
        ):
            kind = entity_kind(graph, ot.subject, vocab)
            try:
                label = resolve_label(graph, ot.subject, None, default_lang, vocab).label
            except NoLabelError:
                label = None
            owners.append(Owner(iri=ot.subject, kind=kind.value if kind else None, label=label))
        hits.append(
            Hit(
                nomen=t.subject,
                value=lexical,
                lang=t.object.lang_norm,
                exact=lexical == query,
                owners=tuple(owners),
            )
        )
    hits.sort(
        key=lambda h: (
            0 if h.exact else 1,
            ",".join(sorted(o.kind or "" for o in h.owners)),
            h.nomen.value,
        )
    )
    return hits
