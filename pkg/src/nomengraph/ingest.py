"""Flat-record ingestion: parse, reconcile, promote.

Source records arrive as JSON Lines, one record per line:

    {"id": "rec-1", "kind": "person",
     "fields": [{"tag": "name", "value": "John Smith"}],
     "links": [{"rel": "pseudonym_of", "target": "rec-2"}]}

Attribute values that denote entities in their own right (places, for
now) are promoted to provisional entity nodes, one per occurrence of
the value in a record field. Two occurrences are never merged by
string equality; identity is asserted only through explicit
reconciliation directives that name the occurrences to merge:

    {"merge": [["place|London|rec-1|place_of_birth|0",
                "place|London|rec-2|location|0"]]}

Promotion is a pure function of (records, directives): re-running it
over the same inputs yields the same graph, byte for byte, regardless
of record order.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import CatalogError, Graph, Literal, Triple
from .model import (
    AGENT_KINDS,
    DEFAULT_NAMESPACE,
    CatalogBuilder,
    Entity,
    EntityKind,
    Nomen,
    NomenType,
    Vocabulary,
    esc_join,
    esc_split,
)

log = logging.getLogger(__name__)


class IngestError(CatalogError):
    """Malformed record input."""


class DirectiveError(CatalogError):
    """Malformed reconciliation directive."""


class PromoteError(CatalogError):
    """Records and directives that cannot be promoted to a graph."""


@dataclass(frozen=True)
class Field:
    tag: str
    value: str
    lang: Optional[str] = None
    phrase: bool = False


@dataclass(frozen=True)
class Link:
    rel: str
    target: str
    via_nomen: Optional[str] = None


@dataclass(frozen=True)
class FlatRecord:
    record_id: str
    kind: EntityKind
    fields: tuple = ()
    links: tuple = ()


# Tags with record-level semantics. Each maps to the record kinds it
# applies to; place-bearing tags additionally mint a provisional place
# entity per occurrence.
_ALL_KINDS = frozenset(EntityKind)
TAG_KINDS: dict[str, frozenset] = {
    "title": _ALL_KINDS,
    "name": _ALL_KINDS,
    "statement_of_responsibility": frozenset({EntityKind.manifestation}),
    "place_of_publication": frozenset({EntityKind.manifestation}),
    "place_of_birth": frozenset({EntityKind.person}),
    "location": frozenset({EntityKind.corporate_body}),
    "subject_place": frozenset({EntityKind.work}),
}

# place-bearing tag -> entity relation from the record entity to the
# place (None: the connection runs through the transcribed nomen only).
PLACE_TAGS: dict[str, Optional[str]] = {
    "place_of_publication": None,
    "place_of_birth": "born_in",
    "location": "located_in",
    "subject_place": "subject",
}

# Link relation names that point the other way round; they are stored
# under the base relation with subject and object swapped.
INVERSE_RELATIONS = {
    "realized_by": "realizes",
    "embodied_in": "embodies",
}


# --- record parsing -----------------------------------------------------------


def _expect_str(obj: dict, key: str, where: str, optional: bool = False) -> Optional[str]:
    value = obj.get(key)
    if value is None and optional:
        return None
    if not isinstance(value, str) or not value:
        raise IngestError(f"{where}: {key!r} must be a non-empty string")
    return value


def _check_keys(obj: dict, allowed: set, where: str):
    extra = set(obj) - allowed
    if extra:
        raise IngestError(f"{where}: unknown keys {sorted(extra)}")


def parse_record(obj: dict, where: str = "record") -> FlatRecord:
    if not isinstance(obj, dict):
        raise IngestError(f"{where}: record must be a JSON object")
    _check_keys(obj, {"id", "kind", "fields", "links"}, where)
    record_id = _expect_str(obj, "id", where)
    if "|" in record_id:
        raise IngestError(f"{where}: record id {record_id!r} must not contain '|'")
    kind_name = _expect_str(obj, "kind", where)
    try:
        kind = EntityKind(kind_name)
    except ValueError:
        raise IngestError(f"{where}: unknown entity kind {kind_name!r}")

    fields = []
    for i, fobj in enumerate(obj.get("fields") or []):
        fwhere = f"{where}, field {i}"
        if not isinstance(fobj, dict):
            raise IngestError(f"{fwhere}: field must be a JSON object")
        _check_keys(fobj, {"tag", "value", "lang", "phrase"}, fwhere)
        tag = _expect_str(fobj, "tag", fwhere)
        value = _expect_str(fobj, "value", fwhere)
        lang = _expect_str(fobj, "lang", fwhere, optional=True)
        if lang is not None:
            try:
                Literal("x", lang)
            except CatalogError:
                raise IngestError(f"{fwhere}: malformed language tag {lang!r}")
        phrase = fobj.get("phrase", False)
        if not isinstance(phrase, bool):
            raise IngestError(f"{fwhere}: 'phrase' must be a boolean")
        fields.append(Field(tag, value, lang, phrase))

    links = []
    for i, lobj in enumerate(obj.get("links") or []):
        lwhere = f"{where}, link {i}"
        if not isinstance(lobj, dict):
            raise IngestError(f"{lwhere}: link must be a JSON object")
        _check_keys(lobj, {"rel", "target", "via_nomen"}, lwhere)
        links.append(
            Link(
                rel=_expect_str(lobj, "rel", lwhere),
                target=_expect_str(lobj, "target", lwhere),
                via_nomen=_expect_str(lobj, "via_nomen", lwhere, optional=True),
            )
        )

    return FlatRecord(record_id, kind, tuple(fields), tuple(links))


def parse_records(text: str) -> list[FlatRecord]:
    """Parse JSON Lines into flat records. Blank lines are skipped;
    errors carry 1-based line numbers."""
    records: list[FlatRecord] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"line {lineno}: invalid JSON: {exc.msg}")
        record = parse_record(obj, where=f"line {lineno}")
        if record.record_id in seen:
            raise IngestError(
                f"line {lineno}: duplicate record id {record.record_id!r} (first seen on line {seen[record.record_id]})"
            )
        seen[record.record_id] = lineno
        records.append(record)
    return records


# --- provisional keys and directives -------------------------------------------


@dataclass(frozen=True)
class ProvisionalKey:
    """Addresses either a whole record (kind|record_id) or one field
    occurrence within it (kind|value|record_id|tag|occurrence)."""

    kind: EntityKind
    record_id: str
    value: Optional[str] = None
    tag: Optional[str] = None
    occurrence: Optional[int] = None

    @property
    def is_field(self) -> bool:
        return self.tag is not None

    def render(self) -> str:
        if self.is_field:
            return esc_join([self.kind.value, self.value or "", self.record_id, self.tag or "", str(self.occurrence)])
        return esc_join([self.kind.value, self.record_id])

    def local_key(self) -> str:
        """The IRI-minting key for the entity this occurrence denotes."""
        if self.is_field:
            return f"{self.record_id}|{self.tag}|{self.occurrence}"
        return self.record_id


def parse_provisional_key(key: str) -> ProvisionalKey:
    try:
        parts = esc_split(key)
    except CatalogError as exc:
        raise DirectiveError(f"bad key {key!r}: {exc}")
    try:
        kind = EntityKind(parts[0])
    except ValueError:
        raise DirectiveError(f"bad key {key!r}: unknown entity kind {parts[0]!r}")
    if len(parts) == 2:
        if not parts[1]:
            raise DirectiveError(f"bad key {key!r}: empty record id")
        return ProvisionalKey(kind=kind, record_id=parts[1])
    if len(parts) == 5:
        value, record_id, tag, occ = parts[1], parts[2], parts[3], parts[4]
        if not (value and record_id and tag):
            raise DirectiveError(f"bad key {key!r}: empty component")
        if not occ.isdigit():
            raise DirectiveError(f"bad key {key!r}: occurrence must be a non-negative integer")
        return ProvisionalKey(kind=kind, record_id=record_id, value=value, tag=tag, occurrence=int(occ))
    raise DirectiveError(
        f"bad key {key!r}: expected kind|record_id or kind|value|record_id|tag|occurrence"
    )


@dataclass(frozen=True)
class ReconciliationPlan:
    """An accumulated set of merge directives. Plans are combined by
    concatenation; the effective partition is the transitive closure,
    so combining order never matters."""

    merge_sets: tuple = ()

    @classmethod
    def empty(cls) -> ReconciliationPlan:
        return cls(())

    def merged_with(self, other: ReconciliationPlan) -> ReconciliationPlan:
        return ReconciliationPlan(self.merge_sets + other.merge_sets)

    def closure(self) -> list[frozenset]:
        """Union-find closure over all merge sets, returned as a
        deterministic partition (singletons omitted)."""
        parent: dict[str, str] = {}

        def find(x: str) -> str:
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for group in self.merge_sets:
            for key in group:
                parent.setdefault(key, key)
            it = iter(group)
            first = find(next(it))
            for key in it:
                parent[find(key)] = first
        groups: dict[str, set] = {}
        for key in parent:
            groups.setdefault(find(key), set()).add(key)
        closed = [frozenset(g) for g in groups.values() if len(g) > 1]
        closed.sort(key=min)
        return closed


def parse_directives(text: str) -> ReconciliationPlan:
    """Parse a directives document: {"merge": [[key, ...], ...]}."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DirectiveError(f"invalid JSON: {exc.msg}")
    if not isinstance(obj, dict):
        raise DirectiveError("directives must be a JSON object")
    extra = set(obj) - {"merge"}
    if extra:
        raise DirectiveError(f"unknown directive keys {sorted(extra)}")
    sets = obj.get("merge", [])
    if not isinstance(sets, list):
        raise DirectiveError("'merge' must be a list of key lists")
    merge_sets = []
    for i, group in enumerate(sets):
        if not isinstance(group, list) or not all(isinstance(k, str) for k in group):
            raise DirectiveError(f"merge set {i}: must be a list of key strings")
        if len(group) < 2:
            raise DirectiveError(f"merge set {i}: needs at least two keys")
        parsed = [parse_provisional_key(k) for k in group]
        kinds = {p.kind for p in parsed}
        if len(kinds) > 1:
            raise DirectiveError(
                f"merge set {i}: mixes entity kinds {sorted(k.value for k in kinds)}"
            )
        merge_sets.append(tuple(group))
    return ReconciliationPlan(tuple(merge_sets))


# --- promotion ------------------------------------------------------------------


@dataclass
class PromoteResult:
    builder: CatalogBuilder
    graph: Graph
    warnings: list = field(default_factory=list)

    @property
    def entity_count(self) -> int:
        return len(self.builder.entities())

    @property
    def nomen_count(self) -> int:
        return len(self.builder.nomens())

    @property
    def triple_count(self) -> int:
        return len(self.graph)

    def counts(self) -> dict:
        return {
            "entities": self.entity_count,
            "nomens": self.nomen_count,
            "triples": self.triple_count,
        }


def _field_occurrences(record: FlatRecord) -> list[tuple[Field, int]]:
    counts: dict[str, int] = {}
    out = []
    for f in record.fields:
        occ = counts.get(f.tag, 0)
        counts[f.tag] = occ + 1
        out.append((f, occ))
    return out


def promote(
    records: Sequence[FlatRecord],
    plan: Optional[ReconciliationPlan] = None,
    namespace: str = DEFAULT_NAMESPACE,
    vocab: Optional[Vocabulary] = None,
) -> PromoteResult:
    """Promote flat records to the graph model.

    Deterministic in the set of records: records are processed in
    record-id order, so any permutation of the same batch yields an
    identical graph. All identity decisions come from ``plan``; absent
    directives, every record and every place-bearing field occurrence
    becomes its own entity.
    """
    plan = plan or ReconciliationPlan.empty()
    ordered = sorted(records, key=lambda r: r.record_id)
    by_id: dict[str, FlatRecord] = {}
    for r in ordered:
        if r.record_id in by_id:
            raise PromoteError(f"duplicate record id {r.record_id!r}")
        by_id[r.record_id] = r

    # Universe of provisional keys this batch can mint.
    universe: dict[str, ProvisionalKey] = {}
    for r in ordered:
        rec_key = ProvisionalKey(kind=r.kind, record_id=r.record_id)
        universe[rec_key.render()] = rec_key
        for f, occ in _field_occurrences(r):
            if f.tag in PLACE_TAGS and r.kind in TAG_KINDS.get(f.tag, ()):
                pk = ProvisionalKey(
                    kind=EntityKind.place, record_id=r.record_id, value=f.value, tag=f.tag, occurrence=occ
                )
                universe[pk.render()] = pk

    for r in ordered:
        for i, link in enumerate(r.links):
            if link.target not in by_id:
                raise PromoteError(
                    f"record {r.record_id!r} link {i}: target {link.target!r} is not in this batch"
                )

    closed = plan.closure()
    group_of: dict[str, frozenset] = {}
    for group in closed:
        for key in group:
            if key not in universe:
                raise PromoteError(f"merge directive references unknown key {key!r}")
            group_of[key] = group

    builder = CatalogBuilder(namespace=namespace, vocab=vocab)
    warnings: list[str] = []
    entity_for_key: dict[str, Entity] = {}

    def materialize(key: str) -> Entity:
        if key in entity_for_key:
            return entity_for_key[key]
        group = group_of.get(key)
        members = sorted(group) if group else [key]
        rep = parse_provisional_key(members[0])
        entity = builder.create_entity(rep.kind, rep.local_key(), extra_keys=members)
        for m in members:
            entity_for_key[m] = entity
        return entity

    # Phase 1: record entities, in record-id order so merged entities
    # are minted from a stable representative.
    record_entity: dict[str, Entity] = {}
    for r in ordered:
        record_entity[r.record_id] = materialize(ProvisionalKey(kind=r.kind, record_id=r.record_id).render())

    # Phase 2: fields.
    # First preferred title per (expression entity, language); every
    # later same-language title-typed nomen on the expression is marked
    # a variant form of it, whichever tag produced it.
    first_title: dict[tuple, Nomen] = {}

    def mark_title(owner: Entity, nomen: Nomen) -> None:
        if owner.kind is not EntityKind.expression or nomen.nomen_type is not NomenType.title:
            return
        slot = (owner.iri, nomen.string.lang_norm)
        if slot in first_title and first_title[slot].iri != nomen.iri:
            builder.relate_nomens(nomen, first_title[slot], "variant_form")
        else:
            first_title.setdefault(slot, nomen)

    for r in ordered:
        owner = record_entity[r.record_id]
        for f, occ in _field_occurrences(r):
            if f.tag not in TAG_KINDS:
                warnings.append(f"record {r.record_id!r}: unknown tag {f.tag!r} skipped")
                log.warning("record %r: unknown tag %r skipped", r.record_id, f.tag)
                continue
            if r.kind not in TAG_KINDS[f.tag]:
                warnings.append(
                    f"record {r.record_id!r}: tag {f.tag!r} does not apply to kind {r.kind.value!r}, skipped"
                )
                log.warning(
                    "record %r: tag %r does not apply to kind %r, skipped", r.record_id, f.tag, r.kind.value
                )
                continue

            if f.tag == "title":
                nomen = builder.attach_nomen(owner, f.value, f.lang, NomenType.title)
                builder.graph.add(Triple(owner.iri, builder.vocab.title_nomen, nomen.iri))
                mark_title(owner, nomen)
            elif f.tag == "name":
                mark_title(owner, builder.attach_nomen(owner, f.value, f.lang))
            elif f.tag == "statement_of_responsibility":
                _promote_statement(builder, r, owner, f, record_entity)
            elif f.tag in PLACE_TAGS:
                pk = ProvisionalKey(
                    kind=EntityKind.place, record_id=r.record_id, value=f.value, tag=f.tag, occurrence=occ
                )
                place = materialize(pk.render())
                nomen = builder.attach_nomen(place, f.value, f.lang, NomenType.place_name)
                rel = PLACE_TAGS[f.tag]
                if rel is None:
                    builder.graph.add(Triple(owner.iri, builder.vocab.place_of_publication_nomen, nomen.iri))
                else:
                    _relate_with_context(builder, r, owner, place, rel)

    # Phase 3: links.
    for r in ordered:
        source = record_entity[r.record_id]
        for link in r.links:
            target = record_entity[link.target]
            base = INVERSE_RELATIONS.get(link.rel)
            if base is not None:
                _relate_with_context(builder, r, target, source, base)
            else:
                _relate_with_context(builder, r, source, target, link.rel)
            if link.via_nomen is not None:
                nomen = builder.attach_nomen(target, link.via_nomen)
                builder.relate_role_nomen(source, link.rel, nomen)

    return PromoteResult(builder=builder, graph=builder.freeze(), warnings=warnings)


def _relate_with_context(builder: CatalogBuilder, record: FlatRecord, a: Entity, b: Entity, rel: str):
    try:
        builder.relate_entities(a, b, rel)
    except CatalogError as exc:
        raise PromoteError(f"record {record.record_id!r}: {exc}")


def _promote_statement(
    builder: CatalogBuilder,
    record: FlatRecord,
    owner: Entity,
    f: Field,
    record_entity: dict,
):
    """A statement of responsibility is transcribed verbatim. When it
    matches the name a link used for an agent, it is that agent's
    nomen; otherwise it is kept as an anonymous phrase nomen."""
    nomen: Optional[Nomen] = None
    if not f.phrase:
        for link in record.links:
            if link.via_nomen != f.value:
                continue
            target = record_entity.get(link.target)
            if target is not None and target.kind in AGENT_KINDS:
                nomen = builder.attach_nomen(target, f.value, f.lang)
                break
    if nomen is None:
        nomen = builder.attach_nomen(owner, f.value, f.lang, NomenType.phrase)
    builder.graph.add(Triple(owner.iri, builder.vocab.statement_of_responsibility_nomen, nomen.iri))
