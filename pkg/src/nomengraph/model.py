"""Bibliographic vocabulary and typed graph construction.

The model has two levels: entities (works, expressions, manifestations,
items, persons, families, corporate bodies, places) and the names those
entities are known by. Every lexical form of a name is promoted to a
first-class nomen node: the owning entity points at the nomen with
``hasAppellation`` and the nomen points at exactly one literal with
``hasString``. Relations therefore exist between entities, between an
entity and a specific name of another entity (the transcribed-field
predicates), and between one name and another (pseudonym, acronym,
name in religion, ...).

All IRIs are minted deterministically from a configurable namespace
prefix, so the same inputs always produce the same graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Union
from urllib.parse import quote, unquote

from .graph import CatalogError, Graph, Iri, Literal, Term, Triple

RDF_TYPE = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")

DEFAULT_NAMESPACE = "http://example.org/catalog/"


class ModelError(CatalogError):
    pass


class ProvisionalKeyError(ModelError):
    """A provisional key was reused for the same entity kind."""


class UnknownRelationError(ModelError):
    """A nomen relation type outside the configured set."""


class DomainRangeError(ModelError):
    """An entity relation applied to entities of the wrong kinds."""


class EntityKind(str, Enum):
    work = "work"
    expression = "expression"
    manifestation = "manifestation"
    item = "item"
    person = "person"
    family = "family"
    corporate_body = "corporate_body"
    place = "place"


class NomenType(str, Enum):
    personal_name = "personal_name"
    corporate_name = "corporate_name"
    family_name = "family_name"
    place_name = "place_name"
    title = "title"
    phrase = "phrase"


# Name-to-name relation vocabulary, after the UNIMARC $5 / MARC 21 $w
# coded values. Extensible per catalog via Vocabulary.
DEFAULT_NOMEN_RELATIONS = frozenset(
    {
        "name_before_marriage",
        "name_in_religion",
        "acronym",
        "pseudonym",
        "earlier_name",
        "later_name",
        "variant_form",
    }
)

AGENT_KINDS = frozenset({EntityKind.person, EntityKind.family, EntityKind.corporate_body})
_GROUP1 = frozenset({EntityKind.work, EntityKind.expression, EntityKind.manifestation, EntityKind.item})

# Fixed entity-level relations with their domain/range constraints
# (None = any kind). Free-text contributor roles are handled separately.
ENTITY_RELATIONS: dict[str, tuple[Optional[frozenset], Optional[frozenset]]] = {
    "creator": (frozenset({EntityKind.work, EntityKind.expression}), AGENT_KINDS),
    "publisher": (frozenset({EntityKind.manifestation}), AGENT_KINDS),
    "realizes": (frozenset({EntityKind.expression}), frozenset({EntityKind.work})),
    "embodies": (frozenset({EntityKind.manifestation}), frozenset({EntityKind.expression, EntityKind.work})),
    "exemplifies": (frozenset({EntityKind.item}), frozenset({EntityKind.manifestation})),
    "born_in": (frozenset({EntityKind.person}), frozenset({EntityKind.place})),
    "located_in": (frozenset({EntityKind.corporate_body}), frozenset({EntityKind.place})),
    "subject": (frozenset({EntityKind.work}), None),
}

_ROLE_DOMAIN = _GROUP1 | AGENT_KINDS

# Default nomen type when a name is attached to an entity of this kind.
DEFAULT_NOMEN_TYPE = {
    EntityKind.person: NomenType.personal_name,
    EntityKind.family: NomenType.family_name,
    EntityKind.corporate_body: NomenType.corporate_name,
    EntityKind.place: NomenType.place_name,
    EntityKind.work: NomenType.title,
    EntityKind.expression: NomenType.title,
    EntityKind.manifestation: NomenType.title,
    EntityKind.item: NomenType.title,
}

# Religious-name policies: one entity carrying both names related by
# name_in_religion, or a separate persona entity per identity.
RELIGIOUS_SINGLE_ENTITY = "single_entity"
RELIGIOUS_TWO_ENTITY = "two_entity"


def mint_iri(namespace: str, kind: str, local_key: str) -> Iri:
    """Deterministic IRI minting: namespace + kind + "/" + the
    percent-encoded local key. Injective over (kind, local_key)."""
    if not local_key:
        raise ModelError("local key must be non-empty")
    return Iri(f"{namespace}{kind}/{quote(local_key, safe='')}")


def esc_join(components: Iterable[str]) -> str:
    """Join key components with '|', escaping so the result is
    injective over the component tuple."""
    return "|".join(c.replace("\\", "\\\\").replace("|", "\\|") for c in components)


def esc_split(key: str) -> list[str]:
    parts = [""]
    it = iter(key)
    for ch in it:
        if ch == "\\":
            try:
                parts[-1] += next(it)
            except StopIteration:
                raise ModelError(f"dangling escape in key {key!r}")
        elif ch == "|":
            parts.append("")
        else:
            parts[-1] += ch
    return parts


@dataclass(frozen=True)
class Entity:
    """A bibliographic entity node. ``provisional_keys`` records every
    source key that was merged into this entity."""

    iri: Iri
    kind: EntityKind
    local_key: str
    provisional_keys: frozenset


@dataclass(frozen=True)
class Nomen:
    """One lexical form by which an entity is known, bound to exactly
    one literal string."""

    iri: Iri
    owner: Iri
    string: Literal
    nomen_type: NomenType
    scheme: Optional[str] = None


@dataclass(frozen=True)
class Violation:
    code: str
    node: Iri
    message: str


class Vocabulary:
    """Predicate and class IRIs for one catalog namespace, plus the
    recognizers the read side and the validator need."""

    def __init__(self, namespace: str = DEFAULT_NAMESPACE, extra_nomen_relations: Iterable[str] = ()):
        self.namespace = namespace
        self.nomen_relations = frozenset(DEFAULT_NOMEN_RELATIONS) | frozenset(extra_nomen_relations)
        self.has_appellation = self.prop("hasAppellation")
        self.has_string = self.prop("hasString")
        self.in_scheme = self.prop("inScheme")
        self.title_nomen = self.prop("titleNomen")
        self.place_of_publication_nomen = self.prop("placeOfPublicationNomen")
        self.statement_of_responsibility_nomen = self.prop("statementOfResponsibilityNomen")
        self._role_prefix = f"{namespace}prop/role/"
        self._role_nomen_prefix = f"{namespace}prop/roleNomen/"
        self._nomen_relation_prefix = f"{namespace}prop/nomenRelation/"
        self._entity_class_prefix = f"{namespace}class/"
        self._nomen_class_prefix = f"{namespace}class/nomen/"

    def prop(self, name: str) -> Iri:
        return Iri(f"{self.namespace}prop/{name}")

    def entity_relation(self, name: str) -> Iri:
        if name in ENTITY_RELATIONS:
            return self.prop(name)
        return self.role(name)

    def role(self, label: str) -> Iri:
        return Iri(f"{self._role_prefix}{quote(label, safe='')}")

    def role_nomen(self, label: str) -> Iri:
        return Iri(f"{self._role_nomen_prefix}{quote(label, safe='')}")

    def nomen_relation(self, rel: str) -> Iri:
        if rel not in self.nomen_relations:
            raise UnknownRelationError(f"unknown nomen relation type {rel!r}")
        return Iri(f"{self._nomen_relation_prefix}{quote(rel, safe='')}")

    def entity_class(self, kind: EntityKind) -> Iri:
        return Iri(f"{self._entity_class_prefix}{EntityKind(kind).value}")

    def nomen_class(self, nomen_type: NomenType) -> Iri:
        return Iri(f"{self._nomen_class_prefix}{NomenType(nomen_type).value}")

    # --- recognizers ------------------------------------------------------

    def entity_kind_for_class(self, iri: Iri) -> Optional[EntityKind]:
        if not iri.value.startswith(self._entity_class_prefix):
            return None
        name = iri.value[len(self._entity_class_prefix):]
        try:
            return EntityKind(name)
        except ValueError:
            return None

    def nomen_type_for_class(self, iri: Iri) -> Optional[NomenType]:
        if not iri.value.startswith(self._nomen_class_prefix):
            return None
        try:
            return NomenType(iri.value[len(self._nomen_class_prefix):])
        except ValueError:
            return None

    def role_label(self, predicate: Iri) -> Optional[str]:
        if predicate.value.startswith(self._role_prefix):
            return unquote(predicate.value[len(self._role_prefix):])
        return None

    def role_nomen_label(self, predicate: Iri) -> Optional[str]:
        if predicate.value.startswith(self._role_nomen_prefix):
            return unquote(predicate.value[len(self._role_nomen_prefix):])
        return None

    def nomen_relation_name(self, predicate: Iri) -> Optional[str]:
        if predicate.value.startswith(self._nomen_relation_prefix):
            return unquote(predicate.value[len(self._nomen_relation_prefix):])
        return None

    def is_transcribed_field(self, predicate: Iri) -> bool:
        """Predicates that carry name provenance: they always point at
        the specific nomen a resource used."""
        return (
            predicate in (self.title_nomen, self.place_of_publication_nomen, self.statement_of_responsibility_nomen)
            or predicate.value.startswith(self._role_nomen_prefix)
        )

    def is_entity_relation(self, predicate: Iri) -> bool:
        name = predicate.value[len(self.namespace) + len("prop/"):] if predicate.value.startswith(f"{self.namespace}prop/") else None
        return name in ENTITY_RELATIONS or predicate.value.startswith(self._role_prefix)

    def entity_relation_name(self, predicate: Iri) -> Optional[str]:
        """Short display name for an entity-level relation predicate."""
        role = self.role_label(predicate)
        if role is not None:
            return role
        prefix = f"{self.namespace}prop/"
        if predicate.value.startswith(prefix):
            name = predicate.value[len(prefix):]
            if name in ENTITY_RELATIONS:
                return name
        return None


class CatalogBuilder:
    """Single-writer construction of a well-formed catalog graph.

    Holds the provisional-key registry and the nomen registry used for
    find-or-create semantics; both are build state, discarded once the
    graph is frozen.
    """

    def __init__(self, namespace: str = DEFAULT_NAMESPACE, vocab: Optional[Vocabulary] = None):
        self.vocab = vocab or Vocabulary(namespace)
        self.graph = Graph()
        self._by_key: dict[tuple[EntityKind, str], Entity] = {}
        self._by_iri: dict[Iri, Entity] = {}
        self._nomens: dict[tuple[Iri, str, Optional[str], NomenType], Nomen] = {}

    # --- entities ---------------------------------------------------------

    def create_entity(
        self,
        kind: EntityKind,
        provisional_key: str,
        extra_keys: Iterable[str] = (),
    ) -> Entity:
        """Create an entity node and assert its type triple.

        ``provisional_key`` mints the IRI; ``extra_keys`` register
        additional source keys resolved into this entity (merges).
        Reusing any key for the same kind is an error: identity
        judgments must go through explicit reconciliation.
        """
        kind = EntityKind(kind)
        keys = [provisional_key, *extra_keys]
        for key in keys:
            if (kind, key) in self._by_key:
                raise ProvisionalKeyError(f"provisional key {key!r} already used for kind {kind.value!r}")
        entity = Entity(
            iri=mint_iri(self.vocab.namespace, kind.value, provisional_key),
            kind=kind,
            local_key=provisional_key,
            provisional_keys=frozenset(keys),
        )
        for key in keys:
            self._by_key[(kind, key)] = entity
        self._by_iri[entity.iri] = entity
        self.graph.add(Triple(entity.iri, RDF_TYPE, self.vocab.entity_class(kind)))
        return entity

    def entity_for_key(self, kind: EntityKind, key: str) -> Optional[Entity]:
        return self._by_key.get((EntityKind(kind), key))

    def entity_for_iri(self, iri: Iri) -> Optional[Entity]:
        return self._by_iri.get(iri)

    def entities(self) -> list[Entity]:
        return sorted(self._by_iri.values(), key=lambda e: e.iri.value)

    def nomens(self) -> list[Nomen]:
        return sorted(self._nomens.values(), key=lambda n: n.iri.value)

    # --- nomens -------------------------------------------------------------

    def attach_nomen(
        self,
        owner: Entity,
        lexical: str,
        lang: Optional[str] = None,
        nomen_type: Optional[NomenType] = None,
        scheme: Optional[str] = None,
    ) -> Nomen:
        """Find or create the nomen binding ``owner`` to ``lexical``.

        Idempotent on (owner, lexical, lang, nomen_type); a nomen has
        one owner and exactly one string literal. Scheme tags are
        additive facts: attaching an existing nomen with a new scheme
        asserts another inScheme triple.
        """
        nomen_type = NomenType(nomen_type) if nomen_type is not None else DEFAULT_NOMEN_TYPE[owner.kind]
        string = Literal(lexical, lang)
        key = (owner.iri, lexical, string.lang_norm, nomen_type)
        nomen = self._nomens.get(key)
        if nomen is None:
            local = esc_join([owner.kind.value, owner.local_key, nomen_type.value, string.lang_norm or "", lexical])
            nomen = Nomen(
                iri=mint_iri(self.vocab.namespace, "nomen", local),
                owner=owner.iri,
                string=string,
                nomen_type=nomen_type,
                scheme=scheme,
            )
            self._nomens[key] = nomen
            self.graph.add(Triple(nomen.iri, RDF_TYPE, self.vocab.nomen_class(nomen_type)))
            self.graph.add(Triple(nomen.iri, self.vocab.has_string, string))
            self.graph.add(Triple(owner.iri, self.vocab.has_appellation, nomen.iri))
        if scheme:
            self.graph.add(Triple(nomen.iri, self.vocab.in_scheme, Literal(scheme)))
        return nomen

    def relate_nomens(self, a: Union[Nomen, Iri], b: Union[Nomen, Iri], rel: str) -> Triple:
        """Assert a typed name-to-name relation from a to b (for the
        directed types, b is the later/religious/variant form)."""
        a_iri = a.iri if isinstance(a, Nomen) else a
        b_iri = b.iri if isinstance(b, Nomen) else b
        if a_iri == b_iri:
            raise ModelError("a nomen cannot be related to itself")
        t = Triple(a_iri, self.vocab.nomen_relation(rel), b_iri)
        self.graph.add(t)
        return t

    # --- entity relations ---------------------------------------------------

    def relate_entities(self, a: Entity, b: Entity, rel: str) -> Triple:
        """Assert an entity-level relation. ``rel`` is one of the fixed
        relation names, or any other label, which is treated as a
        contributor role (e.g. "lithographer")."""
        if rel in ENTITY_RELATIONS:
            domain, range_ = ENTITY_RELATIONS[rel]
        else:
            domain, range_ = _ROLE_DOMAIN, AGENT_KINDS
        if domain is not None and a.kind not in domain:
            raise DomainRangeError(
                f"relation {rel!r} requires subject kind in {sorted(k.value for k in domain)}, got {a.kind.value!r}"
            )
        if range_ is not None and b.kind not in range_:
            raise DomainRangeError(
                f"relation {rel!r} requires object kind in {sorted(k.value for k in range_)}, got {b.kind.value!r}"
            )
        t = Triple(a.iri, self.vocab.entity_relation(rel), b.iri)
        self.graph.add(t)
        return t

    def relate_role_nomen(self, a: Entity, role: str, nomen: Union[Nomen, Iri]) -> Triple:
        """Name provenance: entity a used this specific name of another
        entity, in this role."""
        n_iri = nomen.iri if isinstance(nomen, Nomen) else nomen
        t = Triple(a.iri, self.vocab.role_nomen(role), n_iri)
        self.graph.add(t)
        return t

    # --- cataloging-rule helpers ---------------------------------------------

    def add_religious_name(
        self,
        person: Entity,
        secular: Nomen,
        religious_lexical: str,
        lang: Optional[str] = None,
        policy: str = RELIGIOUS_SINGLE_ENTITY,
    ) -> tuple[Entity, Nomen]:
        """Record a name assumed in a religious capacity.

        Cataloging rules disagree on whether this creates a new
        bibliographic identity, so both policies are supported: the
        default keeps one entity with two related nomens; two-entity
        mode creates a separate persona entity carrying the religious
        name, linked back to the individual.
        """
        if policy == RELIGIOUS_SINGLE_ENTITY:
            nomen = self.attach_nomen(person, religious_lexical, lang, NomenType.personal_name)
            self.relate_nomens(secular, nomen, "name_in_religion")
            return person, nomen
        if policy == RELIGIOUS_TWO_ENTITY:
            persona = self.create_entity(person.kind, f"{person.local_key}#religious")
            nomen = self.attach_nomen(persona, religious_lexical, lang, NomenType.personal_name)
            self.relate_entities(persona, person, "religious_identity_of")
            return persona, nomen
        raise ModelError(f"unknown religious-name policy {policy!r}")

    def freeze(self) -> Graph:
        return self.graph.freeze()


# --- structural validation ---------------------------------------------------


def _append(violations: list[Violation], code: str, node: Iri, message: str):
    violations.append(Violation(code, node, message))


def validate(graph: Graph, vocab: Optional[Vocabulary] = None) -> list[Violation]:
    """Scan a graph for structural violations of the nomen model.

    Violations are data, not errors; a graph built solely through
    CatalogBuilder with valid inputs always comes back clean. Codes:

    V2 nomen without a hasString literal
    V3 nomen with more than one hasString
    V4 hasAppellation target that is not a typed nomen
    V5 transcribed-field predicate pointing at a non-nomen
    V6 nomen never targeted by hasAppellation
    V7 expression with two preferred titles in one language
    V8 nomen relation of an unknown type
    """
    vocab = vocab or Vocabulary()
    violations: list[Violation] = []

    typed_nomens: dict[Iri, NomenType] = {}
    entity_kinds: dict[Iri, EntityKind] = {}
    for t in graph.triples_matching(predicate=RDF_TYPE):
        if isinstance(t.object, Iri):
            ntype = vocab.nomen_type_for_class(t.object)
            if ntype is not None:
                typed_nomens[t.subject] = ntype
            kind = vocab.entity_kind_for_class(t.object)
            if kind is not None:
                entity_kinds[t.subject] = kind

    appellation_targets: set[Iri] = set()
    for t in graph.triples_matching(predicate=vocab.has_appellation):
        if not isinstance(t.object, Iri):
            _append(violations, "V4", t.subject, "hasAppellation target is a literal, not a nomen node")
            continue
        appellation_targets.add(t.object)
        if t.object not in typed_nomens:
            _append(violations, "V4", t.object, "hasAppellation target lacks a nomen type")

    nomen_like = set(typed_nomens) | appellation_targets
    for node in nomen_like:
        strings = graph.triples_matching(subject=node, predicate=vocab.has_string)
        if not strings:
            _append(violations, "V2", node, "nomen has no hasString literal")
        elif len(strings) > 1:
            _append(violations, "V3", node, f"nomen has {len(strings)} hasString literals")

    for node in typed_nomens:
        if node not in appellation_targets:
            _append(violations, "V6", node, "nomen is not the appellation of any entity")

    for t in graph:
        if vocab.is_transcribed_field(t.predicate):
            if not isinstance(t.object, Iri) or t.object not in typed_nomens:
                _append(
                    violations,
                    "V5",
                    t.subject,
                    f"transcribed-field predicate <{t.predicate.value}> points at a non-nomen",
                )
        rel = vocab.nomen_relation_name(t.predicate)
        if rel is not None and rel not in vocab.nomen_relations:
            _append(violations, "V8", t.subject, f"unknown nomen relation type {rel!r}")

    variant_pred = vocab.nomen_relation("variant_form")
    for expr, kind in entity_kinds.items():
        if kind is not EntityKind.expression:
            continue
        preferred_langs: dict[Optional[str], int] = {}
        for t in graph.triples_matching(subject=expr, predicate=vocab.has_appellation):
            nomen = t.object
            if not isinstance(nomen, Iri) or typed_nomens.get(nomen) is not NomenType.title:
                continue
            if graph.triples_matching(subject=nomen, predicate=variant_pred):
                continue
            strings = graph.triples_matching(subject=nomen, predicate=vocab.has_string)
            for st in strings[:1]:
                if isinstance(st.object, Literal):
                    lang = st.object.lang_norm
                    preferred_langs[lang] = preferred_langs.get(lang, 0) + 1
        for lang, count in preferred_langs.items():
            if count > 1:
                _append(
                    violations,
                    "V7",
                    expr,
                    f"expression has {count} preferred titles for language {lang or '(none)'}",
                )

    violations.sort(key=lambda v: (v.code, v.node.value, v.message))
    return violations
