"""Typed construction layer: minting, builder invariants, validation."""

from __future__ import annotations

import pytest

from nomengraph import (
    RDF_TYPE,
    CatalogBuilder,
    DomainRangeError,
    EntityKind,
    Graph,
    Iri,
    Literal,
    ModelError,
    NomenType,
    ProvisionalKeyError,
    Triple,
    UnknownRelationError,
    Vocabulary,
    mint_iri,
    validate,
)
from nomengraph.model import RELIGIOUS_TWO_ENTITY, esc_join, esc_split

NS = "http://ex.org/"


class TestMinting:
    def test_local_key_is_percent_encoded(self):
        got = mint_iri(NS, "place", "rec-m1|place_of_publication|0")
        assert got == Iri("http://ex.org/place/rec-m1%7Cplace_of_publication%7C0")

    def test_minting_is_injective_over_kind_and_key(self):
        a = mint_iri(NS, "person", "x/y")
        b = mint_iri(NS, "person", "x%2Fy")
        assert a != b  # encoding is applied once, never double-interpreted

    def test_empty_key_rejected(self):
        with pytest.raises(ModelError):
            mint_iri(NS, "person", "")

    def test_escaped_join_round_trips(self):
        cases = [
            ["a", "b"],
            ["a|b", "c\\d", ""],
            ["||", "\\|", "plain"],
        ]
        for parts in cases:
            assert esc_split(esc_join(parts)) == parts


class TestBuilder:
    def test_create_entity_types_the_node(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.person, "rec-1")
        assert e.iri == Iri(NS + "person/rec-1")
        assert Triple(e.iri, RDF_TYPE, Iri(NS + "class/person")) in b.graph

    def test_duplicate_provisional_key_rejected_per_kind(self):
        b = CatalogBuilder(NS)
        b.create_entity(EntityKind.person, "rec-1")
        with pytest.raises(ProvisionalKeyError):
            b.create_entity(EntityKind.person, "rec-1")
        # same key under another kind is a different identity space
        b.create_entity(EntityKind.place, "rec-1")

    def test_attach_nomen_writes_three_triples(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.person, "rec-1")
        n = b.attach_nomen(e, "John Smith")
        v = b.vocab
        assert n.nomen_type is NomenType.personal_name  # kind default
        assert Triple(n.iri, RDF_TYPE, v.nomen_class(NomenType.personal_name)) in b.graph
        assert Triple(n.iri, v.has_string, Literal("John Smith")) in b.graph
        assert Triple(e.iri, v.has_appellation, n.iri) in b.graph

    def test_attach_nomen_finds_existing(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.person, "rec-1")
        n1 = b.attach_nomen(e, "John Smith", "en")
        n2 = b.attach_nomen(e, "John Smith", "EN")  # lang compare is case-insensitive
        assert n1.iri == n2.iri
        n3 = b.attach_nomen(e, "John Smith", "de")
        assert n3.iri != n1.iri
        n4 = b.attach_nomen(e, "John Smith", "en", NomenType.phrase)
        assert n4.iri != n1.iri  # type is part of nomen identity

    def test_scheme_is_additive_not_identity(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.person, "rec-1")
        n1 = b.attach_nomen(e, "JS", scheme="viaf")
        n2 = b.attach_nomen(e, "JS", scheme="lcnaf")
        assert n1.iri == n2.iri
        schemes = b.graph.triples_matching(subject=n1.iri, predicate=b.vocab.in_scheme)
        assert {t.object for t in schemes} == {Literal("viaf"), Literal("lcnaf")}

    def test_same_string_different_owner_is_different_nomen(self):
        b = CatalogBuilder(NS)
        e1 = b.create_entity(EntityKind.place, "p1")
        e2 = b.create_entity(EntityKind.place, "p2")
        assert b.attach_nomen(e1, "London").iri != b.attach_nomen(e2, "London").iri

    def test_relate_nomens_requires_known_type(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.person, "rec-1")
        a = b.attach_nomen(e, "Mary Ann Evans")
        p = b.attach_nomen(e, "George Eliot")
        t = b.relate_nomens(a, p, "pseudonym")
        assert t.predicate == Iri(NS + "prop/nomenRelation/pseudonym")
        with pytest.raises(UnknownRelationError):
            b.relate_nomens(a, p, "no_such_relation")
        with pytest.raises(ModelError):
            b.relate_nomens(a, a, "pseudonym")

    def test_extra_nomen_relations_are_configurable(self):
        vocab = Vocabulary(NS, extra_nomen_relations=["stage_name"])
        b = CatalogBuilder(NS, vocab)
        e = b.create_entity(EntityKind.person, "rec-1")
        a = b.attach_nomen(e, "A")
        c = b.attach_nomen(e, "C")
        b.relate_nomens(a, c, "stage_name")

    def test_relate_entities_enforces_domain_and_range(self):
        b = CatalogBuilder(NS)
        person = b.create_entity(EntityKind.person, "p")
        work = b.create_entity(EntityKind.work, "w")
        place = b.create_entity(EntityKind.place, "pl")
        manifestation = b.create_entity(EntityKind.manifestation, "m")
        b.relate_entities(work, person, "creator")
        b.relate_entities(person, place, "born_in")
        b.relate_entities(manifestation, work, "embodies")
        with pytest.raises(DomainRangeError):
            b.relate_entities(place, person, "creator")  # place cannot create
        with pytest.raises(DomainRangeError):
            b.relate_entities(person, work, "born_in")  # range must be place
        with pytest.raises(DomainRangeError):
            b.relate_entities(work, manifestation, "embodies")

    def test_free_role_labels_target_agents(self):
        b = CatalogBuilder(NS)
        m = b.create_entity(EntityKind.manifestation, "m")
        p = b.create_entity(EntityKind.person, "p")
        pl = b.create_entity(EntityKind.place, "pl")
        t = b.relate_entities(m, p, "lithographer")
        assert t.predicate == Iri(NS + "prop/role/lithographer")
        with pytest.raises(DomainRangeError):
            b.relate_entities(m, pl, "lithographer")  # roles point at agents

    def test_freeze_stops_building(self):
        b = CatalogBuilder(NS)
        b.create_entity(EntityKind.person, "p")
        g = b.freeze()
        assert g.frozen
        with pytest.raises(Exception):
            b.create_entity(EntityKind.person, "q")


class TestReligiousNames:
    def test_single_entity_policy(self):
        b = CatalogBuilder(NS)
        p = b.create_entity(EntityKind.person, "merton")
        secular = b.attach_nomen(p, "Thomas Merton")
        owner, religious = b.add_religious_name(p, secular, "Father Louis")
        assert owner is p
        rel = Iri(NS + "prop/nomenRelation/name_in_religion")
        assert Triple(secular.iri, rel, religious.iri) in b.graph
        assert validate(b.graph, b.vocab) == []

    def test_two_entity_policy(self):
        b = CatalogBuilder(NS)
        p = b.create_entity(EntityKind.person, "merton")
        secular = b.attach_nomen(p, "Thomas Merton")
        persona, religious = b.add_religious_name(
            p, secular, "Father Louis", policy=RELIGIOUS_TWO_ENTITY
        )
        assert persona.iri != p.iri
        assert Triple(persona.iri, Iri(NS + "prop/role/religious_identity_of"), p.iri) in b.graph
        assert religious.owner == persona.iri
        assert validate(b.graph, b.vocab) == []

    def test_unknown_policy_rejected(self):
        b = CatalogBuilder(NS)
        p = b.create_entity(EntityKind.person, "x")
        n = b.attach_nomen(p, "X")
        with pytest.raises(ModelError):
            b.add_religious_name(p, n, "Y", policy="whatever")


def _clean_builder() -> CatalogBuilder:
    b = CatalogBuilder(NS)
    e = b.create_entity(EntityKind.person, "p")
    b.attach_nomen(e, "Someone")
    return b


class TestValidate:
    def test_builder_output_is_clean(self):
        b = _clean_builder()
        assert validate(b.graph, b.vocab) == []

    def test_v2_nomen_without_string(self):
        b = _clean_builder()
        v = b.vocab
        orphan = Iri(NS + "nomen/empty")
        b.graph.add(Triple(orphan, RDF_TYPE, v.nomen_class(NomenType.personal_name)))
        b.graph.add(Triple(Iri(NS + "person/p"), v.has_appellation, orphan))
        codes = {x.code for x in validate(b.graph, v)}
        assert codes == {"V2"}

    def test_v3_nomen_with_two_strings(self):
        b = _clean_builder()
        v = b.vocab
        nomen = b.graph.triples_matching(predicate=v.has_string)[0].subject
        b.graph.add(Triple(nomen, v.has_string, Literal("Another")))
        assert {x.code for x in validate(b.graph, v)} == {"V3"}

    def test_v4_untyped_appellation_target(self):
        b = _clean_builder()
        v = b.vocab
        bare = Iri(NS + "mystery/x")
        b.graph.add(Triple(Iri(NS + "person/p"), v.has_appellation, bare))
        b.graph.add(Triple(bare, v.has_string, Literal("x")))
        violations = validate(b.graph, v)
        assert [x.code for x in violations] == ["V4"]
        assert violations[0].node == bare

    def test_v5_transcribed_predicate_at_non_nomen(self):
        b = _clean_builder()
        v = b.vocab
        m = b.create_entity(EntityKind.manifestation, "m")
        b.graph.add(Triple(m.iri, v.title_nomen, Literal("raw title")))
        b.graph.add(Triple(m.iri, v.place_of_publication_nomen, Iri(NS + "person/p")))
        codes = [x.code for x in validate(b.graph, v)]
        assert codes == ["V5", "V5"]

    def test_v6_orphan_nomen(self):
        b = _clean_builder()
        v = b.vocab
        loose = Iri(NS + "nomen/loose")
        b.graph.add(Triple(loose, RDF_TYPE, v.nomen_class(NomenType.title)))
        b.graph.add(Triple(loose, v.has_string, Literal("Loose")))
        assert {x.code for x in validate(b.graph, v)} == {"V6"}

    def test_v7_two_preferred_titles_same_language(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.expression, "e")
        b.attach_nomen(e, "Title One", "en", NomenType.title)
        b.attach_nomen(e, "Title Two", "en", NomenType.title)
        violations = validate(b.graph, b.vocab)
        assert [x.code for x in violations] == ["V7"]
        assert violations[0].node == e.iri

    def test_v7_suppressed_when_variant_is_marked(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.expression, "e")
        first = b.attach_nomen(e, "Title One", "en", NomenType.title)
        second = b.attach_nomen(e, "Title Two", "en", NomenType.title)
        b.relate_nomens(second, first, "variant_form")
        assert validate(b.graph, b.vocab) == []

    def test_v7_not_raised_across_languages(self):
        b = CatalogBuilder(NS)
        e = b.create_entity(EntityKind.expression, "e")
        b.attach_nomen(e, "Title", "en", NomenType.title)
        b.attach_nomen(e, "Titel", "de", NomenType.title)
        assert validate(b.graph, b.vocab) == []

    def test_v8_unknown_nomen_relation_in_graph(self):
        b = _clean_builder()
        v = b.vocab
        nomen = b.graph.triples_matching(predicate=v.has_string)[0].subject
        e2 = b.create_entity(EntityKind.person, "q")
        other = b.attach_nomen(e2, "Other")
        b.graph.add(Triple(nomen, Iri(NS + "prop/nomenRelation/bogus"), other.iri))
        assert {x.code for x in validate(b.graph, v)} == {"V8"}

    def test_violations_are_sorted_and_stable(self):
        b = _clean_builder()
        v = b.vocab
        m = b.create_entity(EntityKind.manifestation, "m")
        b.graph.add(Triple(m.iri, v.title_nomen, Literal("raw")))
        loose = Iri(NS + "nomen/loose")
        b.graph.add(Triple(loose, RDF_TYPE, v.nomen_class(NomenType.title)))
        b.graph.add(Triple(loose, v.has_string, Literal("Loose")))
        first = validate(b.graph, v)
        assert first == validate(b.graph, v)
        assert [x.code for x in first] == sorted(x.code for x in first)

    def test_validate_accepts_imported_graph(self, merged):
        # a graph loaded straight from bytes, no builder involved
        from nomengraph import export_ntriples, import_ntriples

        g = import_ntriples(export_ntriples(merged.graph))
        assert validate(g, Vocabulary("http://example.org/catalog/")) == []
