from __future__ import annotations

from pathlib import Path

import pytest

from nomengraph import Iri, parse_directives, parse_records, promote

DATA = Path(__file__).parent / "data"

NS = "http://example.org/catalog/"

# F1 fixture entities (merged form).
P1 = Iri(NS + "person/rec-p1")
Y1 = Iri(NS + "corporate_body/rec-y1")
M1 = Iri(NS + "manifestation/rec-m1")
W1 = Iri(NS + "work/rec-w1")
PL = Iri(NS + "place/rec-m1%7Cplace_of_publication%7C0")

N_JS = Iri(NS + "nomen/person%7Crec-p1%7Cpersonal_name%7C%7CJohn%20Smith")
N_PY = Iri(NS + "nomen/corporate_body%7Crec-y1%7Ccorporate_name%7C%7CPublisher%20Y")
N_T = Iri(NS + "nomen/manifestation%7Crec-m1%7Ctitle%7C%7CHistory%20of%20London")
N_L = Iri(NS + "nomen/place%7Crec-m1%5C%7Cplace_of_publication%5C%7C0%7Cplace_name%7C%7CLondon")

# The four provisional London occurrences before reconciliation.
PL_BIRTH = Iri(NS + "place/rec-p1%7Cplace_of_birth%7C0")
PL_LOCATION = Iri(NS + "place/rec-y1%7Clocation%7C0")
PL_PUBLICATION = PL
PL_SUBJECT = Iri(NS + "place/rec-w1%7Csubject_place%7C0")


@pytest.fixture(scope="session")
def f1_text() -> str:
    return (DATA / "f1.jsonl").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def f1_records(f1_text):
    return parse_records(f1_text)


@pytest.fixture(scope="session")
def merge_plan():
    return parse_directives((DATA / "merge_all_londons.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def merged(f1_records, merge_plan):
    return promote(f1_records, merge_plan)


@pytest.fixture(scope="session")
def unmerged(f1_records):
    return promote(f1_records)


@pytest.fixture(scope="session")
def titles_text() -> str:
    return (DATA / "titles.jsonl").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def titles_graph(titles_text):
    return promote(parse_records(titles_text)).graph
