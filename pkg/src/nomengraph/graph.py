"""In-memory triple store with subject/predicate/object indexes.

Terms are IRIs and literals only; blank nodes are deliberately
unsupported (every name-bearing node in this model gets an identifier,
and determinism is simpler without them). A literal can never be the
subject of a triple, so literals always terminate a chain.

Graphs follow a build-then-freeze contract: one writer populates the
graph, calls :meth:`Graph.freeze`, and from then on any number of
readers may query it concurrently.
"""

from __future__ import annotations

import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


class CatalogError(Exception):
    """Base class for all errors raised by this package."""


class TermError(CatalogError):
    """An IRI, literal, or triple violates its structural constraints."""


class FrozenGraphError(CatalogError):
    """Attempted to mutate a graph after it was frozen."""


_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:\S+$")
_LANG_TAG = re.compile(r"^[A-Za-z0-9]{1,8}(-[A-Za-z0-9]{1,8})*$")


@dataclass(frozen=True)
class Iri:
    """An absolute IRI. Equality is exact string equality."""

    value: str

    def __post_init__(self):
        if not _ABSOLUTE_IRI.match(self.value):
            raise TermError(f"not an absolute IRI: {self.value!r}")

    def __repr__(self):
        return f"Iri({self.value!r})"


@dataclass(frozen=True, eq=False)
class Literal:
    """A terminal lexical value with an optional language tag.

    The lexical form is kept byte-for-byte as given (no Unicode
    normalization, preserving transcription fidelity). The language
    tag is stored as given but compared case-insensitively, per
    BCP 47.
    """

    lexical: str
    lang: Optional[str] = None

    def __post_init__(self):
        if not self.lexical:
            raise TermError("literal lexical form must be non-empty")
        if self.lang is not None and not _LANG_TAG.match(self.lang):
            raise TermError(f"malformed language tag: {self.lang!r}")

    @property
    def lang_norm(self) -> Optional[str]:
        """Language tag in comparison (lowercase) form."""
        return self.lang.lower() if self.lang is not None else None

    def __eq__(self, other):
        if not isinstance(other, Literal):
            return NotImplemented
        return self.lexical == other.lexical and self.lang_norm == other.lang_norm

    def __hash__(self):
        return hash((self.lexical, self.lang_norm))

    def __repr__(self):
        if self.lang is not None:
            return f"Literal({self.lexical!r}, {self.lang!r})"
        return f"Literal({self.lexical!r})"


Term = Union[Iri, Literal]


@dataclass(frozen=True)
class Triple:
    """One statement. The subject and predicate are always IRIs."""

    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, Iri):
            raise TermError(f"triple subject must be an Iri, got {type(self.subject).__name__}")
        if not isinstance(self.predicate, Iri):
            raise TermError(f"triple predicate must be an Iri, got {type(self.predicate).__name__}")
        if not isinstance(self.object, (Iri, Literal)):
            raise TermError(f"triple object must be an Iri or Literal, got {type(self.object).__name__}")


def term_sort_key(term: Term) -> tuple:
    """Total order over terms: IRIs first (by codepoint), then literals
    by lexical form, then by normalized language tag."""
    if isinstance(term, Iri):
        return (0, term.value, "")
    return (1, term.lexical, term.lang_norm or "")


def triple_sort_key(t: Triple) -> tuple:
    """The canonical total order used everywhere triples are listed."""
    return (t.subject.value, t.predicate.value, term_sort_key(t.object))


@dataclass(frozen=True)
class Subgraph:
    """A bounded-depth neighborhood around a root node.

    Every member triple lies on a path of at most ``depth`` edges from
    ``root``, edges traversed in either direction. ``root_present`` is
    False when the root occurs nowhere in the source graph.
    """

    root: Iri
    depth: int
    triples: frozenset = field(default_factory=frozenset)
    root_present: bool = True

    def sorted_triples(self) -> list:
        return sorted(self.triples, key=triple_sort_key)


class Graph:
    """A set of triples with subject, predicate, and object indexes."""

    def __init__(self):
        self._triples: set[Triple] = set()
        self._by_subject: dict[Iri, set[Triple]] = defaultdict(set)
        self._by_predicate: dict[Iri, set[Triple]] = defaultdict(set)
        self._by_object: dict[Term, set[Triple]] = defaultdict(set)
        self._frozen = False

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.sorted_triples())

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "Graph":
        """End the build phase; the graph becomes immutable."""
        self._frozen = True
        return self

    def add(self, t: Triple) -> bool:
        """Insert a triple. Returns True if it was newly inserted.

        Idempotent: re-adding an existing triple is a no-op returning
        False. Term constraints (no literal subjects) are enforced at
        :class:`Triple` construction time.
        """
        if self._frozen:
            raise FrozenGraphError("cannot add to a frozen graph")
        if not isinstance(t, Triple):
            raise TermError(f"expected a Triple, got {type(t).__name__}")
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_subject[t.subject].add(t)
        self._by_predicate[t.predicate].add(t)
        self._by_object[t.object].add(t)
        return True

    def add_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.add(t))

    def sorted_triples(self) -> list[Triple]:
        return sorted(self._triples, key=triple_sort_key)

    def triples_matching(
        self,
        subject: Optional[Iri] = None,
        predicate: Optional[Iri] = None,
        object: Optional[Term] = None,
    ) -> list[Triple]:
        """All triples matching the bound positions, in canonical order.

        Unbound (None) positions match anything.
        """
        if subject is not None:
            candidates = self._by_subject.get(subject, ())
        elif object is not None:
            candidates = self._by_object.get(object, ())
        elif predicate is not None:
            candidates = self._by_predicate.get(predicate, ())
        else:
            candidates = self._triples
        out = [
            t
            for t in candidates
            if (subject is None or t.subject == subject)
            and (predicate is None or t.predicate == predicate)
            and (object is None or t.object == object)
        ]
        out.sort(key=triple_sort_key)
        return out

    def has_node(self, node: Iri) -> bool:
        """True if the IRI occurs as a subject or object of any triple."""
        return node in self._by_subject or node in self._by_object

    def subjects(self) -> list[Iri]:
        return sorted(self._by_subject, key=lambda i: i.value)

    def neighborhood(self, root: Iri, depth: int) -> Subgraph:
        """Breadth-first closure around ``root``, truncated at ``depth``.

        Edges are traversed in both directions because the model's
        relations read both ways (an appellation edge is equally "is
        appellation of" seen from the nomen). Literal objects are
        leaves: the triples reaching them are included, but a literal
        is never expanded, even when other triples share it.
        """
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        if not self.has_node(root):
            return Subgraph(root=root, depth=depth, triples=frozenset(), root_present=False)
        collected: set[Triple] = set()
        visited: set[Iri] = {root}
        frontier: deque[Iri] = deque([root])
        for _ in range(depth):
            if not frontier:
                break
            next_frontier: deque[Iri] = deque()
            while frontier:
                node = frontier.popleft()
                incident = self._by_subject.get(node, set()) | self._by_object.get(node, set())
                for t in incident:
                    collected.add(t)
                    for endpoint in (t.subject, t.object):
                        if isinstance(endpoint, Iri) and endpoint not in visited:
                            visited.add(endpoint)
                            next_frontier.append(endpoint)
            frontier = next_frontier
        return Subgraph(root=root, depth=depth, triples=frozenset(collected), root_present=True)
