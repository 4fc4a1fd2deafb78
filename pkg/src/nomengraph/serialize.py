"""Canonical, deterministic graph export and import.

N-Triples is the canonical interchange and diff format: one triple per
line in a fixed total order (subject, then predicate, then object with
IRIs before literals), so equal graphs always serialize to identical
bytes regardless of insertion order. Turtle is a courtesy view with
the same ordering, grouped by subject.

Language tags are emitted in their comparison (lowercase) form, which
keeps exports canonical when equal graphs stored tags with different
case. Lexical forms are escaped losslessly, arbitrary Unicode included.

Blank nodes are rejected on import; see the graph module.
"""

from __future__ import annotations

import re
from typing import Optional

from .graph import CatalogError, Graph, Iri, Literal, Term, Triple, triple_sort_key

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"


class SerializeError(CatalogError):
    """Import failure; carries the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BlankNodeError(SerializeError):
    """Input contains a blank node, which this model does not support."""


# --- escaping -------------------------------------------------------------

_ECHAR = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPE = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f", "'": "'"}


def escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ECHAR:
            out.append(_ECHAR[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def escape_iri(value: str) -> str:
    out = []
    for ch in value:
        cp = ord(ch)
        if cp <= 0x20 or ch in '<>"{}|^`\\' or cp == 0x7F:
            out.append(f"\\u{cp:04X}")
        else:
            out.append(ch)
    return "".join(out)


def _term_nt(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{escape_iri(term.value)}>"
    lex = f'"{escape_literal(term.lexical)}"'
    if term.lang is not None:
        return f"{lex}@{term.lang.lower()}"
    return lex


# --- export ---------------------------------------------------------------


def export_ntriples(graph: Graph) -> bytes:
    """One triple per line in canonical order; UTF-8; byte-identical
    across runs for equal graphs."""
    lines = []
    for t in graph.sorted_triples():
        lines.append(f"{_term_nt(t.subject)} {_term_nt(t.predicate)} {_term_nt(t.object)} .\n")
    return "".join(lines).encode("utf-8")


# Conservative PN_LOCAL shape: alphanumerics, underscore, hyphen, inner
# dots, and percent-escapes. Anything else falls back to a full IRI ref.
_PN_LOCAL = re.compile(r"^(?:[A-Za-z0-9_]|%[0-9A-Fa-f]{2})(?:[A-Za-z0-9_.-]|%[0-9A-Fa-f]{2})*$")


def _term_turtle(term: Term, prefixes: list[tuple[str, str]]) -> str:
    if isinstance(term, Iri):
        for name, ns in prefixes:
            if term.value.startswith(ns):
                local = term.value[len(ns):]
                if local and not local.endswith(".") and _PN_LOCAL.match(local):
                    return f"{name}:{local}"
        return f"<{escape_iri(term.value)}>"
    return _term_nt(term)


def export_turtle(graph: Graph, namespace: Optional[str] = None, prefix: str = "cat") -> bytes:
    """Prefixed, subject-grouped Turtle in canonical order."""
    prefixes = []
    if namespace:
        prefixes.append((prefix, namespace))
    prefixes.append(("rdf", RDF_NS))
    out = [f"@prefix {name}: <{escape_iri(ns)}> .\n" for name, ns in prefixes]
    current: Optional[Iri] = None
    current_pred: Optional[Iri] = None
    for t in graph.sorted_triples():
        s = _term_turtle(t.subject, prefixes)
        p = _term_turtle(t.predicate, prefixes)
        o = _term_turtle(t.object, prefixes)
        if t.subject != current:
            if current is not None:
                out.append(" .\n")
            out.append(f"\n{s} {p} {o}")
            current, current_pred = t.subject, t.predicate
        elif t.predicate != current_pred:
            out.append(f" ;\n    {p} {o}")
            current_pred = t.predicate
        else:
            out.append(f", {o}")
    if current is not None:
        out.append(" .\n")
    return "".join(out).encode("utf-8")


# --- import ---------------------------------------------------------------


def _decode(data) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


class _Scanner:
    """Single-line cursor shared by the N-Triples and Turtle readers."""

    def __init__(self, text: str, line_no: int):
        self.text = text
        self.pos = 0
        self.line = line_no

    def error(self, message: str):
        raise SerializeError(message, line=self.line)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}, found {self.text[self.pos:self.pos + 10]!r}")
        self.pos += 1

    def _unescape_from(self, end_chars: str, allow_echar: bool) -> str:
        out = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated term (a raw newline inside a literal is not valid)")
            ch = self.text[self.pos]
            if ch in end_chars:
                return "".join(out)
            self.pos += 1
            if ch != "\\":
                out.append(ch)
                continue
            if self.pos >= len(self.text):
                self.error("dangling escape")
            esc = self.text[self.pos]
            self.pos += 1
            if esc == "u" or esc == "U":
                width = 4 if esc == "u" else 8
                hexs = self.text[self.pos:self.pos + width]
                if len(hexs) < width or not all(c in "0123456789abcdefABCDEF" for c in hexs):
                    self.error(f"bad \\{esc} escape")
                self.pos += width
                out.append(chr(int(hexs, 16)))
            elif allow_echar and esc in _UNESCAPE:
                out.append(_UNESCAPE[esc])
            else:
                self.error(f"unsupported escape \\{esc}")

    def read_iri(self) -> Iri:
        self.expect("<")
        value = self._unescape_from(">", allow_echar=False)
        self.expect(">")
        try:
            return Iri(value)
        except CatalogError as exc:
            self.error(str(exc))

    def read_literal(self) -> Literal:
        self.expect('"')
        lexical = self._unescape_from('"', allow_echar=True)
        self.expect('"')
        lang = None
        if self.pos < len(self.text) and self.text[self.pos] == "@":
            self.pos += 1
            m = re.match(r"[A-Za-z0-9-]+", self.text[self.pos:])
            if not m:
                self.error("empty language tag")
            lang = m.group(0)
            self.pos += len(lang)
        elif self.text[self.pos:self.pos + 2] == "^^":
            self.pos += 2
            dt = self.read_iri()
            if dt.value != XSD_STRING:
                self.error(f"unsupported datatype <{dt.value}> (only plain and language-tagged literals)")
        try:
            return Literal(lexical, lang)
        except CatalogError as exc:
            self.error(str(exc))

    def check_blank_node(self):
        if self.text[self.pos:self.pos + 2] == "_:":
            raise BlankNodeError("blank nodes are not supported by this model", line=self.line)


def import_ntriples(data) -> Graph:
    """Parse N-Triples back into a graph. Blank nodes and non-string
    datatypes are rejected with explicit errors carrying line numbers."""
    graph = Graph()
    for line_no, raw in enumerate(_decode(data).split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sc = _Scanner(line, line_no)
        sc.check_blank_node()
        if sc.peek() != "<":
            sc.error("expected IRI subject")
        subject = sc.read_iri()
        sc.skip_ws()
        sc.check_blank_node()
        predicate = sc.read_iri()
        sc.skip_ws()
        sc.check_blank_node()
        obj: Term = sc.read_literal() if sc.peek() == '"' else sc.read_iri()
        sc.expect(".")
        if not sc.at_end():
            sc.error("trailing content after '.'")
        graph.add(Triple(subject, predicate, obj))
    return graph


def import_turtle(data) -> Graph:
    """Parse the Turtle subset produced by :func:`export_turtle`:
    @prefix directives, full or prefixed names, plain and
    language-tagged literals, and ';'/',' groupings."""
    graph = Graph()
    prefixes: dict[str, str] = {}
    # Statements may span lines; rejoin and walk a logical stream while
    # tracking line numbers for diagnostics.
    lines = _decode(data).split("\n")
    subject: Optional[Iri] = None
    predicate: Optional[Iri] = None

    def read_prefixed(sc: _Scanner) -> Iri:
        m = re.match(r"([A-Za-z][\w-]*)?:((?:[A-Za-z0-9_.%-])*)", sc.text[sc.pos:])
        if not m:
            sc.error("expected an IRI or prefixed name")
        name = m.group(1) or ""
        if name not in prefixes:
            sc.error(f"unknown prefix {name!r}")
        sc.pos += m.end()
        return Iri(prefixes[name] + m.group(2))

    def read_node(sc: _Scanner) -> Term:
        sc.check_blank_node()
        ch = sc.peek()
        if ch == "<":
            return sc.read_iri()
        if ch == '"':
            return sc.read_literal()
        return read_prefixed(sc)

    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        sc = _Scanner(line, line_no)
        if line.startswith("@prefix"):
            sc.pos += len("@prefix")
            sc.skip_ws()
            m = re.match(r"([A-Za-z][\w-]*)?:", sc.text[sc.pos:])
            if not m:
                sc.error("malformed @prefix")
            name = m.group(1) or ""
            sc.pos += m.end()
            ns = sc.read_iri()
            sc.expect(".")
            prefixes[name] = ns.value
            continue
        while not sc.at_end():
            if subject is None:
                node = read_node(sc)
                if not isinstance(node, Iri):
                    sc.error("literal in subject position")
                subject = node
                predicate = None
                continue
            if predicate is None:
                pred = read_node(sc)
                if not isinstance(pred, Iri):
                    sc.error("literal in predicate position")
                predicate = pred
                continue
            obj = read_node(sc)
            graph.add(Triple(subject, predicate, obj))
            punct = sc.peek()
            if punct == ".":
                sc.pos += 1
                subject = predicate = None
            elif punct == ";":
                sc.pos += 1
                predicate = None
            elif punct == ",":
                sc.pos += 1
            elif punct == "":
                break
            else:
                sc.error(f"unexpected {punct!r}")
    if subject is not None:
        raise SerializeError("unterminated statement at end of input")
    return graph
