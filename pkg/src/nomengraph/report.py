"""Offline reporting: a delimited entity inventory plus a node-link
figure of the graph (or of one entity's neighborhood).

The TSV is the deterministic artifact: same graph, same bytes. The
figure is a best-effort visual aid; its layout is seeded from the root
IRI so re-runs of the same input land nodes in the same places.
"""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .graph import Graph, Iri, Literal
from .model import RDF_TYPE, EntityKind, Vocabulary
from .resolve import NoLabelError, resolve_label

# One fill color per node category; entity kinds first, then plumbing.
_KIND_COLORS = {
    "work": "#4c72b0",
    "expression": "#55a868",
    "manifestation": "#c44e52",
    "item": "#8172b2",
    "person": "#ccb974",
    "family": "#64b5cd",
    "corporate_body": "#937860",
    "place": "#dd8452",
    "nomen": "#b3b3b3",
    "literal": "#f2e8c9",
    "other": "#dddddd",
}


def _entity_nodes(graph: Graph, vocab: Vocabulary) -> dict[Iri, EntityKind]:
    out: dict[Iri, EntityKind] = {}
    for t in graph.triples_matching(predicate=RDF_TYPE):
        if isinstance(t.object, Iri):
            kind = vocab.entity_kind_for_class(t.object)
            if kind is not None:
                out[t.subject] = kind
    return out


def _nomen_nodes(graph: Graph, vocab: Vocabulary) -> set[Iri]:
    return {
        t.subject
        for t in graph.triples_matching(predicate=RDF_TYPE)
        if isinstance(t.object, Iri) and vocab.nomen_type_for_class(t.object) is not None
    }


def write_entities_tsv(
    graph: Graph,
    path: Path,
    lang: Optional[str] = None,
    default_lang: str = "en",
    vocab: Optional[Vocabulary] = None,
):
    """One row per entity: iri, kind, resolved label and how it was
    resolved, nomen count, degree. Rows sorted by IRI."""
    vocab = vocab or Vocabulary()
    entities = _entity_nodes(graph, vocab)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["iri", "kind", "label", "label_lang", "rule", "nomen_count", "degree"])
        for node in sorted(entities, key=lambda n: n.value):
            try:
                res = resolve_label(graph, node, lang, default_lang, vocab)
                label, label_lang, rule = res.label, res.lang or "", res.rule
            except NoLabelError:
                label = label_lang = rule = ""
            nomen_count = len(graph.triples_matching(subject=node, predicate=vocab.has_appellation))
            degree = len(graph.triples_matching(subject=node)) + len(graph.triples_matching(object=node))
            writer.writerow(
                [node.value, entities[node].value, label, label_lang, rule, nomen_count, degree]
            )


def _short(text: str, limit: int = 28) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _display(term, namespace: str) -> str:
    if isinstance(term, Literal):
        tag = f"@{term.lang_norm}" if term.lang_norm else ""
        return _short(f'"{term.lexical}"{tag}')
    value = term.value
    if value.startswith(namespace):
        value = value[len(namespace):]
    return _short(value)


def _edge_label(predicate: Iri, vocab: Vocabulary) -> str:
    value = predicate.value
    if value == RDF_TYPE.value:
        return "a"
    prefix = f"{vocab.namespace}prop/"
    if value.startswith(prefix):
        return _short(value[len(prefix):], 22)
    return _short(value, 22)


def render_figure(
    graph: Graph,
    path: Path,
    root: Optional[Iri] = None,
    depth: int = 2,
    vocab: Optional[Vocabulary] = None,
):
    """Draw a node-link figure of the graph, or of the neighborhood of
    ``root``. Layout is seeded from the root IRI (or a fixed seed for
    whole-catalog figures)."""
    vocab = vocab or Vocabulary()
    triples = graph.neighborhood(root, depth).sorted_triples() if root is not None else graph.sorted_triples()

    entities = _entity_nodes(graph, vocab)
    nomens = _nomen_nodes(graph, vocab)

    def node_key(term) -> str:
        # literal keys start with a quote, which no IRI can
        return _nt_key(term)

    def category(term) -> str:
        if isinstance(term, Literal):
            return "literal"
        if term in entities:
            return entities[term].value
        if term in nomens:
            return "nomen"
        return "other"

    g = nx.DiGraph()
    for t in triples:
        for term in (t.subject, t.object):
            key = node_key(term)
            if key not in g:
                g.add_node(key, label=_display(term, vocab.namespace), category=category(term))
        g.add_edge(node_key(t.subject), node_key(t.object), label=_edge_label(t.predicate, vocab))

    seed_source = root.value if root is not None else "catalog"
    seed = int.from_bytes(hashlib.sha1(seed_source.encode("utf-8")).digest()[:4], "big")

    fig, ax = plt.subplots(figsize=(12, 9))
    if len(g) > 0:
        pos = nx.spring_layout(g, seed=seed)
        colors = [_KIND_COLORS.get(g.nodes[n]["category"], _KIND_COLORS["other"]) for n in g.nodes]
        nx.draw_networkx_nodes(g, pos, ax=ax, node_color=colors, node_size=900, edgecolors="#444444")
        nx.draw_networkx_edges(g, pos, ax=ax, edge_color="#777777", arrowsize=12)
        nx.draw_networkx_labels(
            g, pos, ax=ax, labels={n: g.nodes[n]["label"] for n in g.nodes}, font_size=7
        )
        nx.draw_networkx_edge_labels(
            g, pos, ax=ax, edge_labels=nx.get_edge_attributes(g, "label"), font_size=6
        )
    title = f"neighborhood of {root.value}" if root is not None else "catalog graph"
    ax.set_title(_short(title, 80))
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _nt_key(term) -> str:
    if isinstance(term, Literal):
        tag = f"@{term.lang_norm}" if term.lang_norm else ""
        return f'"{term.lexical}"{tag}'
    return term.value


def write_report(
    graph: Graph,
    out_dir: Path,
    root: Optional[Iri] = None,
    depth: int = 2,
    lang: Optional[str] = None,
    default_lang: str = "en",
    vocab: Optional[Vocabulary] = None,
) -> list[Path]:
    """Write entities.tsv and graph.png into ``out_dir`` and return
    the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tsv_path = out_dir / "entities.tsv"
    png_path = out_dir / "graph.png"
    write_entities_tsv(graph, tsv_path, lang=lang, default_lang=default_lang, vocab=vocab)
    render_figure(graph, png_path, root=root, depth=depth, vocab=vocab)
    return [tsv_path, png_path]
