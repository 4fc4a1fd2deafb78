"""nomengraph: a bibliographic graph engine where names are nodes.

Flat catalog records are promoted into an RDF-style triple graph in
which every name an entity carries is a first-class nomen node bound
to exactly one string literal. The package covers construction
(CatalogBuilder, promote), reading (labels, record views, search,
neighborhoods), canonical serialization, validation, an HTTP service
(nomengraph.service, imported on demand) and reporting
(nomengraph.report, imported on demand).
"""

from __future__ import annotations

from .graph import (
    CatalogError,
    FrozenGraphError,
    Graph,
    Iri,
    Literal,
    Subgraph,
    TermError,
    Triple,
)
from .ingest import (
    DirectiveError,
    Field,
    FlatRecord,
    IngestError,
    Link,
    PromoteError,
    PromoteResult,
    ProvisionalKey,
    ReconciliationPlan,
    parse_directives,
    parse_provisional_key,
    parse_records,
    promote,
)
from .model import (
    DEFAULT_NAMESPACE,
    DEFAULT_NOMEN_RELATIONS,
    RDF_TYPE,
    CatalogBuilder,
    DomainRangeError,
    Entity,
    EntityKind,
    ModelError,
    Nomen,
    NomenType,
    ProvisionalKeyError,
    UnknownRelationError,
    Violation,
    Vocabulary,
    mint_iri,
    validate,
)
from .resolve import (
    Hit,
    LabelResult,
    NoLabelError,
    NotManifestationError,
    ViewRow,
    render_record_view,
    resolve_label,
    search_nomens,
)
from .serialize import (
    BlankNodeError,
    SerializeError,
    export_ntriples,
    export_turtle,
    import_ntriples,
    import_turtle,
)

__version__ = "0.1.0"

__all__ = [
    "BlankNodeError",
    "CatalogBuilder",
    "CatalogError",
    "DEFAULT_NAMESPACE",
    "DEFAULT_NOMEN_RELATIONS",
    "DirectiveError",
    "DomainRangeError",
    "Entity",
    "EntityKind",
    "Field",
    "FlatRecord",
    "FrozenGraphError",
    "Graph",
    "Hit",
    "IngestError",
    "Iri",
    "LabelResult",
    "Link",
    "Literal",
    "ModelError",
    "NoLabelError",
    "Nomen",
    "NomenType",
    "NotManifestationError",
    "PromoteError",
    "PromoteResult",
    "ProvisionalKey",
    "ProvisionalKeyError",
    "RDF_TYPE",
    "ReconciliationPlan",
    "SerializeError",
    "Subgraph",
    "TermError",
    "Triple",
    "UnknownRelationError",
    "ViewRow",
    "Violation",
    "Vocabulary",
    "export_ntriples",
    "export_turtle",
    "import_ntriples",
    "import_turtle",
    "mint_iri",
    "parse_directives",
    "parse_provisional_key",
    "parse_records",
    "promote",
    "render_record_view",
    "resolve_label",
    "search_nomens",
    "validate",
    "__version__",
]
