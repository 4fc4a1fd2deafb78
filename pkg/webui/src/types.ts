// JSON payload types of the catalog service, one interface per
// response shape.

export interface TermJson {
  type: "iri" | "literal";
  value: string;
  lang?: string;
}

export interface TripleJson {
  s: string;
  p: string;
  o: TermJson;
}

export interface SubgraphJson {
  root: string;
  depth: number;
  root_present: boolean;
  triples: TripleJson[];
}

export interface NomenRelationJson {
  rel: string;
  direction: "in" | "out";
  other: string;
}

export interface NomenJson {
  iri: string;
  value: string;
  lang: string | null;
  type: string | null;
  relations: NomenRelationJson[];
  schemes?: string[];
}

export interface EntityRelationJson {
  rel: string;
  direction: "in" | "out";
  other: string;
  via_nomen?: string;
}

export interface EntityPayload {
  iri: string;
  kind: string | null;
  label: string | null;
  lang: string | null;
  rule_fired: string | null;
  nomens: NomenJson[];
  relations: EntityRelationJson[];
  subgraph: SubgraphJson;
}

export interface RecordRowJson {
  slot: string;
  value: string;
  lang: string | null;
  source: string;
  source_kind: "nomen" | "entity";
}

export interface RecordPayload {
  iri: string;
  rows: RecordRowJson[];
}

export interface SearchOwnerJson {
  iri: string;
  kind: string;
  label: string | null;
}

export interface SearchHitJson {
  nomen: string;
  value: string;
  lang: string | null;
  exact: boolean;
  owners: SearchOwnerJson[];
}

export interface SearchPayload {
  query: string;
  mode: string;
  hits: SearchHitJson[];
}

export interface CatalogCounts {
  entities: number;
  nomens: number;
  triples: number;
}

export interface InfoPayload {
  service: string;
  version: number;
  namespace: string;
  default_lang: string;
  counts: CatalogCounts;
}
