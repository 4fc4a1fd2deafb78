// HTML and SVG string builders. No DOM access here, so every view is
// unit-testable as plain text.
//
// One rule governs everything below: a string received from the
// catalog is inserted verbatim, transformed only by HTML escaping.
// Labels come and go with the interface language; transcribed values
// never change shape.

import { layoutSubgraph } from "./layout.js";
import type { GraphLayout } from "./layout.js";
import type { EntityPayload, NomenJson, RecordPayload, SearchPayload } from "./types.js";
import type { Tab, ViewState } from "./state.js";
import { TABS } from "./state.js";

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (c) => ESCAPES[c]);
}

/** Inverse of escapeHtml; lets tests prove a rendered value is the
 * original string and nothing else. */
export function unescapeHtml(text: string): string {
  return text
    .replace(/&#39;/g, "'")
    .replace(/&quot;/g, '"')
    .replace(/&gt;/g, ">")
    .replace(/&lt;/g, "<")
    .replace(/&amp;/g, "&");
}

function langBadge(lang: string | null): string {
  return lang ? `<span class="badge lang">${escapeHtml(lang)}</span>` : "";
}

function entityLink(iri: string, text?: string): string {
  const shown = text ?? iri;
  return `<a href="#/entity/${encodeURIComponent(iri)}" data-iri="${escapeHtml(iri)}">${escapeHtml(shown)}</a>`;
}

export function renderSearchView(payload: SearchPayload): string {
  if (payload.hits.length === 0) {
    return `<p class="empty">No names match ${escapeHtml(JSON.stringify(payload.query))}.</p>`;
  }
  const items = payload.hits.map((hit) => {
    const owners = hit.owners
      .map((o) =>
        `<li class="owner kind-${escapeHtml(o.kind)}">${entityLink(o.iri, o.label ?? o.iri)}` +
        ` <span class="badge kind">${escapeHtml(o.kind)}</span></li>`,
      )
      .join("");
    return (
      `<li class="hit${hit.exact ? " exact" : ""}">` +
      `<span class="value">${escapeHtml(hit.value)}</span>${langBadge(hit.lang)}` +
      `<ul class="owners">${owners}</ul></li>`
    );
  });
  return `<ul class="hits">${items.join("")}</ul>`;
}

function renderNomen(nomen: NomenJson): string {
  const relations = nomen.relations
    .map((r) => {
      const arrow = r.direction === "out" ? "&rarr;" : "&larr;";
      return (
        `<li class="nomen-relation rel-${escapeHtml(r.rel)}">` +
        `<span class="rel">${escapeHtml(r.rel)}</span> ${arrow} ` +
        `<span class="other">${escapeHtml(r.other)}</span></li>`
      );
    })
    .join("");
  const schemes = (nomen.schemes ?? [])
    .map((s) => `<span class="badge scheme">${escapeHtml(s)}</span>`)
    .join("");
  return (
    `<li class="nomen" data-iri="${escapeHtml(nomen.iri)}">` +
    `<span class="value">${escapeHtml(nomen.value)}</span>` +
    langBadge(nomen.lang) +
    (nomen.type ? `<span class="badge type">${escapeHtml(nomen.type)}</span>` : "") +
    schemes +
    (relations ? `<ul class="nomen-relations">${relations}</ul>` : "") +
    `</li>`
  );
}

export function renderGraphSvg(layout: GraphLayout): string {
  const byId = new Map(layout.nodes.map((n) => [n.id, n]));
  const lines = layout.edges
    .map((e) => {
      const a = byId.get(e.from)!;
      const b = byId.get(e.to)!;
      const mx = (a.x + b.x) / 2;
      const my = (a.y + b.y) / 2;
      return (
        `<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" class="edge"/>` +
        `<text x="${mx}" y="${my}" class="edge-label">${escapeHtml(e.label)}</text>`
      );
    })
    .join("");
  const circles = layout.nodes
    .map(
      (n) =>
        `<g class="node ${n.kind}" data-id="${escapeHtml(n.id)}">` +
        `<circle cx="${n.x}" cy="${n.y}" r="${n.kind === "literal" ? 5 : 9}"/>` +
        `<text x="${n.x}" y="${n.y - 12}">${escapeHtml(n.label)}</text></g>`,
    )
    .join("");
  return (
    `<svg viewBox="0 0 ${layout.width} ${layout.height}" width="${layout.width}" height="${layout.height}">` +
    lines +
    circles +
    `</svg>`
  );
}

function renderTabNav(active: Tab, showRecord: boolean): string {
  const tabs = TABS.filter((t) => showRecord || t !== "record");
  return (
    `<nav class="tabs">` +
    tabs
      .map(
        (t) =>
          `<button class="tab${t === active ? " active" : ""}" data-tab="${t}">${t}</button>`,
      )
      .join("") +
    `</nav>`
  );
}

function renderRelations(payload: EntityPayload): string {
  if (payload.relations.length === 0) return `<p class="empty">No relationships.</p>`;
  const rows = payload.relations
    .map((r) => {
      const arrow = r.direction === "out" ? "&rarr;" : "&larr;";
      const via = r.via_nomen
        ? `<td class="via">via <span class="nomen-ref">${escapeHtml(r.via_nomen)}</span></td>`
        : `<td class="via"></td>`;
      return (
        `<tr class="relation rel-${escapeHtml(r.rel)}">` +
        `<td class="rel">${escapeHtml(r.rel)}</td>` +
        `<td class="dir">${arrow}</td>` +
        `<td class="other">${entityLink(r.other)}</td>` +
        via +
        `</tr>`
      );
    })
    .join("");
  return `<table class="relations"><tbody>${rows}</tbody></table>`;
}

/** Full entity page for the active tab. The record tab body is a
 * placeholder that main.ts fills from /record (manifestations only). */
export function renderEntityPage(payload: EntityPayload, state: ViewState): string {
  const title = payload.label ?? payload.iri;
  const header =
    `<header class="entity-header">` +
    `<h2 class="label">${escapeHtml(title)}</h2>` +
    langBadge(payload.lang) +
    (payload.kind ? `<span class="badge kind">${escapeHtml(payload.kind)}</span>` : "") +
    (payload.rule_fired
      ? `<span class="badge rule" title="label rule fired">rule ${escapeHtml(payload.rule_fired)}</span>`
      : "") +
    `<code class="iri">${escapeHtml(payload.iri)}</code>` +
    `</header>`;

  const showRecord = payload.kind === "manifestation";
  let body: string;
  switch (state.tab) {
    case "nomens":
      body = `<ul class="nomens">${payload.nomens.map(renderNomen).join("")}</ul>`;
      break;
    case "graph":
      body =
        `<div class="graph" data-depth="${state.depth}">` +
        renderGraphSvg(layoutSubgraph(payload.subgraph)) +
        `</div>`;
      break;
    case "record":
      body = showRecord
        ? `<div class="record-slot" data-iri="${escapeHtml(payload.iri)}">Loading record&hellip;</div>`
        : `<p class="empty">Only manifestations have a record view.</p>`;
      break;
    default:
      body = renderRelations(payload);
  }
  return `<article class="entity">${header}${renderTabNav(state.tab, showRecord)}<section class="tab-body">${body}</section></article>`;
}

/** The flat-record view of a manifestation: transcribed slots exactly
 * as catalogued, agent slots with resolved labels. */
export function renderRecordView(payload: RecordPayload): string {
  const rows = payload.rows
    .map(
      (r) =>
        `<tr class="row slot-${escapeHtml(r.slot)} source-${r.source_kind}">` +
        `<th>${escapeHtml(r.slot)}</th>` +
        `<td class="value">${escapeHtml(r.value)}</td>` +
        `<td>${langBadge(r.lang)}</td>` +
        `<td class="source">${r.source_kind === "entity" ? entityLink(r.source) : escapeHtml(r.source)}</td>` +
        `</tr>`,
    )
    .join("");
  return `<table class="record"><tbody>${rows}</tbody></table>`;
}

export function renderError(message: string): string {
  return `<p class="error">${escapeHtml(message)}</p>`;
}
