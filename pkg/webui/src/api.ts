// Read-only client for the catalog service.
//
// Every response carries the snapshot number in X-Catalog-Version.
// The client remembers the newest snapshot it has seen and discards
// any response from an older one, so concurrent in-flight requests
// can resolve in any order without an early snapshot overwriting a
// later one on screen.

import type { EntityPayload, InfoPayload, RecordPayload, SearchPayload } from "./types.js";

export type FetchLike = (url: string) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

/** The response came from an older catalog snapshot than one already
 * delivered; the caller should drop it (a retry will hit the newer
 * snapshot). */
export class StaleResponseError extends Error {
  constructor(
    public readonly seen: number,
    public readonly latest: number,
  ) {
    super(`stale response: snapshot ${seen} after snapshot ${latest}`);
    this.name = "StaleResponseError";
  }
}

export const VERSION_HEADER = "X-Catalog-Version";

export class ApiClient {
  private latest = -1;

  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  /** Newest snapshot version seen so far, -1 before the first response. */
  version(): number {
    return this.latest;
  }

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.base + path);
    const header = res.headers.get(VERSION_HEADER);
    if (header !== null) {
      const version = Number(header);
      if (Number.isFinite(version)) {
        if (version < this.latest) throw new StaleResponseError(version, this.latest);
        this.latest = version;
      }
    }
    if (!res.ok) {
      let detail = `HTTP ${res.status}`;
      try {
        const body = (await res.json()) as { detail?: string };
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  info(): Promise<InfoPayload> {
    return this.get<InfoPayload>("/");
  }

  search(query: string, mode: "substring" | "exact" = "substring"): Promise<SearchPayload> {
    return this.get<SearchPayload>(`/search?q=${encodeURIComponent(query)}&mode=${mode}`);
  }

  entity(iri: string, lang?: string, depth = 1): Promise<EntityPayload> {
    let path = `/entity?iri=${encodeURIComponent(iri)}&depth=${depth}`;
    if (lang !== undefined) path += `&lang=${encodeURIComponent(lang)}`;
    return this.get<EntityPayload>(path);
  }

  record(iri: string, lang?: string): Promise<RecordPayload> {
    let path = `/record?iri=${encodeURIComponent(iri)}`;
    if (lang !== undefined) path += `&lang=${encodeURIComponent(lang)}`;
    return this.get<RecordPayload>(path);
  }
}
