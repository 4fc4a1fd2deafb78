import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, StaleResponseError, VERSION_HEADER } from "../src/api.js";

function jsonResponse(payload: unknown, version: number, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json", [VERSION_HEADER]: String(version) },
  });
}

/** fetch stub that records requested URLs and pops canned responses. */
function stub(responses: Response[]): { fetchFn: (url: string) => Promise<Response>; urls: string[] } {
  const urls: string[] = [];
  return {
    urls,
    fetchFn: (url: string) => {
      urls.push(url);
      const next = responses.shift();
      if (!next) throw new Error("no response queued");
      return Promise.resolve(next);
    },
  };
}

describe("request building", () => {
  it("percent-encodes the IRI and carries lang and depth", async () => {
    const iri = "http://example.org/catalog/place/rec-m1%7Cplace_of_publication%7C0";
    const { fetchFn, urls } = stub([jsonResponse({ iri }, 1), jsonResponse({ iri }, 1)]);
    const client = new ApiClient("http://api.test", fetchFn);
    await client.entity(iri, "de", 2);
    await client.entity(iri);
    expect(urls[0]).toBe(
      "http://api.test/entity?iri=" + encodeURIComponent(iri) + "&depth=2&lang=de",
    );
    expect(urls[1]).toBe("http://api.test/entity?iri=" + encodeURIComponent(iri) + "&depth=1");
  });

  it("encodes search queries and omits lang from records by default", async () => {
    const { fetchFn, urls } = stub([jsonResponse({ hits: [] }, 1), jsonResponse({ rows: [] }, 1)]);
    const client = new ApiClient("http://api.test", fetchFn);
    await client.search("George Eliot", "exact");
    await client.record("http://x.test/m");
    expect(urls[0]).toBe("http://api.test/search?q=George%20Eliot&mode=exact");
    expect(urls[1]).toBe("http://api.test/record?iri=" + encodeURIComponent("http://x.test/m"));
  });
});

describe("snapshot version gating", () => {
  it("tracks the newest version seen", async () => {
    const { fetchFn } = stub([jsonResponse({}, 4), jsonResponse({}, 7)]);
    const client = new ApiClient("http://api.test", fetchFn);
    expect(client.version()).toBe(-1);
    await client.info();
    expect(client.version()).toBe(4);
    await client.info();
    expect(client.version()).toBe(7);
  });

  it("discards a response from an older snapshot than one already delivered", async () => {
    const { fetchFn } = stub([jsonResponse({ fresh: true }, 9), jsonResponse({ stale: true }, 6)]);
    const client = new ApiClient("http://api.test", fetchFn);
    await client.info();
    await expect(client.info()).rejects.toBeInstanceOf(StaleResponseError);
    expect(client.version()).toBe(9);
  });

  it("lets equal-version responses through (many reads per snapshot)", async () => {
    const { fetchFn } = stub([jsonResponse({ a: 1 }, 2), jsonResponse({ b: 2 }, 2)]);
    const client = new ApiClient("http://api.test", fetchFn);
    await client.info();
    await expect(client.info()).resolves.toEqual({ b: 2 });
  });

  it("applies the gate before error handling, so even a failed request advances the version", async () => {
    const { fetchFn } = stub([
      jsonResponse({ detail: "no such node: x" }, 5, 404),
      jsonResponse({ late: true }, 3),
    ]);
    const client = new ApiClient("http://api.test", fetchFn);
    await expect(client.info()).rejects.toBeInstanceOf(ApiError);
    expect(client.version()).toBe(5);
    await expect(client.info()).rejects.toBeInstanceOf(StaleResponseError);
  });
});

describe("error surfacing", () => {
  it("carries the service detail message and status", async () => {
    const { fetchFn } = stub([jsonResponse({ detail: "depth must be between 0 and 3" }, 1, 422)]);
    const client = new ApiClient("http://api.test", fetchFn);
    const err = await client.entity("http://x.test/e", undefined, 9).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).message).toBe("depth must be between 0 and 3");
  });

  it("survives a non-JSON error body", async () => {
    const { fetchFn } = stub([
      new Response("gateway exploded", { status: 502, headers: { [VERSION_HEADER]: "1" } }),
    ]);
    const client = new ApiClient("http://api.test", fetchFn);
    const err = await client.info().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).message).toBe("HTTP 502");
  });

  it("tolerates a missing version header", async () => {
    const { fetchFn } = stub([new Response("{}", { status: 200 })]);
    const client = new ApiClient("http://api.test", fetchFn);
    await client.info();
    expect(client.version()).toBe(-1);
  });
});
