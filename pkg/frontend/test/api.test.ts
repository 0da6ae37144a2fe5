import { describe, expect, it } from "vitest";

import { ApiError, DriftApi, type FetchLike } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function recordingFetch(
  responses: Response[],
): { fetch: FetchLike; calls: { url: string; init?: RequestInit }[] } {
  const calls: { url: string; init?: RequestInit }[] = [];
  return {
    calls,
    fetch: (url, init) => {
      calls.push({ url, init });
      const next = responses.shift();
      if (!next) throw new Error("no scripted response left");
      return Promise.resolve(next);
    },
  };
}

describe("DriftApi", () => {
  it("joins base url and path", async () => {
    const { fetch, calls } = recordingFetch([jsonResponse(200, [])]);
    const api = new DriftApi("http://svc:8000/", fetch);
    await api.getClusters("abc");
    expect(calls[0]!.url).toBe("http://svc:8000/analyses/abc/clusters");
  });

  it("posts analysis params as JSON", async () => {
    const { fetch, calls } = recordingFetch([
      jsonResponse(202, { id: "a1", state: "pending" }),
    ]);
    const api = new DriftApi("", fetch);
    const handle = await api.startAnalysis("log1", { win_size: 30 });
    expect(handle.id).toBe("a1");
    const init = calls[0]!.init!;
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual({
      log_id: "log1",
      params: { win_size: 30 },
    });
  });

  it("uploads logs as multipart form data", async () => {
    const { fetch, calls } = recordingFetch([
      jsonResponse(201, { log_id: "x", n_traces: 5 }),
    ]);
    const api = new DriftApi("", fetch);
    await api.uploadLog(new Blob(["<log/>"]), "tiny.xes");
    const body = calls[0]!.init!.body;
    expect(body).toBeInstanceOf(FormData);
    const file = (body as FormData).get("file");
    expect(file).toBeInstanceOf(File);
    expect((file as File).name).toBe("tiny.xes");
  });

  it("unwraps the service error detail", async () => {
    const { fetch } = recordingFetch([
      jsonResponse(422, {
        detail: { field: "win_step", message: "win_step must be positive" },
      }),
    ]);
    const api = new DriftApi("", fetch);
    const err = await api
      .startAnalysis("log1", { win_step: -1 })
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.status).toBe(422);
    expect(apiErr.detail.field).toBe("win_step");
    expect(apiErr.message).toMatch(/positive/);
  });

  it("copes with non-JSON error bodies", async () => {
    const { fetch } = recordingFetch([
      new Response("<html>bad gateway</html>", {
        status: 502,
        statusText: "Bad Gateway",
      }),
    ]);
    const api = new DriftApi("", fetch);
    const err = await api.getAnalysis("a1").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(502);
  });

  it("uses DELETE for cancellation", async () => {
    const { fetch, calls } = recordingFetch([
      jsonResponse(200, { id: "a1", state: "failed" }),
    ]);
    const api = new DriftApi("", fetch);
    await api.cancelAnalysis("a1");
    expect(calls[0]!.init?.method).toBe("DELETE");
    expect(calls[0]!.url).toBe("/analyses/a1");
  });
});
