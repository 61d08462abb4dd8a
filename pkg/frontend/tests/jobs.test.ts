import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { trySubmit } from "../src/form.js";
import { pollJob } from "../src/poll.js";
import { addJob, appendTurn, isTerminal, newState, updateJob } from "../src/state.js";
import type { ChatTurn, JobSnapshot } from "../src/types.js";

const SETTINGS = {
  base_metal: "Pt",
  support: "alpha-MoC",
  promoter: "Au",
  prep_method: "incipient-wetness-impregnation",
  temperature_range: [150, 300] as [number, number],
};

function snapshot(status: JobSnapshot["status"], done = 0): JobSnapshot {
  return {
    job_id: "j1",
    status,
    progress: { done, total: 40 },
    result: status === "finished" ? ({ narrative: "n" } as never) : null,
    error: null,
  };
}

describe("trySubmit", () => {
  it("never calls the server for an inverted range", async () => {
    const submitJob = vi.fn();
    const errors = await trySubmit(
      { ...SETTINGS, temperature_range: [350, 300] },
      { submitJob } as never,
      () => {},
    );
    expect(errors.length).toBeGreaterThan(0);
    expect(submitJob).not.toHaveBeenCalled();
  });

  it("submits valid settings and reports the job id", async () => {
    const submitJob = vi.fn().mockResolvedValue({ job_id: "j1" });
    const seen: string[] = [];
    const errors = await trySubmit(SETTINGS, { submitJob } as never,
      (id) => seen.push(id));
    expect(errors).toEqual([]);
    expect(submitJob).toHaveBeenCalledWith(SETTINGS);
    expect(seen).toEqual(["j1"]);
  });
});

describe("pollJob", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("renders running then finished against a stubbed service", async () => {
    const responses = [snapshot("queued"), snapshot("running", 10),
      snapshot("running", 30), snapshot("finished", 40)];
    const api = { pollJob: vi.fn(() => Promise.resolve(responses.shift()!)) };
    const seen: string[] = [];
    let state = addJob(newState("s"), "j1");

    pollJob(api as never, "j1", (snap) => {
      state = updateJob(state, snap);
      seen.push(snap.status);
    }, () => {
      throw new Error("unexpected poll error");
    });

    while (responses.length > 0) {
      await vi.advanceTimersByTimeAsync(1000);
    }
    expect(seen).toEqual(["queued", "running", "running", "finished"]);
    expect(isTerminal(state.openJobs[0].snapshot)).toBe(true);
    // terminal: no further requests on later ticks
    const calls = api.pollJob.mock.calls.length;
    await vi.advanceTimersByTimeAsync(5000);
    expect(api.pollJob.mock.calls.length).toBe(calls);
  });

  it("cancel stops future polls", async () => {
    const api = { pollJob: vi.fn(() => Promise.resolve(snapshot("running", 1))) };
    const cancel = pollJob(api as never, "j1", () => {}, () => {});
    await vi.advanceTimersByTimeAsync(1000);
    const before = api.pollJob.mock.calls.length;
    cancel();
    await vi.advanceTimersByTimeAsync(5000);
    expect(api.pollJob.mock.calls.length).toBe(before);
  });

  it("reports polling errors once and stops", async () => {
    const api = { pollJob: vi.fn(() => Promise.reject(new Error("down"))) };
    const errors: unknown[] = [];
    pollJob(api as never, "j1", () => {}, (e) => errors.push(e));
    await vi.advanceTimersByTimeAsync(3000);
    expect(errors).toHaveLength(1);
  });
});

describe("ApiClient", () => {
  it("parses structured errors", async () => {
    const fetchFn = vi.fn().mockResolvedValue(new Response(
      JSON.stringify({ code: "invalid_settings", message: "inverted" }),
      { status: 422, headers: { "Content-Type": "application/json" } }));
    const api = new ApiClient("", fetchFn as never);
    await expect(api.submitJob(SETTINGS as never)).rejects.toMatchObject({
      code: "invalid_settings",
      status: 422,
    });
  });

  it("posts chat turns to the documented endpoint", async () => {
    const fetchFn = vi.fn().mockResolvedValue(new Response("{}", { status: 200 }));
    const api = new ApiClient("http://svc", fetchFn as never);
    await api.chat("s1", "hello");
    const [url, init] = fetchFn.mock.calls[0];
    expect(url).toBe("http://svc/api/v1/chat");
    expect(JSON.parse((init as RequestInit).body as string)).toEqual({
      session_id: "s1",
      query: "hello",
    });
  });
});

describe("state", () => {
  it("transcript is append-only and tracks the active article", () => {
    let state = newState("s");
    const select: ChatTurn = {
      session_id: "s",
      query: "Comprehend the article of reference ID R71.",
      routed_kind: "comprehend",
      answer: "Ready to retrieve information from the article R71.",
      sources: null,
      payload: null,
      timing_ms: 1,
    };
    state = appendTurn(state, select);
    expect(state.activeArticle).toBe("R71");
    expect(state.transcript).toHaveLength(1);

    const auto: ChatTurn = { ...select, query: "/mode auto",
      routed_kind: "general", answer: "Automatic routing restored." };
    state = appendTurn(state, auto);
    expect(state.activeArticle).toBeNull();
    expect(state.transcript.map((t) => t.query)).toEqual(
      ["Comprehend the article of reference ID R71.", "/mode auto"]);
  });
});
