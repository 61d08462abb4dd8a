// Job polling at 1 Hz until the job reaches a terminal state. Returns a
// cancel function; dismissal of a card cancels its poller.

import type { ApiClient } from "./api.js";
import type { JobSnapshot } from "./types.js";

export const POLL_INTERVAL_MS = 1000;

export function pollJob(
  api: ApiClient,
  jobId: string,
  onUpdate: (snapshot: JobSnapshot) => void,
  onError: (error: unknown) => void,
  intervalMs: number = POLL_INTERVAL_MS,
): () => void {
  let cancelled = false;
  let timer: ReturnType<typeof setTimeout> | null = null;

  const tick = async () => {
    if (cancelled) {
      return;
    }
    try {
      const snapshot = await api.pollJob(jobId);
      if (cancelled) {
        return;
      }
      onUpdate(snapshot);
      if (snapshot.status === "finished" || snapshot.status === "failed") {
        return;
      }
    } catch (error) {
      if (!cancelled) {
        onError(error);
      }
      return;
    }
    timer = setTimeout(tick, intervalMs);
  };

  void tick();
  return () => {
    cancelled = true;
    if (timer !== null) {
      clearTimeout(timer);
    }
  };
}
