// UI state and its pure update helpers. The transcript is append-only;
// job cards mirror the last-polled server snapshot.

import type { CatalogResponse, ChatTurn, JobSnapshot } from "./types.js";

export interface JobCard {
  jobId: string;
  snapshot: JobSnapshot | null;
  dismissed: boolean;
}

export interface UiState {
  sessionId: string;
  transcript: ChatTurn[];
  activeArticle: string | null;
  openJobs: JobCard[];
  catalog: CatalogResponse | null;
}

export function newState(sessionId: string): UiState {
  return {
    sessionId,
    transcript: [],
    activeArticle: null,
    openJobs: [],
    catalog: null,
  };
}

const REF_PATTERN = /\bR\d+\b/;

export function appendTurn(state: UiState, turn: ChatTurn): UiState {
  let active = state.activeArticle;
  if (turn.routed_kind === "comprehend") {
    const ref = turn.query.match(REF_PATTERN) ?? turn.answer.match(REF_PATTERN);
    if (ref) {
      active = ref[0];
    }
  } else if (turn.query.trim() === "/mode auto" || turn.routed_kind === "inverse") {
    active = null;
  }
  return { ...state, transcript: [...state.transcript, turn], activeArticle: active };
}

export function addJob(state: UiState, jobId: string): UiState {
  return {
    ...state,
    openJobs: [...state.openJobs, { jobId, snapshot: null, dismissed: false }],
  };
}

export function updateJob(state: UiState, snapshot: JobSnapshot): UiState {
  return {
    ...state,
    openJobs: state.openJobs.map((card) =>
      card.jobId === snapshot.job_id ? { ...card, snapshot } : card),
  };
}

export function dismissJob(state: UiState, jobId: string): UiState {
  return {
    ...state,
    openJobs: state.openJobs.map((card) =>
      card.jobId === jobId ? { ...card, dismissed: true } : card),
  };
}

export function isTerminal(snapshot: JobSnapshot | null): boolean {
  return snapshot !== null &&
    (snapshot.status === "finished" || snapshot.status === "failed");
}
