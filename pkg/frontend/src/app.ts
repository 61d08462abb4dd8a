// DOM glue: transcript on the left, context panel (active article, the
// parameter form, job cards) on the right.

import { ApiClient, ApiFailure } from "./api.js";
import { pollJob } from "./poll.js";
import {
  renderActiveArticle,
  renderErrorBubble,
  renderJobCard,
  renderTurn,
} from "./render.js";
import {
  addJob,
  appendTurn,
  dismissJob,
  isTerminal,
  newState,
  updateJob,
  UiState,
} from "./state.js";
import { trySubmit } from "./form.js";
import type { CatalogResponse, ParameterSettings } from "./types.js";

const api = new ApiClient("");
let state: UiState = newState(`web-${Math.random().toString(36).slice(2, 10)}`);
const cancelers = new Map<string, () => void>();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function redrawTranscript() {
  el("transcript").innerHTML = state.transcript.map(renderTurn).join("");
  const pane = el("transcript");
  pane.scrollTop = pane.scrollHeight;
  el("active-article").innerHTML = renderActiveArticle(state.activeArticle);
}

function redrawJobs() {
  const visible = state.openJobs.filter((card) => !card.dismissed);
  el("jobs").innerHTML = visible
    .map((card) =>
      `<div class="job-wrap">${renderJobCard(card.snapshot, card.jobId)}` +
      `<button class="dismiss" data-dismiss="${card.jobId}">dismiss</button></div>`)
    .join("");
  for (const button of el("jobs").querySelectorAll<HTMLButtonElement>("[data-dismiss]")) {
    button.addEventListener("click", () => {
      const id = button.dataset.dismiss!;
      cancelers.get(id)?.();
      cancelers.delete(id);
      state = dismissJob(state, id);
      redrawJobs();
    });
  }
}

async function sendQuery() {
  const input = el<HTMLInputElement>("query");
  const query = input.value.trim();
  if (!query) {
    return;
  }
  input.value = "";
  input.disabled = true;
  try {
    const turn = await api.chat(state.sessionId, query);
    state = appendTurn(state, turn);
    redrawTranscript();
  } catch (error) {
    const message = error instanceof ApiFailure
      ? `${error.code}: ${error.message}`
      : `network failure: ${String(error)}`;
    el("transcript").insertAdjacentHTML("beforeend", renderErrorBubble(message));
  } finally {
    input.disabled = false;
    input.focus();
  }
}

function fillSelect(select: HTMLSelectElement, options: Record<string, string>,
                    allowNone = false) {
  select.innerHTML = (allowNone ? `<option value="">(none)</option>` : "") +
    Object.entries(options)
      .map(([id, name]) => `<option value="${id}">${name}</option>`)
      .join("");
}

function readSettings(): Partial<ParameterSettings> {
  const promoter = el<HTMLSelectElement>("promoter").value;
  return {
    base_metal: el<HTMLSelectElement>("base-metal").value,
    support: el<HTMLSelectElement>("support").value,
    promoter: promoter || null,
    prep_method: el<HTMLSelectElement>("prep-method").value,
    temperature_range: [
      parseFloat(el<HTMLInputElement>("temp-lo").value),
      parseFloat(el<HTMLInputElement>("temp-hi").value),
    ],
  };
}

async function submitSettings() {
  const errorBox = el("form-errors");
  try {
    const errors = await trySubmit(readSettings(), api, (jobId) => {
      state = addJob(state, jobId);
      redrawJobs();
      const cancel = pollJob(api, jobId, (snapshot) => {
        state = updateJob(state, snapshot);
        redrawJobs();
        if (isTerminal(snapshot)) {
          cancelers.delete(jobId);
        }
      }, (error) => {
        errorBox.innerHTML =
          `<p class="field-error">poll failed: ${String(error)}</p>`;
      });
      cancelers.set(jobId, cancel);
    });
    errorBox.innerHTML = errors
      .map((e) => `<p class="field-error">${e.field}: ${e.message}</p>`)
      .join("");
  } catch (error) {
    if (error instanceof ApiFailure) {
      errorBox.innerHTML = `<p class="field-error">${error.code}: ${error.message}</p>`;
    } else {
      errorBox.innerHTML = `<p class="field-error">network failure</p>`;
    }
  }
}

async function boot() {
  el<HTMLButtonElement>("send").addEventListener("click", () => void sendQuery());
  el<HTMLInputElement>("query").addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      void sendQuery();
    }
  });
  el<HTMLButtonElement>("submit-job").addEventListener("click",
    () => void submitSettings());
  try {
    const catalog: CatalogResponse = await api.catalog();
    state = { ...state, catalog };
    fillSelect(el("base-metal"), catalog.catalog.base_metals);
    fillSelect(el("support"), catalog.catalog.supports);
    fillSelect(el("promoter"), catalog.catalog.promoters, true);
    fillSelect(el("prep-method"), catalog.catalog.prep_methods);
  } catch {
    el("form-errors").innerHTML =
      `<p class="field-error">service unreachable; catalog not loaded</p>`;
  }
  redrawTranscript();
  redrawJobs();
}

document.addEventListener("DOMContentLoaded", () => void boot());
