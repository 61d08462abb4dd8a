// Pure HTML-string renderers. No recomputation of any number: every value
// shown is exactly what the service sent (only HTML-escaped).

import type { ChatTurn, InverseReport, JobSnapshot, SourceSpan, TablePayload } from "./types.js";

export function esc(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

const BADGE_LABELS: Record<string, string> = {
  general: "General",
  extract: "Extract",
  comprehend: "Comprehend",
  inverse: "Inverse",
};

export function renderBadge(kind: string): string {
  const label = BADGE_LABELS[kind] ?? kind;
  return `<span class="badge badge-${esc(kind)}">${esc(label)}</span>`;
}

export function renderSources(sources: SourceSpan[]): string {
  const spans = sources
    .map((s) => `#${s.seq} [${s.char_start}, ${s.char_end})`)
    .map(esc)
    .join(", ");
  return `<div class="sources">sources: ${spans}</div>`;
}

export function renderTable(payload: TablePayload): string {
  const head = payload.columns.map((c) => `<th>${esc(c)}</th>`).join("");
  const body = payload.rows
    .map((row) => `<tr>${row.map((c) => `<td>${esc(c)}</td>`).join("")}</tr>`)
    .join("");
  return `<table class="result-table"><thead><tr>${head}</tr></thead>` +
    `<tbody>${body}</tbody></table>` +
    `<div class="dsl">query: <code>${esc(payload.dsl)}</code></div>`;
}

export function renderTurn(turn: ChatTurn): string {
  const parts = [
    `<div class="bubble user"><p>${esc(turn.query)}</p></div>`,
    `<div class="bubble assistant">`,
    renderBadge(turn.routed_kind),
  ];
  if (turn.payload && turn.payload.rows.length > 0) {
    parts.push(renderTable(turn.payload));
  } else {
    parts.push(`<p>${esc(turn.answer).replaceAll("\n", "<br>")}</p>`);
  }
  if (turn.sources && turn.sources.length > 0) {
    parts.push(renderSources(turn.sources));
  }
  parts.push(`</div>`);
  return parts.join("");
}

export function renderErrorBubble(message: string): string {
  return `<div class="bubble error"><p>${esc(message)}</p>` +
    `<p class="hint">The transcript is preserved; try again.</p></div>`;
}

export function renderJobCard(snapshot: JobSnapshot | null, jobId: string): string {
  if (snapshot === null) {
    return `<div class="job-card" data-job="${esc(jobId)}">` +
      `<h3>Inverse job ${esc(jobId)}</h3><p class="status">submitted…</p></div>`;
  }
  const { status, progress } = snapshot;
  const header = `<h3>Inverse job ${esc(snapshot.job_id)}</h3>` +
    `<p class="status status-${esc(status)}">${esc(status)}` +
    ` (${progress.done}/${progress.total})</p>`;
  if (status === "failed") {
    return `<div class="job-card failed" data-job="${esc(jobId)}">${header}` +
      `<p class="error-text">${esc(snapshot.error ?? "unknown failure")}</p></div>`;
  }
  if (status === "finished" && snapshot.result) {
    return `<div class="job-card finished" data-job="${esc(jobId)}">${header}` +
      renderSolutionCard(snapshot.result) + `</div>`;
  }
  return `<div class="job-card" data-job="${esc(jobId)}">${header}</div>`;
}

export function renderSolutionCard(report: InverseReport): string {
  const composition = report.composition
    .map((c) => `<tr><td>${esc(c.species)}</td><td>${esc(c.wt_pct)}%</td></tr>`)
    .join("");
  const feed = report.feed
    .map((f) => `<tr><td>${esc(f.gas)}</td><td>${esc(f.vol_pct)}%</td></tr>`)
    .join("");
  const flags: string[] = [];
  if (report.narrative_truncated) {
    flags.push("narrative truncated at 200 words");
  }
  if (report.narrative_degraded) {
    flags.push("narrative unavailable (model backend failed); numbers intact");
  }
  return `
<div class="solution">
  <h4>Catalyst composition</h4>
  <table class="composition"><tbody>${composition}</tbody></table>
  <p class="conversion">Predicted CO conversion:
    <strong>${esc(report.conversion_pct)}%</strong>
    ± ${esc(report.uncertainty_pct)}%
    (equilibrium ceiling ${esc(report.equilibrium_conversion_pct)}%)</p>
  <p>Temperature: ${esc(report.temperature_c)} °C</p>
  <p>Preparation method: ${esc(report.prep_method)}</p>
  <h4>Feed gases</h4>
  <table class="feed"><tbody>${feed}</tbody></table>
  <p>Time on stream: ${esc(report.time_on_stream_h)} h</p>
  <p>W/F ratio: ${esc(report.w_f_ratio)} mg·min/ml</p>
  <p>Iterations used: ${esc(report.iterations_used)}</p>
  ${flags.map((f) => `<p class="flag">${esc(f)}</p>`).join("")}
  ${report.narrative ? `<p class="narrative">${esc(report.narrative)}</p>` : ""}
</div>`;
}

export function renderActiveArticle(ref: string | null): string {
  if (!ref) {
    return `<p class="active-article none">No active article</p>`;
  }
  return `<p class="active-article">Active article: <strong>${esc(ref)}</strong></p>`;
}
