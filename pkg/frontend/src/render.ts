/** Render the session view to HTML. Strings only: the browser bootstrap
 *  injects the markup, and tests assert on it directly.
 *
 *  Numbers are printed with String(...) on the values the server sent;
 *  the client never rounds, recomputes, or reorders anything.
 */

import { CollapseOption, OkResponse, ResultCard } from "./types.js";
import { HistoryStep, SessionView, currentResults } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderCard(card: ResultCard, position: number): string {
  const body = card.body ?? `${card.facet} / ${card.tag}`;
  return `
  <article class="result-card" data-id="${escapeHtml(card.id)}">
    <span class="position">${position}</span>
    <p class="body">${escapeHtml(body)}</p>
    <span class="badge facet">${escapeHtml(card.facet)}</span>
    <span class="badge tag">${escapeHtml(card.tag)}</span>
    <span class="badge incidence">${escapeHtml(card.incidence)}</span>
    <span class="score" data-role="score">${String(card.score)}</span>
    <span class="joint" data-role="joint">${String(card.joint)}</span>
    <span class="dr" data-role="dr">${String(card.dr)}</span>
    <span class="degree" data-role="degree">${String(card.degree)}</span>
  </article>`;
}

function renderResultsPane(response: OkResponse): string {
  if (response.results.length === 0) {
    return `<section class="results empty"><p>No results for <em>${escapeHtml(
      response.query,
    )}</em>.</p></section>`;
  }
  const cards = response.results
    .map((card, index) => renderCard(card, index + 1))
    .join("\n");
  return `<section class="results">${cards}\n</section>`;
}

function renderRefinements(response: OkResponse): string {
  if (response.refinements.length === 0) return "";
  const buttons = response.refinements
    .map(
      (facet) =>
        `<button class="refinement" data-facet="${escapeHtml(facet)}">${escapeHtml(
          facet,
        )}</button>`,
    )
    .join("");
  return `<aside class="refinements">${buttons}</aside>`;
}

function renderOption(option: CollapseOption, index: number): string {
  const who = option.distinct_speakers.length
    ? option.distinct_speakers.join(", ")
    : option.speakers.join(", ");
  const focus = index === 0 ? " autofocus" : "";
  return `
    <button class="collapse-option" data-option="${escapeHtml(option.option)}"${focus}>
      <span class="facet">${escapeHtml(option.facet)}</span>
      <span class="speakers">${escapeHtml(who)}</span>
      <span class="score" data-role="score">${String(option.score)}</span>
    </button>`;
}

function renderCollapseModal(view: SessionView): string {
  if (!view.pending) return "";
  const options = view.pending.options
    .map((option, index) => renderOption(option, index))
    .join("\n");
  return `
  <div class="modal-backdrop">
    <dialog class="collapse-dialog" open>
      <h2>Choose one reading</h2>
      <p>These contributions use incompatible frameworks; pick the sense you mean.</p>
      ${options}
    </dialog>
  </div>`;
}

function renderHistoryStep(step: HistoryStep, index: number, active: boolean): string {
  const marker = active ? " active" : "";
  const excluded = step.excluded
    .map(
      (option) =>
        `<li class="excluded" data-option="${escapeHtml(option.option)}">${escapeHtml(
          option.facet,
        )} (${escapeHtml(option.speakers.join(", "))})</li>`,
    )
    .join("");
  const excludedList = excluded ? `<ul class="excluded-options">${excluded}</ul>` : "";
  return `<li class="step ${step.kind}${marker}" data-step="${index}">${escapeHtml(
    step.label,
  )}${excludedList}</li>`;
}

function renderHistory(view: SessionView): string {
  if (view.history.length === 0) return "";
  const items = view.history
    .map((step, index) => renderHistoryStep(step, index, index === view.cursor))
    .join("\n");
  return `<ol class="history">${items}</ol>`;
}

export function renderView(view: SessionView): string {
  const banner = view.error
    ? `<div class="error-banner">${escapeHtml(view.error)}</div>`
    : "";
  const response = currentResults(view);
  const main = response
    ? `${renderResultsPane(response)}${renderRefinements(response)}`
    : `<section class="results empty"><p>Submit a query to begin.</p></section>`;
  const snapshot = view.snapshotId
    ? `<footer class="snapshot">snapshot ${escapeHtml(view.snapshotId)}</footer>`
    : "";
  return [
    banner,
    renderCollapseModal(view),
    main,
    renderHistory(view),
    snapshot,
  ].join("\n");
}
