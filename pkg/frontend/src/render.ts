/** HTML builders: pure string functions so rendering is unit-testable.
 *
 * Bidirectional text is handled with explicit direction attributes per
 * column: Arabic surfaces render right-to-left, metadata left-to-right.
 * The page itself stays direction-neutral.
 */

import type { AppState } from './state.js';
import { wordRows } from './state.js';
import type { DecodePreviewResponse, ViolationDto, WordRow } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function statusBadge(row: WordRow): string {
  const labels = {
    'unannotated': 'unannotated',
    'annotated': 'annotated',
    'in-violation': 'violation',
  } as const;
  return `<span class="status status-${row.status}">${labels[row.status]}</span>`;
}

export function renderWordTable(state: AppState): string {
  const rows = wordRows(state)
    .map((row) => {
      const e = row.entry;
      const meta = e
        ? `<td dir="ltr">${escapeHtml(e.semantic_class)}</td>` +
          `<td dir="ltr">${escapeHtml(e.micro_trait)}</td>` +
          `<td dir="ltr">${escapeHtml(e.synonym_set ?? '')}</td>`
        : '<td dir="ltr"></td><td dir="ltr"></td><td dir="ltr"></td>';
      return `<tr data-surface="${escapeHtml(row.surface)}" class="word-row">` +
        `<td dir="rtl" class="surface">${escapeHtml(row.surface)}</td>` +
        `<td dir="ltr">${statusBadge(row)}</td>${meta}</tr>`;
    })
    .join('');
  return (
    '<table class="words"><thead><tr>' +
    '<th dir="rtl">word</th><th dir="ltr">status</th>' +
    '<th dir="ltr">class</th><th dir="ltr">trait</th><th dir="ltr">synonyms</th>' +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderViolations(violations: ViolationDto[]): string {
  if (violations.length === 0) {
    return '<p class="ok">no violations</p>';
  }
  const items = violations
    .map((v) =>
      `<li><code>${escapeHtml(v.constraint_id)}</code> ` +
      `<span dir="rtl">${v.entries.map(escapeHtml).join('، ')}</span> ` +
      `<span class="message" dir="ltr">${escapeHtml(v.message)}</span></li>`)
    .join('');
  return `<ul class="violations">${items}</ul>`;
}

export function renderClassSuggestions(state: AppState): string {
  if (state.suggestionsDisabled) {
    return `<p class="disabled">${escapeHtml(state.suggestionsDisabled)}</p>`;
  }
  if (state.classSuggestions.length === 0) {
    return '<p class="empty">no suggestions loaded</p>';
  }
  return state.classSuggestions
    .map((c) =>
      `<div class="suggestion"><button type="button" class="use-class" ` +
      `data-class="${escapeHtml(c.class_id)}">use</button> ` +
      `<code>${escapeHtml(c.class_id)}</code> ` +
      `<span dir="rtl">${c.members.map(escapeHtml).join(' ')}</span></div>`)
    .join('');
}

export function renderRefwordSuggestions(state: AppState): string {
  const types = Object.keys(state.refwordSuggestions).sort();
  if (types.length === 0) {
    return '<p class="empty">no suggestions loaded</p>';
  }
  return types
    .map((t) => {
      const rows = state.refwordSuggestions[t]
        .map((r) =>
          `<li><span dir="rtl">${r.tokens.map(escapeHtml).join(' ')}</span>` +
          ` <span class="weight" dir="ltr">${r.weight.toFixed(4)}</span></li>`)
        .join('');
      return `<div class="reftype"><h4 dir="ltr">${escapeHtml(t)}</h4><ul>${rows}</ul></div>`;
    })
    .join('');
}

export function renderPreview(state: AppState): string {
  if (state.previewDisabled) {
    return `<p class="disabled">${escapeHtml(state.previewDisabled)}</p>`;
  }
  const preview: DecodePreviewResponse | null = state.preview;
  if (!preview) {
    return '<p class="empty">enter tokens and decode</p>';
  }
  const words = preview.labels
    .map((l) =>
      `<span class="decoded"><span dir="rtl">${escapeHtml(l.token)}</span>` +
      `<sub dir="ltr">${escapeHtml(l.semantic_class)}/${escapeHtml(l.micro_trait)}` +
      ` ${l.probability.toExponential(2)}</sub></span>`)
    .join(' ');
  return (
    `<p dir="ltr">type: <code>${escapeHtml(preview.utterance_type.type_id)}</code>` +
    ` (p=${preview.utterance_type.probability.toFixed(3)})</p>` +
    `<p class="labels">${words}</p>`
  );
}

export function renderBanner(state: AppState): string {
  if (state.needsReload) {
    return '<div class="banner warn">lexicon changed elsewhere; ' +
      '<button type="button" id="reload">reload</button></div>';
  }
  if (state.banner) {
    return `<div class="banner error">${escapeHtml(state.banner)} ` +
      '<button type="button" id="retry">retry</button></div>';
  }
  return '';
}
