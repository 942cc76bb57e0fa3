/** Wires the pure state/render layers to the DOM and the service API. */

import { AnnotationApi } from './api.js';
import {
  applyClassSuggestions, applyDelete, applyLexicon, applyServiceDown,
  applyUpsert, applyViolations, initialState, knownClasses, knownSynonymSets,
} from './state.js';
import type { AppState } from './state.js';
import {
  renderBanner, renderClassSuggestions, renderPreview,
  renderRefwordSuggestions, renderViolations, renderWordTable,
} from './render.js';
import { GENDERS, NUMBERS } from './types.js';
import type { EntryBody } from './types.js';

const api = new AnnotationApi(
  (window as unknown as { SEMDEC_API?: string }).SEMDEC_API ?? '',
);

let state: AppState = initialState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function setState(next: AppState): void {
  state = next;
  render();
}

function render(): void {
  el('banner-slot').innerHTML = renderBanner(state);
  el('revision').textContent = `revision ${state.revision}`;
  el('word-table').innerHTML = renderWordTable(state);
  el('violation-panel').innerHTML = renderViolations(state.violations);
  el('class-suggestions').innerHTML = renderClassSuggestions(state);
  el('refword-suggestions').innerHTML = renderRefwordSuggestions(state);
  el('preview-panel').innerHTML = renderPreview(state);

  const classList = el<HTMLDataListElement>('known-classes');
  classList.innerHTML = knownClasses(state)
    .map((c) => `<option value="${c}"></option>`).join('');
  const synList = el<HTMLDataListElement>('known-synonyms');
  synList.innerHTML = knownSynonymSets(state)
    .map((s) => `<option value="${s}"></option>`).join('');

  document.querySelectorAll<HTMLTableRowElement>('.word-row').forEach((row) => {
    row.addEventListener('click', () => loadIntoEditor(row.dataset.surface ?? ''));
  });
  document.querySelectorAll<HTMLButtonElement>('.use-class').forEach((btn) => {
    btn.addEventListener('click', (ev) => {
      ev.stopPropagation();
      el<HTMLInputElement>('f-class').value = btn.dataset.class ?? '';
    });
  });
  const reload = document.getElementById('reload');
  if (reload) {
    reload.addEventListener('click', () => void refresh());
  }
  const retry = document.getElementById('retry');
  if (retry) {
    retry.addEventListener('click', () => void refresh());
  }
}

function loadIntoEditor(surface: string): void {
  const entry = state.entries.find((e) => e.surface === surface);
  el<HTMLInputElement>('f-surface').value = surface;
  el<HTMLInputElement>('f-field').value = entry?.field ?? el<HTMLInputElement>('f-field').value;
  el<HTMLInputElement>('f-class').value = entry?.semantic_class ?? '';
  el<HTMLInputElement>('f-trait').value = entry?.micro_trait ?? '';
  el<HTMLSelectElement>('f-gender').value = entry?.gender ?? 'unspecified';
  el<HTMLSelectElement>('f-number').value = entry?.number ?? 'unspecified';
  el<HTMLInputElement>('f-nature').value = entry?.nature ?? 'name';
  el<HTMLInputElement>('f-synonym').value = entry?.synonym_set ?? '';
}

function editorBody(): EntryBody {
  return {
    field: el<HTMLInputElement>('f-field').value.trim(),
    semantic_class: el<HTMLInputElement>('f-class').value.trim(),
    micro_trait: el<HTMLInputElement>('f-trait').value.trim(),
    gender: el<HTMLSelectElement>('f-gender').value,
    number: el<HTMLSelectElement>('f-number').value,
    nature: el<HTMLInputElement>('f-nature').value.trim(),
    synonym_set: el<HTMLInputElement>('f-synonym').value.trim() || null,
  };
}

async function saveEntry(): Promise<void> {
  const surface = el<HTMLInputElement>('f-surface').value.trim();
  if (!surface) {
    el('editor-error').textContent = 'surface is required';
    return;
  }
  const result = await api.putEntry(surface, editorBody());
  if (!result.ok) {
    el('editor-error').textContent =
      result.status === 0 ? `service unreachable: ${result.detail}` : result.detail;
    return;
  }
  el('editor-error').textContent = '';
  setState(applyUpsert(state, surface, editorBody(), result.value));
}

async function deleteEntry(): Promise<void> {
  const surface = el<HTMLInputElement>('f-surface').value.trim();
  if (!surface) {
    return;
  }
  const result = await api.deleteEntry(surface);
  if (!result.ok) {
    el('editor-error').textContent = result.detail;
    return;
  }
  const validated = await api.validate();
  let next = applyDelete(state, surface, result.value.revision);
  if (validated.ok) {
    next = applyViolations(next, validated.value.revision, validated.value.violations);
  }
  setState(next);
}

async function runPreview(): Promise<void> {
  const tokens = el<HTMLInputElement>('preview-tokens').value.trim().split(/\s+/)
    .filter((t) => t.length > 0);
  const result = await api.decodePreview(tokens);
  if (!result.ok) {
    setState({
      ...state,
      preview: null,
      previewDisabled: result.status === 409
        ? `preview unavailable: ${result.detail}`
        : result.detail,
    });
    return;
  }
  setState({ ...state, preview: result.value, previewDisabled: null });
}

async function refresh(): Promise<void> {
  const lexicon = await api.getLexicon();
  if (!lexicon.ok) {
    setState(applyServiceDown(state, lexicon.detail));
    return;
  }
  let next = applyLexicon({ ...initialState(), preview: state.preview }, lexicon.value);
  const validated = await api.validate();
  if (validated.ok) {
    next = applyViolations(next, validated.value.revision, validated.value.violations);
  }
  const classes = await api.suggestClasses();
  if (classes.ok) {
    next = applyClassSuggestions(next, classes.value.classes);
  } else if (classes.status === 409) {
    next = { ...next, suggestionsDisabled: classes.detail };
  }
  const refwords = await api.suggestRefwords(0.05);
  if (refwords.ok) {
    next = { ...next, refwordSuggestions: refwords.value };
  }
  setState(next);
}

function init(): void {
  el<HTMLSelectElement>('f-gender').innerHTML =
    GENDERS.map((g) => `<option>${g}</option>`).join('');
  el<HTMLSelectElement>('f-number').innerHTML =
    NUMBERS.map((n) => `<option>${n}</option>`).join('');
  el<HTMLSelectElement>('f-gender').value = 'unspecified';
  el<HTMLSelectElement>('f-number').value = 'unspecified';
  el('save-entry').addEventListener('click', () => void saveEntry());
  el('delete-entry').addEventListener('click', () => void deleteEntry());
  el('run-preview').addEventListener('click', () => void runPreview());
  void refresh();
}

document.addEventListener('DOMContentLoaded', init);
