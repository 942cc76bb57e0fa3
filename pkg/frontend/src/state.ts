/** View state and its pure transitions.
 *
 * The UI never owns authoritative data: everything here is reconstructible
 * from the service GET endpoints alone, so a hard refresh loses nothing.
 * Mutations are optimistic only in the weak sense that the response's
 * revision is checked against the locally expected one; a mismatch means
 * someone else edited the lexicon and the view must reload.
 */

import type {
  ClassSuggestion, DecodePreviewResponse, EntryBody, LexiconEntryDto,
  LexiconResponse, MutationResponse, RefwordSuggestion, ViolationDto,
  WordRow,
} from './types.js';

export interface AppState {
  revision: number;
  entries: LexiconEntryDto[];
  violations: ViolationDto[];
  corpusWords: string[];
  classSuggestions: ClassSuggestion[];
  refwordSuggestions: Record<string, RefwordSuggestion[]>;
  preview: DecodePreviewResponse | null;
  previewDisabled: string | null;
  suggestionsDisabled: string | null;
  banner: string | null;
  needsReload: boolean;
}

export function initialState(): AppState {
  return {
    revision: 0,
    entries: [],
    violations: [],
    corpusWords: [],
    classSuggestions: [],
    refwordSuggestions: {},
    preview: null,
    previewDisabled: null,
    suggestionsDisabled: null,
    banner: null,
    needsReload: false,
  };
}

export function applyLexicon(state: AppState, resp: LexiconResponse): AppState {
  return { ...state, revision: resp.revision, entries: resp.entries, banner: null };
}

export function applyViolations(state: AppState, revision: number,
                                violations: ViolationDto[]): AppState {
  return { ...state, revision, violations };
}

/** After a PUT: merge the edited entry, adopt the returned revision and the
 * fresh violation list.  A revision jump by more than one means our view
 * was stale before the edit. */
export function applyUpsert(state: AppState, surface: string, body: EntryBody,
                            resp: MutationResponse): AppState {
  const entry: LexiconEntryDto = { surface, ...body };
  const entries = state.entries.filter((e) => e.surface !== surface).concat(entry);
  entries.sort((a, b) => (a.surface < b.surface ? -1 : a.surface > b.surface ? 1 : 0));
  return {
    ...state,
    revision: resp.revision,
    entries,
    violations: resp.violations,
    needsReload: state.needsReload || resp.revision !== state.revision + 1,
  };
}

export function applyDelete(state: AppState, surface: string,
                            revision: number): AppState {
  return {
    ...state,
    revision,
    entries: state.entries.filter((e) => e.surface !== surface),
    needsReload: state.needsReload || revision !== state.revision + 1,
  };
}

export function applyClassSuggestions(state: AppState,
                                      classes: ClassSuggestion[]): AppState {
  const corpusWords = [...new Set(classes.flatMap((c) => c.members))].sort();
  return { ...state, classSuggestions: classes, corpusWords,
           suggestionsDisabled: null };
}

export function applyServiceDown(state: AppState, detail: string): AppState {
  return { ...state, banner: `service unreachable: ${detail}` };
}

/** Word table rows: lexicon entries plus corpus words not yet annotated.
 * A word is in-violation when any current violation names it. */
export function wordRows(state: AppState): WordRow[] {
  const flagged = new Set(state.violations.flatMap((v) => v.entries));
  const bySurface = new Map(state.entries.map((e) => [e.surface, e]));
  const surfaces = new Set<string>([
    ...bySurface.keys(),
    ...state.corpusWords,
  ]);
  return [...surfaces].sort().map((surface) => {
    const entry = bySurface.get(surface) ?? null;
    const status = flagged.has(surface)
      ? 'in-violation'
      : entry ? 'annotated' : 'unannotated';
    return { surface, status, entry };
  });
}

export function knownClasses(state: AppState): string[] {
  const names = new Set<string>(state.entries.map((e) => e.semantic_class));
  for (const c of state.classSuggestions) {
    names.add(c.class_id);
  }
  return [...names].sort();
}

export function knownSynonymSets(state: AppState): string[] {
  const names = new Set<string>();
  for (const e of state.entries) {
    if (e.synonym_set) {
      names.add(e.synonym_set);
    }
  }
  return [...names].sort();
}
