/** Payload shapes of the annotation service JSON API, mirrored one-to-one. */

export const GENDERS = ['masculine', 'feminine', 'unspecified'] as const;
export const NUMBERS = ['singular', 'dual', 'plural', 'unspecified'] as const;

export interface LexiconEntryDto {
  surface: string;
  field: string;
  semantic_class: string;
  micro_trait: string;
  gender: string;
  number: string;
  nature: string;
  synonym_set: string | null;
}

/** Body of PUT /lexicon/{surface}: the entry minus its surface. */
export type EntryBody = Omit<LexiconEntryDto, 'surface'>;

export interface ViolationDto {
  constraint_id: string;
  entries: string[];
  message: string;
}

export interface LexiconResponse {
  revision: number;
  entries: LexiconEntryDto[];
}

export interface MutationResponse {
  revision: number;
  violations: ViolationDto[];
}

export interface ClassSuggestion {
  class_id: string;
  members: string[];
}

export interface ClassSuggestionsResponse {
  k: number;
  classes: ClassSuggestion[];
}

export interface RefwordSuggestion {
  tokens: string[];
  weight: number;
}

export type RefwordSuggestionsResponse = Record<string, RefwordSuggestion[]>;

export interface DecodedLabel {
  token: string;
  semantic_class: string;
  micro_trait: string;
  probability: number;
}

export interface DecodePreviewResponse {
  utterance_type: { type_id: string; probability: number };
  labels: DecodedLabel[];
  skipped: string[];
}

export type AnnotationStatus = 'unannotated' | 'annotated' | 'in-violation';

export interface WordRow {
  surface: string;
  status: AnnotationStatus;
  entry: LexiconEntryDto | null;
}
