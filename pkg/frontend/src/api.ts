/** Thin typed client over the annotation service; every call resolves to a
 * discriminated result so callers never throw on expected failures
 * (404 on delete, 409 when a capability is not loaded, network down). */

import type {
  ClassSuggestionsResponse, DecodePreviewResponse, EntryBody,
  LexiconResponse, MutationResponse, RefwordSuggestionsResponse,
  ViolationDto,
} from './types.js';

export type ApiResult<T> =
  | { ok: true; value: T }
  | { ok: false; status: number; detail: string };

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function toResult<T>(resp: Response): Promise<ApiResult<T>> {
  let body: unknown = null;
  try {
    body = await resp.json();
  } catch {
    body = null;
  }
  if (!resp.ok) {
    const detail =
      body && typeof body === 'object' && 'detail' in body
        ? String((body as { detail: unknown }).detail)
        : resp.statusText;
    return { ok: false, status: resp.status, detail };
  }
  return { ok: true, value: body as T };
}

export class AnnotationApi {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async request<T>(path: string, init?: RequestInit): Promise<ApiResult<T>> {
    try {
      const resp = await this.fetchFn(this.baseUrl + path, init);
      return await toResult<T>(resp);
    } catch (err) {
      return { ok: false, status: 0, detail: String(err) };
    }
  }

  health(): Promise<ApiResult<{ status: string; revision: number }>> {
    return this.request('/health');
  }

  getLexicon(): Promise<ApiResult<LexiconResponse>> {
    return this.request('/lexicon');
  }

  putEntry(surface: string, body: EntryBody): Promise<ApiResult<MutationResponse>> {
    return this.request(`/lexicon/${encodeURIComponent(surface)}`, {
      method: 'PUT',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  deleteEntry(surface: string): Promise<ApiResult<{ revision: number }>> {
    return this.request(`/lexicon/${encodeURIComponent(surface)}`, {
      method: 'DELETE',
    });
  }

  validate(): Promise<ApiResult<{ revision: number; violations: ViolationDto[] }>> {
    return this.request('/validate', { method: 'POST' });
  }

  suggestClasses(k = 4, seed = 0): Promise<ApiResult<ClassSuggestionsResponse>> {
    return this.request(`/suggest/classes?k=${k}&seed=${seed}`);
  }

  suggestRefwords(threshold = 0.0): Promise<ApiResult<RefwordSuggestionsResponse>> {
    return this.request(`/suggest/refwords?threshold=${threshold}`);
  }

  decodePreview(tokens: string[]): Promise<ApiResult<DecodePreviewResponse>> {
    return this.request('/decode-preview', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ tokens }),
    });
  }
}
