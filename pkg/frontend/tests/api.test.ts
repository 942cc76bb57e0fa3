import { describe, expect, it } from 'vitest';

import { AnnotationApi } from '../src/api.js';
import type { FetchLike } from '../src/api.js';

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

function stubFetch(status: number, payload: unknown, log: Recorded[]): FetchLike {
  return async (url, init) => {
    log.push({
      url,
      method: init?.method ?? 'GET',
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });
    return new Response(JSON.stringify(payload), {
      status,
      headers: { 'Content-Type': 'application/json' },
    });
  };
}

describe('AnnotationApi', () => {
  it('issues PUT with the entry body and parses the mutation response', async () => {
    const log: Recorded[] = [];
    const api = new AnnotationApi('http://svc', stubFetch(200, {
      revision: 3,
      violations: [{ constraint_id: 'C1', entries: ['a', 'b'], message: 'dup' }],
    }, log));
    const result = await api.putEntry('الذاهب', {
      field: 'نقل', semantic_class: 'حركة', micro_trait: 'وجهة',
      gender: 'masculine', number: 'singular', nature: 'name', synonym_set: null,
    });
    expect(log[0].method).toBe('PUT');
    expect(log[0].url).toBe(`http://svc/lexicon/${encodeURIComponent('الذاهب')}`);
    expect(log[0].body).toMatchObject({ semantic_class: 'حركة' });
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.value.revision).toBe(3);
      expect(result.value.violations[0].constraint_id).toBe('C1');
    }
  });

  it('maps error statuses to !ok with the service detail', async () => {
    const api = new AnnotationApi('http://svc', stubFetch(409, {
      detail: 'no trained model loaded',
    }, []));
    const result = await api.decodePreview(['x']);
    expect(result).toEqual({ ok: false, status: 409, detail: 'no trained model loaded' });
  });

  it('maps network failures to status 0', async () => {
    const api = new AnnotationApi('http://svc', async () => {
      throw new Error('ECONNREFUSED');
    });
    const result = await api.getLexicon();
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(0);
      expect(result.detail).toContain('ECONNREFUSED');
    }
  });

  it('strips trailing slashes from the base url', async () => {
    const log: Recorded[] = [];
    const api = new AnnotationApi('http://svc///', stubFetch(200, { status: 'ok', revision: 0 }, log));
    await api.health();
    expect(log[0].url).toBe('http://svc/health');
  });

  it('sends selected query parameters to the suggestion endpoints', async () => {
    const log: Recorded[] = [];
    const api = new AnnotationApi('', stubFetch(200, { k: 2, classes: [] }, log));
    await api.suggestClasses(2, 7);
    expect(log[0].url).toBe('/suggest/classes?k=2&seed=7');
  });
});
