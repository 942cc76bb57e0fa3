import { describe, expect, it } from 'vitest';

import {
  escapeHtml, renderBanner, renderPreview, renderViolations, renderWordTable,
} from '../src/render.js';
import { applyLexicon, applyViolations, initialState } from '../src/state.js';
import type { DecodePreviewResponse } from '../src/types.js';

// Recorded from the running service; the CLI decode of the same tokens
// produces: book  ref_book/act/act_book trg_plc_0/plc/plc_t
//                 fil_3/fil/fil_t amb_a_0/obj_p/tp
const PREVIEW_FIXTURE: DecodePreviewResponse = {
  utterance_type: { type_id: 'book', probability: 1.0 },
  labels: [
    { token: 'ref_book', semantic_class: 'act', micro_trait: 'act_book',
      probability: 0.23232771724347592 },
    { token: 'trg_plc_0', semantic_class: 'plc', micro_trait: 'plc_t',
      probability: 0.4859437751004016 },
    { token: 'fil_3', semantic_class: 'fil', micro_trait: 'fil_t',
      probability: 0.4046511627906977 },
    { token: 'amb_a_0', semantic_class: 'obj_p', micro_trait: 'tp',
      probability: 0.5627906976744186 },
  ],
  skipped: [],
};

const CLI_DECODE_LINE =
  'book\tref_book/act/act_book trg_plc_0/plc/plc_t fil_3/fil/fil_t amb_a_0/obj_p/tp';

function stateWithEntry() {
  let state = initialState();
  state = applyLexicon(state, {
    revision: 1,
    entries: [{
      surface: 'الذاهب', field: 'نقل', semantic_class: 'حركة',
      micro_trait: 'وجهة', gender: 'masculine', number: 'singular',
      nature: 'name', synonym_set: null,
    }],
  });
  return state;
}

describe('word table', () => {
  it('renders the word column right-to-left and metadata left-to-right', () => {
    const html = renderWordTable(stateWithEntry());
    expect(html).toContain('<td dir="rtl" class="surface">الذاهب</td>');
    expect(html).toContain('<td dir="ltr">حركة</td>');
    expect(html).toContain('<th dir="rtl">word</th>');
    expect(html).not.toContain('<table dir=');
  });

  it('marks violating words', () => {
    let state = stateWithEntry();
    state = applyViolations(state, 1, [{
      constraint_id: 'C1', entries: ['الذاهب'], message: 'dup',
    }]);
    expect(renderWordTable(state)).toContain('status-in-violation');
  });

  it('escapes markup in surfaces', () => {
    let state = initialState();
    state = applyLexicon(state, {
      revision: 1,
      entries: [{
        surface: '<b>x</b>', field: 'f', semantic_class: 'c',
        micro_trait: 't', gender: 'unspecified', number: 'unspecified',
        nature: 'name', synonym_set: null,
      }],
    });
    const html = renderWordTable(state);
    expect(html).toContain('&lt;b&gt;x&lt;/b&gt;');
    expect(html).not.toContain('<b>x</b>');
  });
});

describe('violation panel', () => {
  it('lists constraint ids with the offending surfaces', () => {
    const html = renderViolations([
      { constraint_id: 'C1', entries: ['w1', 'w2'], message: 'shared FSe' },
    ]);
    expect(html).toContain('<code>C1</code>');
    expect(html).toContain('w1');
    expect(html).toContain('shared FSe');
  });

  it('reports a clean lexicon', () => {
    expect(renderViolations([])).toContain('no violations');
  });
});

describe('decode preview', () => {
  it('renders the fixture exactly as the CLI labels the same tokens', () => {
    const state = { ...initialState(), preview: PREVIEW_FIXTURE };
    const html = renderPreview(state);
    const [cliType, cliWords] = CLI_DECODE_LINE.split('\t');
    expect(html).toContain(`type: <code>${cliType}</code>`);
    for (const word of cliWords.split(' ')) {
      const [token, cls, trait] = word.split('/');
      expect(html).toContain(`<span dir="rtl">${token}</span>`);
      expect(html).toContain(`${cls}/${trait}`);
    }
  });

  it('explains a disabled preview', () => {
    const state = {
      ...initialState(),
      previewDisabled: 'preview unavailable: no trained model loaded',
    };
    expect(renderPreview(state)).toContain('no trained model loaded');
  });
});

describe('banner', () => {
  it('offers retry when the service is down', () => {
    const state = { ...initialState(), banner: 'service unreachable: x' };
    expect(renderBanner(state)).toContain('retry');
  });

  it('offers reload when the revision went stale', () => {
    const state = { ...initialState(), needsReload: true };
    expect(renderBanner(state)).toContain('reload');
  });

  it('is empty when healthy', () => {
    expect(renderBanner(initialState())).toBe('');
  });
});

describe('escapeHtml', () => {
  it('escapes the four html metacharacters', () => {
    expect(escapeHtml('<a href="x">&</a>'))
      .toBe('&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;');
  });
});
