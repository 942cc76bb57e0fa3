"""Utterance pre-processing: tokenize, merge multiword units, drop blanks.

Tokens are kept in logical (reading) order throughout; right-to-left
rendering of Arabic is a display concern for the UI, so "preceding word"
always means an earlier position here.
"""

import unicodedata
from dataclasses import dataclass, field
from typing import Optional

Span = tuple


@dataclass(frozen=True)
class Token:
    surface: str
    position: int
    original_span: Span  # (start, end) character offsets in the raw utterance


@dataclass
class PreprocessConfig:
    blank_words: set = field(default_factory=set)
    merge_rules: list = field(default_factory=list)  # [(lhs token tuple, merged surface)]
    normalize: bool = True

    def __post_init__(self):
        for lhs, _ in self.merge_rules:
            if not lhs:
                raise ValueError("merge rule with empty left-hand side")


def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(raw: str, config: Optional[PreprocessConfig] = None) -> list:
    """Whitespace split with punctuation marks detached as separate tokens.

    Spans index into the raw string; surfaces are NFC-normalized when the
    config asks for it (the default).
    """
    config = config or PreprocessConfig()
    pieces = []
    start = None
    for i, ch in enumerate(raw):
        if ch.isspace():
            if start is not None:
                pieces.append((start, i))
                start = None
        elif start is None:
            start = i
    if start is not None:
        pieces.append((start, len(raw)))

    spans = []
    for s, e in pieces:
        # peel leading/trailing punctuation runs into their own tokens
        lead = s
        while lead < e and _is_punct(raw[lead]):
            spans.append((lead, lead + 1))
            lead += 1
        tail = []
        trail = e
        while trail > lead and _is_punct(raw[trail - 1]):
            tail.append((trail - 1, trail))
            trail -= 1
        if lead < trail:
            spans.append((lead, trail))
        spans.extend(reversed(tail))

    tokens = []
    for pos, (s, e) in enumerate(spans):
        surface = raw[s:e]
        if config.normalize:
            surface = _nfc(surface)
        tokens.append(Token(surface, pos, (s, e)))
    return tokens


def _merge_pass(tokens: list, config: PreprocessConfig) -> list:
    """Greedy leftmost merge: longest matching rule, then rule order."""
    rules = [(tuple(lhs), merged) for lhs, merged in config.merge_rules]
    out = []
    i = 0
    while i < len(tokens):
        best = None
        for lhs, merged in rules:
            n = len(lhs)
            if tuple(t.surface for t in tokens[i:i + n]) == lhs:
                if best is None or n > len(best[0]):
                    best = (lhs, merged)
        if best is not None:
            n = len(best[0])
            span = (tokens[i].original_span[0], tokens[i + n - 1].original_span[1])
            out.append((best[1], span))
            i += n
        else:
            out.append((tokens[i].surface, tokens[i].original_span))
            i += 1
    return out


def filter_and_merge(tokens: list, config: PreprocessConfig) -> list:
    """Apply merge rules greedily left-to-right, then drop blank words.

    Merging runs first so a multiword reference unit survives even if one
    of its components alone is blank-listed.  Positions are re-indexed
    from 0 afterwards.
    """
    kept, _ = _split_blanks(_merge_pass(tokens, config), config)
    return kept


def _split_blanks(merged_seq: list, config: PreprocessConfig):
    blanks = {_nfc(w) if config.normalize else w for w in config.blank_words}
    kept = []
    skipped = []
    for surface, span in merged_seq:
        if surface in blanks:
            skipped.append(surface)
        else:
            kept.append(Token(surface, len(kept), span))
    return kept, skipped


def preprocess(raw: str, config: Optional[PreprocessConfig] = None) -> list:
    config = config or PreprocessConfig()
    return filter_and_merge(tokenize(raw, config), config)


def preprocess_with_skipped(raw: str, config: Optional[PreprocessConfig] = None):
    """Like preprocess, but also reports the eliminated blank words."""
    config = config or PreprocessConfig()
    return _split_blanks(_merge_pass(tokenize(raw, config), config), config)


def load_blank_words(path) -> set:
    """One surface per line; '#' comments."""
    out = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                out.add(_nfc(line))
    return out


def load_merge_rules(path) -> list:
    """Lines of `surface1 surface2 ...<TAB>merged_surface`."""
    rules = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                lhs, merged = line.split("\t")
            except ValueError:
                raise ValueError(f"merge-rule line {lineno}: expected one TAB") from None
            rules.append((tuple(_nfc(t) for t in lhs.split()), _nfc(merged)))
    return rules


def parse_config(blank_words_path=None, merge_rules_path=None,
                 normalize: bool = True) -> PreprocessConfig:
    return PreprocessConfig(
        blank_words=load_blank_words(blank_words_path) if blank_words_path else set(),
        merge_rules=load_merge_rules(merge_rules_path) if merge_rules_path else [],
        normalize=normalize,
    )
