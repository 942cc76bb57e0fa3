"""Corpus containers and their line-oriented file formats.

Typed corpus:   `type_id<TAB>token token ...`
Labeled corpus: `type_id<TAB>token/class/trait token/class/trait ...`

Tokens may not contain whitespace; class and trait ids may not contain
'/' or whitespace (word fields are split from the right, so tokens with
'/' would be ambiguous and are rejected on write).
"""

import unicodedata
from dataclasses import dataclass
from typing import Iterable, List


@dataclass(frozen=True)
class LabeledWord:
    token: str
    semantic_class: str
    micro_trait: str


@dataclass(frozen=True)
class LabeledUtterance:
    type_id: str
    words: tuple  # of LabeledWord


@dataclass
class LabeledCorpus:
    utterances: List[LabeledUtterance]

    def __len__(self):
        return len(self.utterances)

    def __iter__(self):
        return iter(self.utterances)

    def types(self) -> list:
        seen = []
        for u in self.utterances:
            if u.type_id not in seen:
                seen.append(u.type_id)
        return seen


@dataclass
class TypedCorpus:
    """Preprocessed utterances grouped by utterance type."""
    types: List[str]
    utterances: List[tuple]  # (type_id, token tuple)

    def __post_init__(self):
        if not self.types:
            raise ValueError("typed corpus needs at least one type")
        known = set(self.types)
        for type_id, _ in self.utterances:
            if type_id not in known:
                raise ValueError(f"utterance type {type_id!r} missing from type list")

    def tokens_of_type(self, type_id: str) -> list:
        return [toks for t, toks in self.utterances if t == type_id]


def strip_labels(corpus: LabeledCorpus) -> TypedCorpus:
    return TypedCorpus(
        types=corpus.types(),
        utterances=[(u.type_id, tuple(w.token for w in u.words)) for u in corpus],
    )


def parse_typed_corpus(lines: Iterable[str]) -> TypedCorpus:
    types: list = []
    utts = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            type_id, rest = line.split("\t", 1)
        except ValueError:
            raise ValueError(f"typed-corpus line {lineno}: missing TAB") from None
        if type_id not in types:
            types.append(type_id)
        toks = tuple(unicodedata.normalize("NFC", t) for t in rest.split())
        utts.append((type_id, toks))
    if not types:
        raise ValueError("typed corpus is empty")
    return TypedCorpus(types=types, utterances=utts)


def serialize_typed_corpus(corpus: TypedCorpus) -> str:
    lines = [f"{t}\t{' '.join(toks)}" for t, toks in corpus.utterances]
    return "\n".join(lines) + ("\n" if lines else "")


def _check_id(value: str, what: str) -> str:
    if "/" in value or any(ch.isspace() for ch in value) or not value:
        raise ValueError(f"{what} {value!r} must be non-empty, without '/' or whitespace")
    return value


def parse_labeled_corpus(lines: Iterable[str]) -> LabeledCorpus:
    utts = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 and len(parts) != 1:
            raise ValueError(f"labeled-corpus line {lineno}: expected one TAB")
        type_id = parts[0]
        words = []
        if len(parts) == 2 and parts[1].strip():
            for w in parts[1].split():
                try:
                    token, cls, trait = w.rsplit("/", 2)
                except ValueError:
                    raise ValueError(
                        f"labeled-corpus line {lineno}: bad word field {w!r}"
                    ) from None
                token = unicodedata.normalize("NFC", token)
                words.append(LabeledWord(token, cls, trait))
        utts.append(LabeledUtterance(type_id, tuple(words)))
    return LabeledCorpus(utts)


def serialize_labeled_corpus(corpus: LabeledCorpus) -> str:
    lines = []
    for u in corpus:
        fields = []
        for w in u.words:
            _check_id(w.semantic_class, "class id")
            _check_id(w.micro_trait, "trait id")
            if "/" in w.token:
                raise ValueError(f"token {w.token!r} contains '/'")
            fields.append(f"{w.token}/{w.semantic_class}/{w.micro_trait}")
        lines.append(f"{u.type_id}\t{' '.join(fields)}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_typed_corpus(path) -> TypedCorpus:
    with open(path, encoding="utf-8") as f:
        return parse_typed_corpus(f)


def load_labeled_corpus(path) -> LabeledCorpus:
    with open(path, encoding="utf-8") as f:
        return parse_labeled_corpus(f)


def save_labeled_corpus(corpus: LabeledCorpus, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_labeled_corpus(corpus))
