"""Machine-side lexicon building: reference-word extraction and class induction.

Reference words are 1-3 token patterns whose weight, an Okapi-style
length-normalized tf-idf, exceeds a threshold for one utterance type.
Pattern components may be separated by up to max_gap intervening tokens.
Semantic classes are induced by k-means over co-occurrence count vectors.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence

import numpy as np

from semdec.corpus import TypedCorpus


@dataclass(frozen=True)
class ReferenceWord:
    tokens: tuple  # 1-3 surfaces
    type_id: str
    weight: float
    max_gap: int = 3

    def __post_init__(self):
        if not 1 <= len(self.tokens) <= 3:
            raise ValueError(f"reference word needs 1-3 tokens, got {len(self.tokens)}")

    @property
    def key(self) -> str:
        return " ".join(self.tokens)


@dataclass
class ClassCatalog:
    classes: list  # (class_id, tuple of member surfaces)
    k: int

    def __post_init__(self):
        if len(self.classes) != self.k:
            raise ValueError("class count does not match k")
        members = [m for _, ms in self.classes for m in ms]
        if len(members) != len(set(members)):
            raise ValueError("classes must partition the vocabulary")
        for cid, ms in self.classes:
            if not ms:
                raise ValueError(f"class {cid!r} is empty")


def _as_pattern(term) -> tuple:
    if isinstance(term, str):
        return (term,)
    return tuple(term)


def _match_end(tokens: Sequence[str], start: int, pattern: tuple, max_gap: int):
    """Position of the last component if a match starts at `start`, else None.

    Each next component must appear within max_gap intervening tokens of
    the previous one; the nearest occurrence is taken.
    """
    pos = start
    for comp in pattern[1:]:
        limit = min(pos + 2 + max_gap, len(tokens))
        for j in range(pos + 1, limit):
            if tokens[j] == comp:
                pos = j
                break
        else:
            return None
    return pos


def count_matches(tokens: Sequence[str], pattern, max_gap: int = 3) -> int:
    """Number of non-overlapping matches, scanning left to right."""
    pattern = _as_pattern(pattern)
    count = 0
    i = 0
    while i < len(tokens):
        if tokens[i] == pattern[0]:
            end = _match_end(tokens, i, pattern, max_gap)
            if end is not None:
                count += 1
                i = end + 1
                continue
        i += 1
    return count


def tfidf_weight(term, type_id: str, corpus: TypedCorpus, max_gap: int = 3) -> float:
    """Length-normalized tf-idf weight of a token n-gram within one type.

    tf is the match count of the n-gram over the type's utterances, df the
    number of types containing at least one match, and the denominator
    penalizes types longer than the average type length.  Natural log
    throughout.  Returns 0 when tf = 0, when the term occurs in every type
    (idf vanishes), or when the term is absent from the corpus entirely
    (df = 0; distinguishable from a positive score via `doc_frequency`).
    """
    pattern = _as_pattern(term)
    if not pattern or not all(pattern):
        raise ValueError("term must be a non-empty token n-gram")
    n = len(corpus.types)
    tf = sum(count_matches(toks, pattern, max_gap)
             for toks in corpus.tokens_of_type(type_id))
    if tf == 0:
        return 0.0
    df = doc_frequency(pattern, corpus, max_gap)
    if df == 0 or df == n:
        return 0.0
    lengths = {t: sum(len(toks) for toks in corpus.tokens_of_type(t))
               for t in corpus.types}
    avg_len = sum(lengths.values()) / n
    num = tf * math.log(n / df)
    den = tf + 0.5 + 1.5 * (lengths[type_id] / avg_len) * math.log(n + 1)
    return num / den


def doc_frequency(term, corpus: TypedCorpus, max_gap: int = 3) -> int:
    """Number of types whose utterances contain at least one match."""
    pattern = _as_pattern(term)
    df = 0
    for t in corpus.types:
        if any(count_matches(toks, pattern, max_gap) > 0
               for toks in corpus.tokens_of_type(t)):
            df += 1
    return df


def candidate_ngrams(corpus: TypedCorpus, max_ngram: int = 3,
                     max_gap: int = 3) -> set:
    """All 1..max_ngram token patterns realizable somewhere in the corpus."""
    cands = set()
    for _, toks in corpus.utterances:
        n = len(toks)
        for i in range(n):
            cands.add((toks[i],))
            if max_ngram < 2:
                continue
            for j in range(i + 1, min(i + 2 + max_gap, n)):
                cands.add((toks[i], toks[j]))
                if max_ngram < 3:
                    continue
                for k in range(j + 1, min(j + 2 + max_gap, n)):
                    cands.add((toks[i], toks[j], toks[k]))
    return cands


def extract_reference_words(corpus: TypedCorpus, threshold: float,
                            max_ngram: int = 3, max_gap: int = 3) -> Dict[str, list]:
    """Per type, the n-grams whose weight strictly exceeds the threshold.

    Sorted descending by weight within each type (ties by tokens).
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    cands = candidate_ngrams(corpus, max_ngram, max_gap)
    out: Dict[str, list] = {t: [] for t in corpus.types}
    for t in corpus.types:
        scored = []
        for pattern in cands:
            w = tfidf_weight(pattern, t, corpus, max_gap)
            if w > threshold:
                scored.append(ReferenceWord(pattern, t, w, max_gap))
        scored.sort(key=lambda r: (-r.weight, r.tokens))
        out[t] = scored
    return out


def _embed_vocabulary(corpus: TypedCorpus, top_contexts: int = 100,
                      window: int = 2):
    """Co-occurrence count vectors over the top-V frequent context words."""
    counts: Dict[str, int] = {}
    for _, toks in corpus.utterances:
        for tok in toks:
            counts[tok] = counts.get(tok, 0) + 1
    vocab = sorted(counts)
    contexts = sorted(counts, key=lambda w: (-counts[w], w))[:top_contexts]
    ctx_index = {w: i for i, w in enumerate(contexts)}
    vectors = np.zeros((len(vocab), len(contexts)), dtype=np.float64)
    w_index = {w: i for i, w in enumerate(vocab)}
    for _, toks in corpus.utterances:
        for i, tok in enumerate(toks):
            lo = max(0, i - window)
            hi = min(len(toks), i + window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                ci = ctx_index.get(toks[j])
                if ci is not None:
                    vectors[w_index[tok], ci] += 1.0
    return vocab, vectors


def _lloyd(vectors, init_indices, max_iters: int):
    """One Lloyd's run from the given initial points.

    Nearest-centroid ties break toward the lowest centroid index; an
    emptied cluster is reseeded with the point farthest from its assigned
    centroid (which keeps the objective non-increasing).  Returns the
    final assignment, its objective, and the per-iteration objective
    trace (monotone non-increasing by construction).
    """
    k = len(init_indices)
    n = len(vectors)
    centroids = vectors[init_indices].copy()
    assign = np.full(n, -1, dtype=np.int64)
    history = []
    for _ in range(max_iters):
        d2 = ((vectors[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = np.argmin(d2, axis=1)  # first minimum = lowest index
        for c in range(k):
            if not np.any(new_assign == c):
                point_d2 = d2[np.arange(n), new_assign]
                donors = np.flatnonzero(
                    np.bincount(new_assign, minlength=k)[new_assign] > 1)
                steal = donors[np.argmax(point_d2[donors])]
                new_assign[steal] = c
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            centroids[c] = vectors[assign == c].mean(axis=0)
        history.append(float(((vectors - centroids[assign]) ** 2).sum()))
    objective = float(((vectors - centroids[assign]) ** 2).sum())
    return assign, objective, history


def kmeans_classes(corpus: TypedCorpus, k: int, max_iters: int = 100,
                   seed: int = 0, top_contexts: int = 100,
                   window: int = 2, n_init: int = 10) -> ClassCatalog:
    """Partition the corpus vocabulary into k classes by Lloyd's iteration.

    Deterministic for a fixed seed.  Each restart initializes from k
    points sampled without replacement; the run with the lowest final
    sum of squared distances wins (first such run on ties).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    vocab, vectors = _embed_vocabulary(corpus, top_contexts, window)
    if len(vocab) < k:
        raise ValueError(f"vocabulary size {len(vocab)} is smaller than k={k}")

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max(1, n_init)):
        init = rng.choice(len(vocab), size=k, replace=False)
        assign, objective, _ = _lloyd(vectors, init, max_iters)
        if best is None or objective < best[0]:
            best = (objective, assign)

    classes = []
    for c in range(k):
        members = tuple(vocab[i] for i in np.flatnonzero(best[1] == c))
        classes.append((f"k{c}", members))
    return ClassCatalog(classes=classes, k=k)


def kmeans_objective(corpus: TypedCorpus, catalog: ClassCatalog,
                     top_contexts: int = 100, window: int = 2) -> float:
    """Sum of squared distances to class centroids, for inspection/tests."""
    vocab, vectors = _embed_vocabulary(corpus, top_contexts, window)
    index = {w: i for i, w in enumerate(vocab)}
    total = 0.0
    for _, members in catalog.classes:
        pts = vectors[[index[m] for m in members]]
        total += float(((pts - pts.mean(axis=0)) ** 2).sum())
    return total


def serialize_reference_words(refwords: Iterable[ReferenceWord]) -> str:
    lines = [f"{r.type_id}\t{r.key}\t{r.weight!r}" for r in refwords]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_reference_words(lines: Iterable[str], max_gap: int = 3) -> List[ReferenceWord]:
    out = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"reference-word line {lineno}: expected 3 fields")
        out.append(ReferenceWord(tuple(parts[1].split()), parts[0],
                                 float(parts[2]), max_gap))
    return out


def load_reference_words(path, max_gap: int = 3) -> List[ReferenceWord]:
    with open(path, encoding="utf-8") as f:
        return parse_reference_words(f, max_gap)


def save_reference_words(refwords: Iterable[ReferenceWord], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_reference_words(refwords))
