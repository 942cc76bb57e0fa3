"""Semantic affinity: average mutual information and pertinent-context choice.

Affinity between two words is the mutual information of their occurrence
indicators, estimated from utterance-level co-occurrence within a window:
an observation is one utterance, and a pair counts as joint when the two
words appear within `window` positions of each other.  This symmetric
estimate makes im_avg(w, v) == im_avg(v, w) exactly.

The pertinent context of a word being decoded is built from the two
preceding words with the highest affinity: their classes fill the two
class slots and the strongest one contributes its full feature group.
Missing slots at the utterance start are filled with the reserved BEGIN
marker, which participates in count tables like any class.
"""

from array import array
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

from semdec._kernels import mi_avg_counts, pmi_counts, rank_top2_counts
from semdec.lexicon import FSeGroup

BEGIN_CLASS = "__begin__"
BEGIN_TRAIT = "__begin__"
BEGIN_FIELD = "__begin__"
BEGIN_FSE = FSeGroup(BEGIN_FIELD, BEGIN_CLASS, BEGIN_TRAIT)

SMOOTH_ALPHA = 0.5  # add-1/2 on the four indicator cells


@dataclass
class CooccurrenceStats:
    """Utterance-level occurrence and windowed co-occurrence counts."""
    window: int = 5
    total: int = 0                                   # observed utterances
    marginal: Dict[str, int] = field(default_factory=dict)
    joint: Dict[Tuple[str, str], int] = field(default_factory=dict)

    @staticmethod
    def _key(w: str, v: str) -> tuple:
        return (w, v) if w <= v else (v, w)

    def add_utterance(self, tokens) -> None:
        self.total += 1
        tokens = list(tokens)
        for w in set(tokens):
            self.marginal[w] = self.marginal.get(w, 0) + 1
        pairs = set()
        for i, w in enumerate(tokens):
            hi = min(len(tokens), i + self.window + 1)
            for j in range(i + 1, hi):
                if tokens[j] != w:
                    pairs.add(self._key(w, tokens[j]))
        for p in pairs:
            self.joint[p] = self.joint.get(p, 0) + 1

    @classmethod
    def from_utterances(cls, utterances: Iterable, window: int = 5) -> "CooccurrenceStats":
        stats = cls(window=window)
        for toks in utterances:
            stats.add_utterance(toks)
        return stats

    def n(self, w: str) -> int:
        return self.marginal.get(w, 0)

    def n_joint(self, w: str, v: str) -> int:
        # A word always co-occurs with itself: the pair (w, w) is one
        # indicator variable, so its joint count is the marginal.  This
        # keeps the 2x2 cells valid (MI(X;X) = H(X)).
        if w == v:
            return self.marginal.get(w, 0)
        return self.joint.get(self._key(w, v), 0)

    def is_degenerate_pair(self, w: str, v: str) -> bool:
        return self.n(w) == 0 and self.n(v) == 0


def im_avg(stats: CooccurrenceStats, w: str, v: str, smoothed: bool = False) -> float:
    """Average mutual information (bits) of the w/v occurrence indicators.

    Nonnegative; zero exactly when the empirical joint factorizes.  A
    degenerate pair (both words unseen) scores 0.  With smoothed=True the
    four cells get add-1/2 counts, shrinking the spurious information of
    rare pairs toward zero.
    """
    if stats.total <= 0:
        raise ValueError("no observations in co-occurrence stats")
    alpha = SMOOTH_ALPHA if smoothed else 0.0
    if stats.is_degenerate_pair(w, v) and not smoothed:
        return 0.0
    return mi_avg_counts(stats.n_joint(w, v), stats.n(w), stats.n(v),
                         stats.total, alpha)


def im_pointwise(stats: CooccurrenceStats, w: str, v: str) -> float:
    """log2[P(w,v) / (P(w) P(v))]; -inf when the pair never co-occurs."""
    n_w, n_v = stats.n(w), stats.n(v)
    if n_w == 0 or n_v == 0:
        raise ValueError(f"im_pointwise needs positive marginals for {w!r}, {v!r}")
    return pmi_counts(stats.n_joint(w, v), n_w, n_v, stats.total)


def max_affinity(stats: CooccurrenceStats, target: str, candidates,
                 smoothed: bool = False) -> tuple:
    """(position, score) of the candidate with the highest im_avg.

    Ties break toward the candidate nearest the target, i.e. the largest
    position in the candidate list.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("max_affinity needs at least one candidate")
    best, score, _, _ = _rank_top2(stats, target, candidates, smoothed)
    return best, score


def _rank_top2(stats: CooccurrenceStats, target: str, candidates, smoothed: bool):
    alpha = SMOOTH_ALPHA if smoothed else 0.0
    joint = array("d", (stats.n_joint(target, c) for c in candidates))
    marg = array("d", (stats.n(c) for c in candidates))
    return rank_top2_counts(joint, marg, stats.n(target), stats.total, alpha)


@dataclass(frozen=True)
class PertinentContext:
    cp1: str                 # class of the strongest-affinity preceding word
    cp2: str                 # class of the second strongest
    fsep: FSeGroup           # full feature group of the strongest
    sources: tuple           # chosen prefix positions, strongest first


def pertinent_context(stats: CooccurrenceStats, lexicon,
                      decoded_prefix, target: str,
                      smoothed: bool = True) -> PertinentContext:
    """Select the pertinent context of `target` from its decoded prefix.

    decoded_prefix is the list of (token, FSeGroup) already labeled, in
    utterance order; the whole prefix is the candidate set.  `lexicon` is
    unused for ranking (labels come from the prefix) and accepted for
    interface symmetry with the decoder.
    """
    prefix = list(decoded_prefix)
    if not prefix:
        return PertinentContext(BEGIN_CLASS, BEGIN_CLASS, BEGIN_FSE, ())
    if len(prefix) == 1:
        tok, fse = prefix[0]
        return PertinentContext(fse.semantic_class, BEGIN_CLASS, fse, (0,))
    tokens = [tok for tok, _ in prefix]
    best, _, second, _ = _rank_top2(stats, target, tokens, smoothed)
    fse1 = prefix[best][1]
    fse2 = prefix[second][1]
    return PertinentContext(fse1.semantic_class, fse2.semantic_class,
                            fse1, (best, second))
