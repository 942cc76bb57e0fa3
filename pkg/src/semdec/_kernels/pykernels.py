"""Pure-Python reference implementations of the numeric hot kernels.

These are the fallback used when the compiled extension is unavailable.
Both backends must agree to within 1e-12 (enforced by the test suite).

All functions work on raw co-occurrence counts.  For a word pair the
2x2 indicator table is

    n11 = count(both occur)          n10 = count(target only)
    n01 = count(candidate only)      n00 = count(neither)

derived from joint, target-marginal and candidate-marginal counts plus
the total observation count.  `alpha` is an optional add-alpha smoothing
applied to each of the four cells (0.0 disables it).
"""

import math

BACKEND = "python"


def mi_avg_counts(n11: float, n_target: float, n_cand: float,
                  total: float, alpha: float = 0.0) -> float:
    """Average mutual information (bits) of the two occurrence indicators.

    Convention 0*log(0) = 0.  Degenerate input (both marginals zero and
    no smoothing) yields 0.0.
    """
    c11 = n11 + alpha
    c10 = (n_target - n11) + alpha
    c01 = (n_cand - n11) + alpha
    c00 = (total - n_target - n_cand + n11) + alpha
    t = total + 4.0 * alpha
    if t <= 0.0:
        return 0.0
    p11 = c11 / t
    p10 = c10 / t
    p01 = c01 / t
    p00 = c00 / t
    r1 = p11 + p10
    r0 = p01 + p00
    c1 = p11 + p01
    c0 = p10 + p00
    mi = 0.0
    if p11 > 0.0:
        mi += p11 * math.log2(p11 / (r1 * c1))
    if p10 > 0.0:
        mi += p10 * math.log2(p10 / (r1 * c0))
    if p01 > 0.0:
        mi += p01 * math.log2(p01 / (r0 * c1))
    if p00 > 0.0:
        mi += p00 * math.log2(p00 / (r0 * c0))
    return mi


def pmi_counts(n11: float, n_target: float, n_cand: float, total: float) -> float:
    """Pointwise mutual information log2[P(w,v) / (P(w) P(v))].

    Zero joint count yields -inf; zero marginals are the caller's
    precondition to reject.
    """
    if n11 <= 0.0:
        return float("-inf")
    return math.log2((n11 * total) / (n_target * n_cand))


def rank_top2_counts(joint, cand_marg, n_target: float, total: float,
                     alpha: float = 0.0):
    """Scan candidates by mi_avg_counts, returning the top two.

    Ties break toward the larger index (the candidate nearer the target
    when candidates are listed in utterance order).  Returns
    (best_idx, best_score, second_idx, second_score); missing slots are
    index -1 with score 0.0.
    """
    best_i = -1
    best_s = 0.0
    second_i = -1
    second_s = 0.0
    for i in range(len(joint)):
        s = mi_avg_counts(joint[i], n_target, cand_marg[i], total, alpha)
        if best_i < 0 or s >= best_s:
            second_i = best_i
            second_s = best_s
            best_i = i
            best_s = s
        elif second_i < 0 or s >= second_s:
            second_i = i
            second_s = s
    return best_i, best_s, second_i, second_s
