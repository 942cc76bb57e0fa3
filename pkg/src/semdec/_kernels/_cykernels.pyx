# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the numeric hot kernels.

Must mirror pykernels.py exactly; the test suite cross-checks the two
backends to 1e-12.
"""

from libc.math cimport log2, INFINITY

BACKEND = "cython"


cdef inline double _mi_cells(double n11, double n_target, double n_cand,
                             double total, double alpha) nogil:
    cdef double c11 = n11 + alpha
    cdef double c10 = (n_target - n11) + alpha
    cdef double c01 = (n_cand - n11) + alpha
    cdef double c00 = (total - n_target - n_cand + n11) + alpha
    cdef double t = total + 4.0 * alpha
    if t <= 0.0:
        return 0.0
    cdef double p11 = c11 / t
    cdef double p10 = c10 / t
    cdef double p01 = c01 / t
    cdef double p00 = c00 / t
    cdef double r1 = p11 + p10
    cdef double r0 = p01 + p00
    cdef double c1 = p11 + p01
    cdef double c0 = p10 + p00
    cdef double mi = 0.0
    if p11 > 0.0:
        mi += p11 * log2(p11 / (r1 * c1))
    if p10 > 0.0:
        mi += p10 * log2(p10 / (r1 * c0))
    if p01 > 0.0:
        mi += p01 * log2(p01 / (r0 * c1))
    if p00 > 0.0:
        mi += p00 * log2(p00 / (r0 * c0))
    return mi


def mi_avg_counts(double n11, double n_target, double n_cand,
                  double total, double alpha=0.0):
    """Average mutual information (bits) of the two occurrence indicators."""
    return _mi_cells(n11, n_target, n_cand, total, alpha)


def pmi_counts(double n11, double n_target, double n_cand, double total):
    """Pointwise mutual information; zero joint count yields -inf."""
    if n11 <= 0.0:
        return -INFINITY
    return log2((n11 * total) / (n_target * n_cand))


def rank_top2_counts(double[:] joint, double[:] cand_marg, double n_target,
                     double total, double alpha=0.0):
    """Top-2 candidates by mi_avg_counts; ties break toward larger index."""
    cdef Py_ssize_t n = joint.shape[0]
    cdef Py_ssize_t i
    cdef Py_ssize_t best_i = -1, second_i = -1
    cdef double best_s = 0.0, second_s = 0.0, s
    for i in range(n):
        s = _mi_cells(joint[i], n_target, cand_marg[i], total, alpha)
        if best_i < 0 or s >= best_s:
            second_i = best_i
            second_s = best_s
            best_i = i
            best_s = s
        elif second_i < 0 or s >= second_s:
            second_i = i
            second_s = s
    return best_i, best_s, second_i, second_s
