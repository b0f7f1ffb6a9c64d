# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: Walsh-Hadamard butterflies, profile enumeration
over the six-atom Condorcet source, manipulation census over ranking
profiles and one synchronous majority-dynamics step.

Every routine has a numpy twin in ``_kernels_py`` with identical
semantics; ``qsc.kernels`` picks one at import.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()


def wht_inplace(double[::1] a):
    """Unnormalised butterfly; ``a[S]`` becomes sum_x a[x] (-1)^{|S & x|}."""
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double u, v
    with nogil:
        while h < size:
            i = 0
            while i < size:
                for j in range(i, i + h):
                    u = a[j]
                    v = a[j + h]
                    a[j] = u + v
                    a[j + h] = u - v
                i += 2 * h
            h *= 2


def triple_agree_count(const signed char[::1] f, const signed char[::1] g,
                       const signed char[::1] h,
                       const long long[::1] low_x, const long long[::1] low_y,
                       const long long[::1] low_z,
                       const long long[::1] high_x, const long long[::1] high_y,
                       const long long[::1] high_z, int num_threads=1):
    """Count (low, high) index pairs with f[x] == g[y] == h[z].

    Masks for a full profile are ``low | high``; the caller splits the
    voters into two halves and precomputes the partial masks.
    """
    cdef Py_ssize_t nl = low_x.shape[0], nh = high_x.shape[0]
    cdef Py_ssize_t a, b
    cdef long long total = 0
    cdef long long hx, hy, hz
    cdef signed char fv
    for b in prange(nh, nogil=True, num_threads=num_threads,
                    schedule="static"):
        hx = high_x[b]
        hy = high_y[b]
        hz = high_z[b]
        for a in range(nl):
            fv = f[low_x[a] | hx]
            if fv == g[low_y[a] | hy] and fv == h[low_z[a] | hz]:
                total += 1
    return total


def manipulation_min_span(const unsigned char[::1] table, int m, int n,
                          const int[:, ::1] pos, const int[:, ::1] span,
                          int num_threads=1):
    """Smallest adjacent-block size of a profitable single-voter misreport.

    ``pos[p, a]`` is the position of alternative ``a`` in ranking ``p``
    (0 = top) and ``span[p, q]`` the length of the shortest contiguous
    block outside of which rankings ``p`` and ``q`` agree.  Returns 0 for
    profiles where no voter can profit.
    """
    cdef Py_ssize_t total = table.shape[0]
    out_arr = np.zeros(total, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef long long[::1] stride = np.array(
        [m ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    cdef Py_ssize_t idx
    cdef int i, d, q, best, here, alt, s
    cdef long long base
    for idx in prange(total, nogil=True, num_threads=num_threads,
                      schedule="static"):
        here = table[idx]
        best = 0
        for i in range(n):
            d = (idx // stride[i]) % m
            base = idx - d * stride[i]
            for q in range(m):
                if q == d:
                    continue
                alt = table[base + q * stride[i]]
                if pos[d, alt] < pos[d, here]:
                    s = span[d, q]
                    if best == 0 or s < best:
                        best = s
        out[idx] = best
    return out_arr


def majority_step(const long long[::1] indptr, const long long[::1] indices,
                  const signed char[::1] state):
    """Synchronous update X_v <- sign(sum of neighbour opinions)."""
    cdef Py_ssize_t nv = state.shape[0]
    new_arr = np.empty(nv, dtype=np.int8)
    cdef signed char[::1] new = new_arr
    cdef Py_ssize_t v, e
    cdef long long acc
    with nogil:
        for v in range(nv):
            acc = 0
            for e in range(indptr[v], indptr[v + 1]):
                acc += state[indices[e]]
            new[v] = 1 if acc > 0 else -1
    return new_arr
