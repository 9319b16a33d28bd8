# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, uint8_t, int32_t, int64_t

cnp.import_array()


def rref_inplace(uint64_t[:, ::1] m, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = m.shape[0], nw = m.shape[1]
    cdef Py_ssize_t r = 0, c, wi, p, i, j
    cdef uint64_t bit, tmp
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    cdef int64_t[::1] piv = pivots
    for c in range(ncols):
        if r == nrows:
            break
        wi = c >> 6
        bit = (<uint64_t>1) << (c & 63)
        p = r
        while p < nrows and not (m[p, wi] & bit):
            p += 1
        if p == nrows:
            continue
        if p != r:
            for j in range(wi, nw):
                tmp = m[p, j]
                m[p, j] = m[r, j]
                m[r, j] = tmp
        for i in range(nrows):
            if i != r and (m[i, wi] & bit):
                for j in range(wi, nw):
                    m[i, j] ^= m[r, j]
        piv[r] = c
        r += 1
    return pivots[:r]


def bitflip(const int32_t[:, ::1] rows, const int32_t[::1] col_ptr, const int32_t[::1] col_rows,
            const uint8_t[::1] y, int max_iterations, const int32_t[::1] thresholds,
            int majority):
    cdef Py_ssize_t n = y.shape[0], nr = rows.shape[0], rw = rows.shape[1]
    cdef Py_ssize_t i, j, a, nflip, unsat = 0
    cdef int it, t, best, cnt
    cdef Py_ssize_t nthr = thresholds.shape[0]
    word = np.array(y, dtype=np.uint8, copy=True)
    cdef uint8_t[::1] x = word
    cdef uint8_t[::1] s = np.zeros(nr, dtype=np.uint8)
    cdef int32_t[::1] upc = np.zeros(n, dtype=np.int32)
    cdef uint8_t acc
    for i in range(nr):
        acc = 0
        for a in range(rw):
            acc ^= x[rows[i, a]]
        s[i] = acc
        unsat += acc
    for it in range(max_iterations):
        if unsat == 0:
            return word, it, True
        best = 0
        for j in range(n):
            cnt = 0
            for a in range(col_ptr[j], col_ptr[j + 1]):
                cnt += s[col_rows[a]]
            upc[j] = cnt
            if cnt > best:
                best = cnt
        if nthr:
            t = thresholds[it if it < nthr else nthr - 1]
        else:
            t = majority if majority > best else best
        nflip = 0
        for j in range(n):
            if upc[j] >= t:
                nflip += 1
                x[j] ^= 1
                for a in range(col_ptr[j], col_ptr[j + 1]):
                    i = col_rows[a]
                    if s[i]:
                        s[i] = 0
                        unsat -= 1
                    else:
                        s[i] = 1
                        unsat += 1
        if nflip == 0:
            return word, it, False
    return word, max_iterations, unsat == 0
