"""Pure numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or ``MCELIECE_KEM_PURE=1``.
Signatures match :mod:`mceliece_kem._ckernels` exactly.
"""
import numpy as np


def rref_inplace(m, ncols):
    """Reduce a packed GF(2) matrix to reduced row echelon form in place.

    ``m`` is a C-contiguous ``uint64`` array of shape (rows, words); bit ``c``
    of a row lives in word ``c >> 6`` at position ``c & 63``.  Returns the
    pivot columns as an ``int64`` array.
    """
    nrows = m.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        wi = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        hits = np.flatnonzero(m[r:, wi] & bit)
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        mask = (m[:, wi] & bit) != 0
        mask[r] = False
        if mask.any():
            m[mask, wi:] ^= m[r, wi:]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def bitflip(rows, col_ptr, col_rows, y, max_iterations, thresholds, majority):
    """Parallel bit-flipping over a sparse parity-check matrix.

    Returns ``(word, iterations, converged)`` where ``word`` is the corrected
    word (``uint8`` per bit).  An empty ``thresholds`` array selects the
    adaptive rule ``max(majority, max unsatisfied count)``.
    """
    n = y.shape[0]
    rw = rows.shape[1]
    flat = rows.ravel()
    x = y.astype(np.uint8, copy=True)
    s = np.bitwise_xor.reduce(x[rows], axis=1)
    for it in range(max_iterations):
        if not s.any():
            return x, it, True
        upc = np.bincount(flat, weights=np.repeat(s, rw), minlength=n)
        if thresholds.shape[0]:
            t = thresholds[min(it, thresholds.shape[0] - 1)]
        else:
            t = max(majority, int(upc.max()))
        flip = np.flatnonzero(upc >= t)
        if flip.size == 0:
            return x, it, False
        x[flip] ^= 1
        s = np.bitwise_xor.reduce(x[rows], axis=1)
    return x, max_iterations, not s.any()
