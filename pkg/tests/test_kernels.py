import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mceliece_kem import _pykernels, kernels
from mceliece_kem.codes import MdpcCode, regular_parity_rows
from mceliece_kem.gf2 import BitMatrix

try:
    from mceliece_kem import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])
needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def test_dispatch_reports_backend():
    assert kernels.BACKEND in ("cython", "numpy")


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_rref_identity_and_zero(impl):
    m = BitMatrix.identity(70).to_words().copy()
    assert impl.rref_inplace(m, 70).tolist() == list(range(70))
    z = np.zeros((3, 2), dtype=np.uint64)
    assert impl.rref_inplace(z, 100).tolist() == []


@needs_ext
@settings(max_examples=100, deadline=None)
@given(st.integers(1, 40), st.integers(1, 200), st.integers(0, 2**32))
def test_rref_backends_agree(rows, cols, seed):
    r = random.Random(seed)
    M = BitMatrix(rows, cols, tuple(r.getrandbits(cols) for _ in range(rows)))
    a, b = M.to_words().copy(), M.to_words().copy()
    pa = _pykernels.rref_inplace(a, cols)
    pb = _ckernels.rref_inplace(b, cols)
    assert pa.tolist() == pb.tolist()
    assert np.array_equal(a, b)


@needs_ext
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([(16, 8, 3), (40, 20, 5), (64, 32, 7)]),
       st.lists(st.integers(1, 6), max_size=4))
def test_bitflip_backends_agree(seed, shape, schedule):
    n, k, rw = shape
    r = random.Random(seed)
    code = MdpcCode(n, k, 3, regular_parity_rows(n, n - k, rw, r))
    y = np.array([r.getrandbits(1) if r.random() < 0.1 else 0 for _ in range(n)], dtype=np.uint8)
    thr = np.asarray(schedule, dtype=np.int32)
    out = [impl.bitflip(code.parity_rows, code._col_ptr, code._col_rows, y, 20, thr, code.majority)
           for impl in (_pykernels, _ckernels)]
    assert np.array_equal(out[0][0], out[1][0])
    assert out[0][1:] == out[1][1:]
