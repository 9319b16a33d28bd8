"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``MCELIECE_KEM_PURE=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("MCELIECE_KEM_PURE") == "1":
    _impl = _pykernels
    BACKEND = "numpy"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "numpy"

rref_inplace = _impl.rref_inplace
bitflip = _impl.bitflip

__all__ = ["BACKEND", "bitflip", "rref_inplace"]
