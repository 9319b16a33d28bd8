"""Plain McEliece public-key encryption over a systematic generator."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .codes import (DEFAULT_MAX_ITERATIONS, CodeDescription, MdpcCode, decode, mdpc_keygen,
                    toy_keygen)
from .gf2 import BitMatrix, BitVector, SystemParams, mat_vec_mul, sample_constant_weight

FAMILIES = ("toy", "mdpc")


@dataclass(frozen=True)
class PkePublicKey:
    G: BitMatrix
    params: SystemParams
    family: str = "toy"


@dataclass(frozen=True)
class PkePrivateKey:
    delta: CodeDescription
    params: SystemParams

    @property
    def family(self) -> str:
        return "mdpc" if isinstance(self.delta, MdpcCode) else "toy"


def family_keygen(params: SystemParams, family: str, rng: random.Random, *, row_weight: Optional[int] = None,
                  max_iterations: int = DEFAULT_MAX_ITERATIONS,
                  thresholds: Sequence[int] = ()) -> tuple[CodeDescription, BitMatrix]:
    if family == "toy":
        return toy_keygen(params, rng)
    if family == "mdpc":
        if row_weight is None:
            raise ValueError("mdpc family needs a row weight")
        return mdpc_keygen(params, row_weight, rng, max_iterations, thresholds)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def pke_keygen(params: SystemParams, family: str, rng: random.Random,
               **family_opts) -> tuple[PkePublicKey, PkePrivateKey]:
    delta, G = family_keygen(params, family, rng, **family_opts)
    return PkePublicKey(G, params, family), PkePrivateKey(delta, params)


def pke_encrypt(pk: PkePublicKey, x: BitVector, rng: random.Random) -> BitVector:
    """``y = xG + e`` with a fresh uniform error of weight ``w``."""
    if x.length != pk.params.k:
        raise ValueError(f"message length {x.length} != k={pk.params.k}")
    e = sample_constant_weight(pk.params.n, pk.params.w, rng)
    return mat_vec_mul(x, pk.G) ^ e


def pke_decrypt(sk: PkePrivateKey, y: BitVector) -> Optional[BitVector]:
    """The decoded message, or ``None`` for a decoding failure."""
    if y.length != sk.params.n:
        raise ValueError(f"ciphertext length {y.length} != n={sk.params.n}")
    out = decode(sk.delta, y)
    return out.x if out.success else None
