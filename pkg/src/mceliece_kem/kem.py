"""The McEliece KEM with implicit rejection.

Decapsulation never fails: a word that does not decode yields
``KDF(s || psi0)`` so callers cannot tell decodable from non-decodable input.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .codes import CodeDescription, MdpcCode, decode
from .gf2 import BitMatrix, BitVector, SystemParams, mat_vec_mul, random_vector, sample_constant_weight
from .kdf import kdf_derive, kdf_payload
from .pke import family_keygen

Kdf = Callable[[BitVector, int], bytes]


@dataclass(frozen=True)
class KemPublicKey:
    G: BitMatrix
    params: SystemParams
    family: str = "toy"


@dataclass(frozen=True)
class KemPrivateKey:
    delta: CodeDescription
    s: BitVector
    params: SystemParams

    def __post_init__(self):
        if self.s.length != self.params.k:
            raise ValueError(f"s has length {self.s.length}, expected k={self.params.k}")

    @property
    def family(self) -> str:
        return "mdpc" if isinstance(self.delta, MdpcCode) else "toy"


def kem_keygen(params: SystemParams, family: str, rng: random.Random,
               **family_opts) -> tuple[KemPublicKey, KemPrivateKey]:
    delta, G = family_keygen(params, family, rng, **family_opts)
    s = random_vector(params.k, rng)
    return KemPublicKey(G, params, family), KemPrivateKey(delta, s, params)


def encaps_with(pk: KemPublicKey, x: BitVector, e: BitVector, kdf: Kdf = kdf_derive) -> tuple[bytes, BitVector]:
    """Deterministic core of :func:`encaps` for a chosen ``(x, e)``."""
    return kdf(kdf_payload(x, e), pk.params.ell_k), mat_vec_mul(x, pk.G) ^ e


def encaps(pk: KemPublicKey, rng: random.Random, kdf: Kdf = kdf_derive) -> tuple[bytes, BitVector]:
    """Returns ``(K, psi0)``."""
    x = random_vector(pk.params.k, rng)
    e = sample_constant_weight(pk.params.n, pk.params.w, rng)
    return encaps_with(pk, x, e, kdf)


def decaps(sk: KemPrivateKey, psi0: BitVector, kdf: Kdf = kdf_derive) -> bytes:
    if psi0.length != sk.params.n:
        raise ValueError(f"ciphertext length {psi0.length} != n={sk.params.n}")
    out = decode(sk.delta, psi0)
    if out.success:
        return kdf(kdf_payload(out.x, out.e), sk.params.ell_k)
    return kdf(kdf_payload(sk.s, psi0), sk.params.ell_k)
