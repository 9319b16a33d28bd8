"""Reproducibility fixtures: KAT generation/verification and DFR measurement."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .codes import MdpcCode, decode
from .gf2 import SystemParams
from .kem import decaps, encaps, kem_keygen
from .serialize import (KatVector, dump_ciphertext, dump_private_key, dump_public_key, format_kat,
                        load_ciphertext, load_private_key, parse_kat)


def kat_title(params: SystemParams, family: str, family_opts: dict) -> str:
    extra = "".join(f" {k}={v}" for k, v in sorted(family_opts.items()))
    return f"mceliece-kem KAT family={family} n={params.n} k={params.k} w={params.w} ell_k={params.ell_k}{extra}"


def generate_kat(params: SystemParams, family: str, count: int, seed: int, **family_opts) -> str:
    """KAT text; vector ``i`` is generated from its own 256-bit seed drawn from ``seed``."""
    master = random.Random(seed)
    vectors = []
    for i in range(count):
        vseed = master.getrandbits(256)
        rng = random.Random(vseed)
        pk, sk = kem_keygen(params, family, rng, **family_opts)
        key, psi0 = encaps(pk, rng)
        vectors.append(KatVector(i, vseed.to_bytes(32, "big"), dump_public_key(pk), dump_private_key(sk),
                                 dump_ciphertext(psi0, family, params), key))
    return format_kat(kat_title(params, family, family_opts), vectors)


def verify_kat(text: str) -> list[int]:
    """Counts of the vectors whose ``decaps(sk, ct)`` differs from ``ss``."""
    _, vectors = parse_kat(text)
    bad = []
    for v in vectors:
        sk = load_private_key(v.sk)
        _, psi0 = load_ciphertext(v.ct)
        if decaps(sk, psi0) != v.ss:
            bad.append(v.count)
    return bad


@dataclass(frozen=True)
class DfrReport:
    params: SystemParams
    row_weight: int
    trials: int
    failures: int
    mean_iterations: float
    max_iterations: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    def format(self) -> str:
        p = self.params
        rows = [
            ("family", "mdpc"),
            ("n", p.n), ("k", p.k), ("w", p.w), ("row_weight", self.row_weight),
            ("trials", self.trials),
            ("failures", self.failures),
            ("failure_rate", f"{self.failure_rate:.6f}"),
            ("mean_iterations", f"{self.mean_iterations:.3f}"),
            ("max_iterations", self.max_iterations),
        ]
        return "".join(f"{name:<16}{value}\n" for name, value in rows)


def measure_dfr(params: SystemParams, row_weight: int, trials: int, seed: int, **mdpc_opts) -> DfrReport:
    """Encapsulate/decapsulate ``trials`` times under one MDPC key; a key mismatch is a failure."""
    rng = random.Random(seed)
    pk, sk = kem_keygen(params, "mdpc", rng, row_weight=row_weight, **mdpc_opts)
    assert isinstance(sk.delta, MdpcCode)
    failures = 0
    total_iterations = 0
    worst = 0
    for _ in range(trials):
        key, psi0 = encaps(pk, rng)
        iterations = decode(sk.delta, psi0).iterations
        total_iterations += iterations
        worst = max(worst, iterations)
        if decaps(sk, psi0) != key:
            failures += 1
    return DfrReport(params, row_weight, trials, failures, total_iterations / trials if trials else 0.0, worst)
