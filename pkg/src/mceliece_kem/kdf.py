"""Key derivation: SHAKE256 for real use, a lazily sampled table for proofs."""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .gf2 import BitVector

KDF_DOMAIN = b"MCEKEM-KDF-v1"


def _trim(data: bytes, ell: int) -> bytes:
    # LSB-first packing: unused high bits of the last byte are zero
    if ell % 8:
        data = data[:-1] + bytes([data[-1] & ((1 << (ell % 8)) - 1)])
    return data


def kdf_payload(x: BitVector, e: BitVector) -> BitVector:
    """``x || e`` as one bit string (``x`` first)."""
    return x.concat(e)


def kdf_derive(payload: BitVector, ell: int) -> bytes:
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell == 0:
        return b""
    digest = hashlib.shake_256(KDF_DOMAIN + payload.to_bytes()).digest((ell + 7) // 8)
    return _trim(digest, ell)


def random_bits(ell: int, rng: random.Random) -> bytes:
    if ell == 0:
        return b""
    return rng.getrandbits(ell).to_bytes((ell + 7) // 8, "little")


@dataclass
class OracleTable:
    """Memo of a random oracle: payload -> output."""

    entries: dict = field(default_factory=dict)
    ell: int | None = None
    queries: int = 0

    def __contains__(self, payload: BitVector) -> bool:
        return payload in self.entries


def oracle_query(table: OracleTable, payload: BitVector, ell: int, rng: random.Random) -> bytes:
    if table.ell is None:
        table.ell = ell
    elif table.ell != ell:
        raise ValueError(f"oracle table fixed at {table.ell} output bits, asked for {ell}")
    table.queries += 1
    out = table.entries.get(payload)
    if out is None:
        out = random_bits(ell, rng)
        table.entries[payload] = out
    return out


class RandomOracle:
    """``kdf``-compatible callable backed by an :class:`OracleTable`."""

    def __init__(self, rng: random.Random, table: OracleTable | None = None):
        self.rng = rng
        self.table = table if table is not None else OracleTable()

    def __call__(self, payload: BitVector, ell: int) -> bytes:
        return oracle_query(self.table, payload, ell, self.rng)

    def program(self, payload: BitVector, value: bytes) -> None:
        if payload in self.table.entries:
            raise ValueError("oracle already defined at this point")
        self.table.entries[payload] = value
