"""KEM-DEM hybrid encryption: SHAKE256 keystream, encrypt-then-MAC."""
from __future__ import annotations

import hashlib
import hmac
import random
from dataclasses import dataclass
from typing import Optional

from .gf2 import BitVector
from .kdf import kdf_derive
from .kem import Kdf, KemPrivateKey, KemPublicKey, decaps, encaps

TAG_BYTES = 32
STREAM_DOMAIN = b"MCEKEM-DEM-STREAM"
MAC_DOMAIN = b"MCEKEM-DEM-MAC"
_BLOCK = 1 << 16


@dataclass(frozen=True)
class HybridCiphertext:
    kem_ct: BitVector
    dem_ct: bytes
    tag: bytes


def split_key(key: bytes) -> tuple[bytes, bytes]:
    """256-bit KEM key -> (stream key, MAC key), the two 128-bit halves."""
    if len(key) != 32:
        raise ValueError("hybrid encryption needs ell_k = 256")
    return key[:16], key[16:]


def keystream(stream_key: bytes, length: int) -> bytes:
    blocks = []
    for counter in range((length + _BLOCK - 1) // _BLOCK):
        blocks.append(hashlib.shake_256(STREAM_DOMAIN + stream_key + counter.to_bytes(8, "little")).digest(_BLOCK))
    return b"".join(blocks)[:length]


def _xor(data: bytes, pad: bytes) -> bytes:
    return (int.from_bytes(data, "little") ^ int.from_bytes(pad, "little")).to_bytes(len(data), "little")


def mac(mac_key: bytes, kem_ct: BitVector, dem_ct: bytes) -> bytes:
    kem_bytes = kem_ct.to_bytes()
    h = hashlib.shake_256(MAC_DOMAIN + mac_key)
    h.update(len(kem_bytes).to_bytes(8, "little") + kem_bytes)
    h.update(dem_ct)
    return h.digest(TAG_BYTES)


def hybrid_encrypt(pk: KemPublicKey, message: bytes, rng: random.Random, kdf: Kdf = kdf_derive) -> HybridCiphertext:
    key, psi0 = encaps(pk, rng, kdf)
    stream_key, mac_key = split_key(key)
    body = _xor(message, keystream(stream_key, len(message)))
    return HybridCiphertext(psi0, body, mac(mac_key, psi0, body))


def hybrid_decrypt(sk: KemPrivateKey, hct: HybridCiphertext, kdf: Kdf = kdf_derive) -> Optional[bytes]:
    """The plaintext, or ``None`` when the tag does not verify."""
    if len(hct.tag) != TAG_BYTES:
        raise ValueError(f"tag must be {TAG_BYTES} bytes")
    key = decaps(sk, hct.kem_ct, kdf)
    stream_key, mac_key = split_key(key)
    if not hmac.compare_digest(mac(mac_key, hct.kem_ct, hct.dem_ct), hct.tag):
        return None
    return _xor(hct.dem_ct, keystream(stream_key, len(hct.dem_ct)))
