"""Binary file formats for keys and ciphertexts, and the text KAT format.

Every binary file starts with a 28-byte header::

    magic     8s   b"MCEKEM01"
    version   u16  1
    kind      u8   1 public key, 2 private key, 3 KEM ciphertext, 4 hybrid ciphertext
    family    u8   1 toy, 2 mdpc
    n, k, w, ell_k  4 x u32

All integers are little-endian; bit vectors are LSB-first packed and every
matrix row starts on a byte boundary.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .codes import MdpcCode, ToyCode, toy_from_generator
from .gf2 import BitMatrix, BitVector, SystemParams
from .hybrid import TAG_BYTES, HybridCiphertext
from .kem import KemPrivateKey, KemPublicKey

MAGIC = b"MCEKEM01"
VERSION = 1
HEADER = struct.Struct("<8sHBB4I")

KIND_PUBLIC, KIND_PRIVATE, KIND_CIPHERTEXT, KIND_HYBRID = 1, 2, 3, 4
FAMILY_IDS = {"toy": 1, "mdpc": 2}
FAMILY_NAMES = {v: k for k, v in FAMILY_IDS.items()}
_KIND_NAMES = {KIND_PUBLIC: "public key", KIND_PRIVATE: "private key",
               KIND_CIPHERTEXT: "KEM ciphertext", KIND_HYBRID: "hybrid ciphertext"}


class FormatError(ValueError):
    """Malformed, truncated or mismatched file."""


@dataclass(frozen=True)
class Header:
    kind: int
    family: str
    params: SystemParams

    def pack(self) -> bytes:
        p = self.params
        return HEADER.pack(MAGIC, VERSION, self.kind, FAMILY_IDS[self.family], p.n, p.k, p.w, p.ell_k)


def read_header(data: bytes, expect_kind: int) -> tuple[Header, memoryview]:
    if len(data) < HEADER.size:
        raise FormatError("truncated header")
    magic, version, kind, family_id, n, k, w, ell_k = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError("bad magic")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if kind != expect_kind:
        raise FormatError(f"expected a {_KIND_NAMES[expect_kind]}, got {_KIND_NAMES.get(kind, f'kind {kind}')}")
    if family_id not in FAMILY_NAMES:
        raise FormatError(f"unknown family id {family_id}")
    try:
        params = SystemParams(n, k, w, ell_k)
    except ValueError as exc:
        raise FormatError(f"invalid header parameters: {exc}") from None
    return Header(kind, FAMILY_NAMES[family_id], params), memoryview(data)[HEADER.size:]


def _vector(buf, length: int) -> BitVector:
    try:
        return BitVector.from_bytes(bytes(buf), length)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


class _Reader:
    def __init__(self, buf):
        self.buf = buf
        self.pos = 0

    def take(self, size: int):
        if self.pos + size > len(self.buf):
            raise FormatError("truncated payload")
        out = self.buf[self.pos:self.pos + size]
        self.pos += size
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def done(self) -> None:
        if self.pos != len(self.buf):
            raise FormatError(f"{len(self.buf) - self.pos} trailing bytes")


def _matrix(reader: _Reader, rows: int, cols: int) -> BitMatrix:
    raw = reader.take(rows * ((cols + 7) // 8))
    try:
        return BitMatrix.from_bytes(bytes(raw), rows, cols)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------


def dump_public_key(pk: KemPublicKey) -> bytes:
    return Header(KIND_PUBLIC, pk.family, pk.params).pack() + pk.G.to_bytes()


def load_public_key(data: bytes) -> KemPublicKey:
    header, body = read_header(data, KIND_PUBLIC)
    p = header.params
    reader = _Reader(body)
    G = _matrix(reader, p.k, p.n)
    reader.done()
    return KemPublicKey(G, p, header.family)


def dump_private_key(sk: KemPrivateKey) -> bytes:
    out = [Header(KIND_PRIVATE, sk.family, sk.params).pack()]
    delta = sk.delta
    if isinstance(delta, ToyCode):
        # the coset-leader table is a deterministic function of (G, w)
        out.append(delta.generator.to_bytes())
    else:
        out.append(struct.pack("<III", delta.row_weight, delta.max_iterations, len(delta.thresholds)))
        out.append(struct.pack(f"<{len(delta.thresholds)}I", *delta.thresholds))
        out.append(delta.parity_rows.astype("<u4").tobytes())
    out.append(sk.s.to_bytes())
    return b"".join(out)


def load_private_key(data: bytes) -> KemPrivateKey:
    header, body = read_header(data, KIND_PRIVATE)
    p = header.params
    reader = _Reader(body)
    if header.family == "toy":
        G = _matrix(reader, p.k, p.n)
        try:
            delta = toy_from_generator(G, p.w)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        if delta is None:
            raise FormatError("stored toy code does not correct w errors")
    else:
        row_weight, max_iterations, nthr = reader.u32(), reader.u32(), reader.u32()
        thresholds = struct.unpack(f"<{nthr}I", reader.take(4 * nthr))
        rows = np.frombuffer(bytes(reader.take(4 * p.r * row_weight)), dtype="<u4")
        try:
            delta = MdpcCode(p.n, p.k, p.w, rows.reshape(p.r, row_weight).astype(np.int32),
                             max_iterations, tuple(thresholds))
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    s = _vector(reader.take((p.k + 7) // 8), p.k)
    reader.done()
    return KemPrivateKey(delta, s, p)


def dump_ciphertext(psi0: BitVector, family: str, params: SystemParams) -> bytes:
    if psi0.length != params.n:
        raise ValueError("ciphertext length does not match parameters")
    return Header(KIND_CIPHERTEXT, family, params).pack() + psi0.to_bytes()


def load_ciphertext(data: bytes) -> tuple[Header, BitVector]:
    header, body = read_header(data, KIND_CIPHERTEXT)
    reader = _Reader(body)
    psi0 = _vector(reader.take((header.params.n + 7) // 8), header.params.n)
    reader.done()
    return header, psi0


def dump_hybrid(hct: HybridCiphertext, family: str, params: SystemParams) -> bytes:
    """Header, psi0, tag, u64 body length, body."""
    return b"".join([Header(KIND_HYBRID, family, params).pack(), hct.kem_ct.to_bytes(), hct.tag,
                     struct.pack("<Q", len(hct.dem_ct)), hct.dem_ct])


def load_hybrid(data: bytes) -> tuple[Header, HybridCiphertext]:
    header, body = read_header(data, KIND_HYBRID)
    reader = _Reader(body)
    psi0 = _vector(reader.take((header.params.n + 7) // 8), header.params.n)
    tag = bytes(reader.take(TAG_BYTES))
    (length,) = struct.unpack("<Q", reader.take(8))
    dem = bytes(reader.take(length))
    reader.done()
    return header, HybridCiphertext(psi0, dem, tag)


def check_compatible(key_header_params: SystemParams, family: str, header: Header) -> None:
    if header.params != key_header_params or header.family != family:
        raise FormatError("ciphertext parameters do not match the key")


# ---------------------------------------------------------------------------
# KAT text files


@dataclass(frozen=True)
class KatVector:
    count: int
    seed: bytes
    pk: bytes
    sk: bytes
    ct: bytes
    ss: bytes


KAT_FIELDS = ("count", "seed", "pk", "sk", "ct", "ss")


def format_kat(title: str, vectors) -> str:
    lines = [f"# {title}\n"]
    for v in vectors:
        lines.append("\n")
        lines.append(f"count = {v.count}\n")
        for name in KAT_FIELDS[1:]:
            lines.append(f"{name} = {getattr(v, name).hex()}\n")
    return "".join(lines)


def parse_kat(text: str) -> tuple[str, list[KatVector]]:
    title = ""
    vectors = []
    current: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("#"):
            title = title or line[1:].strip()
            continue
        if not line:
            continue
        name, _, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if name not in KAT_FIELDS:
            raise FormatError(f"unknown KAT field {name!r}")
        if name == "count":
            if current:
                vectors.append(current)
            current = {"count": int(value)}
        else:
            current[name] = bytes.fromhex(value)
    if current:
        vectors.append(current)
    try:
        return title, [KatVector(**v) for v in vectors]
    except TypeError as exc:
        raise FormatError(f"incomplete KAT vector: {exc}") from None
