"""McEliece-style key encapsulation with implicit rejection."""
from .codes import DecodeOutcome, KeyGenerationError, MdpcCode, ToyCode, decode
from .gf2 import BitMatrix, BitVector, SystemParams
from .hybrid import HybridCiphertext, hybrid_decrypt, hybrid_encrypt
from .kem import KemPrivateKey, KemPublicKey, decaps, encaps, kem_keygen
from .kernels import BACKEND
from .pke import pke_decrypt, pke_encrypt, pke_keygen

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BitMatrix", "BitVector", "DecodeOutcome", "HybridCiphertext", "KemPrivateKey", "KemPublicKey",
    "KeyGenerationError", "MdpcCode", "SystemParams", "ToyCode", "decaps", "decode", "encaps", "hybrid_decrypt",
    "hybrid_encrypt", "kem_keygen", "pke_decrypt", "pke_encrypt", "pke_keygen",
]
