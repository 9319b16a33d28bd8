"""Compare the compiled and numpy kernels on the two hot paths.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times GF(2) row reduction of a random 4801 x 9602 matrix and bit-flip decoding
at (9602, 4801, row weight 90, w = 84).
"""
import argparse
import random
import timeit

import numpy as np

from mceliece_kem import _pykernels
from mceliece_kem.codes import mdpc_keygen
from mceliece_kem.gf2 import BitMatrix, SystemParams, mat_vec_mul, random_vector, sample_constant_weight

try:
    from mceliece_kem import _ckernels
except ImportError:
    _ckernels = None


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = {"numpy": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing numpy only")

    rng = random.Random(0)
    r, n = 4801, 9602
    words = BitMatrix(r, n, tuple(rng.getrandbits(n) for _ in range(r))).to_words()

    params = SystemParams(n, r, 84)
    code, G = mdpc_keygen(params, 90, rng)
    ys = [(mat_vec_mul(random_vector(r, rng), G) ^ sample_constant_weight(n, 84, rng)).to_array()
          for _ in range(args.repeat)]
    empty = np.zeros(0, dtype=np.int32)

    print(f"{'kernel':<10}{'backend':<10}{'best of ' + str(args.repeat):>14}")
    timings = {}
    for name, impl in backends.items():
        t = min(timeit.repeat(lambda: impl.rref_inplace(words.copy(), n), number=1, repeat=args.repeat))
        timings[("rref", name)] = t
        print(f"{'rref':<10}{name:<10}{t:>12.3f} s")
    for name, impl in backends.items():
        it = iter(ys * 2)
        t = min(timeit.repeat(lambda: impl.bitflip(code.parity_rows, code._col_ptr, code._col_rows, next(it), 100,
                                                   empty, code.majority), number=1, repeat=args.repeat))
        timings[("bitflip", name)] = t
        print(f"{'bitflip':<10}{name:<10}{t:>12.3f} s")
    if _ckernels is not None:
        for kernel in ("rref", "bitflip"):
            print(f"{kernel} speedup: {timings[(kernel, 'numpy')] / timings[(kernel, 'cython')]:.1f}x")


if __name__ == "__main__":
    main()
