"""Command-line interface: ``mceliece-kem <command> ...``."""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import game
from .codes import KeyGenerationError
from .experiments import generate_kat, measure_dfr
from .gf2 import SystemParams
from .hybrid import hybrid_decrypt, hybrid_encrypt
from .kem import decaps, encaps, kem_keygen
from .serialize import (FormatError, check_compatible, dump_ciphertext, dump_hybrid, dump_private_key,
                        dump_public_key, load_ciphertext, load_hybrid, load_private_key, load_public_key)


class CliError(Exception):
    pass


def _add_params(p: argparse.ArgumentParser, family_default: str = "toy") -> None:
    p.add_argument("--family", choices=("toy", "mdpc"), default=family_default)
    p.add_argument("-n", type=int, required=True, help="code length")
    p.add_argument("-k", type=int, required=True, help="code dimension")
    p.add_argument("-w", type=int, required=True, help="error weight")
    p.add_argument("--ell-k", type=int, default=256, help="shared key length in bits")
    p.add_argument("--row-weight", type=int, default=None, help="MDPC parity row weight")
    p.add_argument("--max-iterations", type=int, default=100, help="MDPC bit-flipping iterations")


def _params(args) -> SystemParams:
    try:
        return SystemParams(args.n, args.k, args.w, args.ell_k)
    except ValueError as exc:
        raise CliError(f"invalid parameters: {exc}") from None


def _family_opts(args) -> dict:
    if args.family != "mdpc":
        return {}
    if args.row_weight is None:
        raise CliError("--row-weight is required for the mdpc family")
    return {"row_weight": args.row_weight, "max_iterations": args.max_iterations}


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, data: bytes | str) -> None:
    try:
        if isinstance(data, str):
            Path(path).write_text(data)
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def cmd_keygen(args) -> int:
    params = _params(args)
    try:
        pk, sk = kem_keygen(params, args.family, random.Random(args.seed), **_family_opts(args))
    except KeyGenerationError as exc:
        raise CliError(str(exc)) from None
    _write(args.pub, dump_public_key(pk))
    _write(args.priv, dump_private_key(sk))
    return 0


def cmd_encaps(args) -> int:
    pk = load_public_key(_read(args.pub))
    key, psi0 = encaps(pk, random.Random(args.seed))
    _write(args.ct, dump_ciphertext(psi0, pk.family, pk.params))
    _write(args.key, key.hex() + "\n")
    return 0


def cmd_decaps(args) -> int:
    sk = load_private_key(_read(args.priv))
    header, psi0 = load_ciphertext(_read(args.ct))
    check_compatible(sk.params, sk.family, header)
    _write(args.key, decaps(sk, psi0).hex() + "\n")
    return 0


def cmd_encrypt(args) -> int:
    pk = load_public_key(_read(args.pub))
    hct = hybrid_encrypt(pk, _read(args.inp), random.Random(args.seed))
    _write(args.out, dump_hybrid(hct, pk.family, pk.params))
    return 0


def cmd_decrypt(args) -> int:
    sk = load_private_key(_read(args.priv))
    header, hct = load_hybrid(_read(args.inp))
    check_compatible(sk.params, sk.family, header)
    message = hybrid_decrypt(sk, hct)
    if message is None:
        raise CliError("authentication failure")
    _write(args.out, message)
    return 0


def cmd_kat(args) -> int:
    params = _params(args)
    try:
        text = generate_kat(params, args.family, args.count, args.seed, **_family_opts(args))
    except KeyGenerationError as exc:
        raise CliError(str(exc)) from None
    _write(args.out, text)
    return 0


def cmd_dfr(args) -> int:
    if args.family != "mdpc":
        raise CliError("toy decoder is exact; DFR undefined")
    params = _params(args)
    opts = _family_opts(args)
    try:
        report = measure_dfr(params, opts.pop("row_weight"), args.trials, args.seed, **opts)
    except KeyGenerationError as exc:
        raise CliError(str(exc)) from None
    text = report.format()
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


_ADVERSARIES = {
    "constant": lambda a: game.ConstantGuessAdversary(0),
    "cheating": lambda a: game.CheatingAdversary(),
    "random-dec": lambda a: game.RandomDecryptionAdversary(a.n_dec),
}


def cmd_game(args) -> int:
    params = _params(args)
    try:
        report = game.run_cca_game(_ADVERSARIES[args.adversary](args), params, args.family, args.trials,
                                   random.Random(args.seed), mode=args.mode,
                                   leak_plant=args.adversary == "cheating",
                                   record_transcripts=bool(args.transcript), family_opts=_family_opts(args))
    except KeyGenerationError as exc:
        raise CliError(str(exc)) from None
    rows = [("mode", args.mode), ("adversary", args.adversary), ("trials", report.trials),
            ("completed", report.completed), ("successes", report.successes),
            ("advantage", f"{report.advantage_estimate:.6f}"), ("n_kdf", report.n_kdf), ("n_dec", report.n_dec),
            ("f1", report.f1_count), ("f2", report.f2_count), ("aborted", report.aborted)]
    sys.stdout.write("".join(f"{name:<12}{value}\n" for name, value in rows))
    if args.transcript:
        text = "".join(f"# trial {i}\n" + game.format_transcript(o.transcript) for i, o in enumerate(report.outcomes))
        _write(args.transcript, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mceliece-kem", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    _add_params(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pub", required=True)
    p.add_argument("--priv", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encaps", help="encapsulate a fresh key")
    p.add_argument("--pub", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ct", required=True)
    p.add_argument("--key", required=True)
    p.set_defaults(func=cmd_encaps)

    p = sub.add_parser("decaps", help="decapsulate (always yields a key)")
    p.add_argument("--priv", required=True)
    p.add_argument("--ct", required=True)
    p.add_argument("--key", required=True)
    p.set_defaults(func=cmd_decaps)

    p = sub.add_parser("encrypt", help="hybrid-encrypt a file")
    p.add_argument("--pub", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="hybrid-decrypt a file")
    p.add_argument("--priv", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("kat", help="write known-answer test vectors")
    _add_params(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_kat)

    p = sub.add_parser("dfr", help="measure the MDPC decoding failure rate")
    _add_params(p, family_default="mdpc")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_dfr)

    p = sub.add_parser("game", help="run the IND-CCA game or its reduction")
    _add_params(p)
    p.add_argument("--adversary", choices=sorted(_ADVERSARIES), default="constant")
    p.add_argument("--mode", choices=("real", "simulated"), default="real")
    p.add_argument("--n-dec", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transcript", default=None, help="write query transcripts here")
    p.set_defaults(func=cmd_game)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
