import hashlib
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mceliece_kem.cli import main
from mceliece_kem.experiments import generate_kat, verify_kat
from mceliece_kem.gf2 import BitVector, SystemParams
from mceliece_kem.hybrid import hybrid_encrypt
from mceliece_kem.kem import kem_keygen
from mceliece_kem.serialize import (HEADER, FormatError, dump_ciphertext, dump_hybrid, dump_private_key,
                                    dump_public_key, load_ciphertext, load_hybrid, load_private_key,
                                    load_public_key, parse_kat)

TOY_SHAPES = [(7, 4, 1), (8, 4, 1), (12, 4, 2), (20, 8, 2), (11, 4, 1)]


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestBinaryFormats:
    def test_header_layout(self, rng, p741):
        pk, _ = kem_keygen(p741, "toy", rng)
        data = dump_public_key(pk)
        assert HEADER.size == 28 and data[:8] == b"MCEKEM01"
        assert data[8:10] == b"\x01\x00" and data[10] == 1 and data[11] == 1
        assert int.from_bytes(data[12:16], "little") == 7
        assert len(data) == 28 + 4 * 1

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(TOY_SHAPES), st.integers(0, 2**32))
    def test_toy_round_trips(self, shape, seed):
        r = random.Random(seed)
        params = SystemParams(*shape)
        pk, sk = kem_keygen(params, "toy", r)
        assert load_public_key(dump_public_key(pk)) == pk
        sk2 = load_private_key(dump_private_key(sk))
        assert sk2.delta == sk.delta and sk2.s == sk.s and sk2.params == params
        psi0 = BitVector(params.n, r.getrandbits(params.n))
        header, back = load_ciphertext(dump_ciphertext(psi0, "toy", params))
        assert back == psi0 and header.params == params

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**32), st.lists(st.integers(1, 9), max_size=3))
    def test_mdpc_round_trips(self, seed, thresholds):
        params = SystemParams(40, 20, 2)
        pk, sk = kem_keygen(params, "mdpc", random.Random(seed), row_weight=5, max_iterations=17,
                            thresholds=tuple(thresholds))
        sk2 = load_private_key(dump_private_key(sk))
        assert sk2.delta == sk.delta and sk2.s == sk.s
        assert sk2.delta.max_iterations == 17 and sk2.delta.thresholds == tuple(thresholds)
        assert load_public_key(dump_public_key(pk)) == pk

    def test_hybrid_round_trip(self, rng):
        params = SystemParams(12, 4, 2)
        pk, _ = kem_keygen(params, "toy", rng)
        hct = hybrid_encrypt(pk, b"payload", rng)
        header, back = load_hybrid(dump_hybrid(hct, "toy", params))
        assert back == hct and header.family == "toy"

    def test_corruption(self, rng, p741):
        pk, sk = kem_keygen(p741, "toy", rng)
        data = dump_public_key(pk)
        for bad in (data[:10], b"X" + data[1:], data + b"\0", data[:-1]):
            with pytest.raises(FormatError):
                load_public_key(bad)
        with pytest.raises(FormatError, match="expected a private key"):
            load_private_key(data)
        wrong_version = data[:8] + b"\x02\x00" + data[10:]
        with pytest.raises(FormatError, match="version"):
            load_public_key(wrong_version)
        bad_params = data[:12] + (3).to_bytes(4, "little") + data[16:]
        with pytest.raises(FormatError):
            load_public_key(bad_params)
        with pytest.raises(ValueError):
            dump_ciphertext(BitVector.zeros(6), "toy", p741)


class TestKat:
    def test_self_verifies(self):
        text = generate_kat(SystemParams(7, 4, 1), "toy", 5, 3)
        title, vectors = parse_kat(text)
        assert len(vectors) == 5 and "family=toy" in title
        assert verify_kat(text) == []
        for v in vectors:
            assert len(v.seed) == 32 and len(v.ss) == 32

    def test_detects_bad_vector(self):
        text = generate_kat(SystemParams(7, 4, 1), "toy", 2, 3)
        _, vectors = parse_kat(text)
        bad = text.replace(vectors[1].ss.hex(), "00" * 32)
        assert verify_kat(bad) == [1]

    def test_count_zero(self):
        text = generate_kat(SystemParams(7, 4, 1), "toy", 0, 3)
        assert text.count("\n") == 1 and text.startswith("# ")
        assert parse_kat(text)[1] == []

    def test_malformed(self):
        with pytest.raises(FormatError):
            parse_kat("count = 0\nseed = 00\n")
        with pytest.raises(FormatError):
            parse_kat("bogus = 1\n")


class TestCli:
    def keygen(self, tmp_path, *extra, seed=1, name="k"):
        pub, priv = tmp_path / f"{name}.pub", tmp_path / f"{name}.priv"
        code = main(["keygen", "-n", "7", "-k", "4", "-w", "1", "--seed", str(seed),
                     "--pub", str(pub), "--priv", str(priv), *extra])
        return code, pub, priv

    def test_keygen_deterministic(self, tmp_path):
        _, a_pub, a_priv = self.keygen(tmp_path, name="a")
        _, b_pub, b_priv = self.keygen(tmp_path, name="b")
        assert digest(a_pub) == digest(b_pub) and digest(a_priv) == digest(b_priv)

    def test_keygen_no_such_code(self, tmp_path, capsys):
        code = main(["keygen", "-n", "4", "-k", "2", "-w", "2", "--family", "toy",
                     "--pub", str(tmp_path / "p"), "--priv", str(tmp_path / "s")])
        assert code != 0 and "no such code" in capsys.readouterr().err

    def test_keygen_k_exceeds_n(self, tmp_path):
        assert main(["keygen", "-n", "7", "-k", "8", "-w", "1",
                     "--pub", str(tmp_path / "p"), "--priv", str(tmp_path / "s")]) != 0

    def test_keygen_unwritable(self, tmp_path):
        code, _, _ = self.keygen(tmp_path, name="missing/dir/k")
        assert code != 0

    def test_encaps_decaps(self, tmp_path):
        _, pub, priv = self.keygen(tmp_path)
        ct, k1, k2 = tmp_path / "ct", tmp_path / "k1", tmp_path / "k2"
        assert main(["encaps", "--pub", str(pub), "--seed", "4", "--ct", str(ct), "--key", str(k1)]) == 0
        assert main(["decaps", "--priv", str(priv), "--ct", str(ct), "--key", str(k2)]) == 0
        assert k1.read_text() == k2.read_text() and len(k1.read_text().strip()) == 64

    def test_decaps_random_and_truncated(self, tmp_path, p741):
        _, pub, priv = self.keygen(tmp_path)
        for yb in range(128):
            ct = tmp_path / "rnd.ct"
            ct.write_bytes(dump_ciphertext(BitVector(7, yb), "toy", p741))
            assert main(["decaps", "--priv", str(priv), "--ct", str(ct), "--key", str(tmp_path / "out")]) == 0
        short = dump_ciphertext(BitVector.zeros(6), "toy", SystemParams(6, 4, 1))
        (tmp_path / "short.ct").write_bytes(short)
        assert main(["decaps", "--priv", str(priv), "--ct", str(tmp_path / "short.ct"),
                     "--key", str(tmp_path / "out")]) != 0
        data = dump_ciphertext(BitVector.zeros(7), "toy", p741)
        (tmp_path / "cut.ct").write_bytes(data[:20])
        assert main(["decaps", "--priv", str(priv), "--ct", str(tmp_path / "cut.ct"),
                     "--key", str(tmp_path / "out")]) != 0

    @pytest.mark.parametrize("size", [0, 1 << 20])
    def test_encrypt_decrypt(self, tmp_path, size):
        _, pub, priv = self.keygen(tmp_path)
        src, enc, dec = tmp_path / "m", tmp_path / "m.enc", tmp_path / "m.dec"
        src.write_bytes(random.Random(size).randbytes(size))
        assert main(["encrypt", "--pub", str(pub), "--in", str(src), "--out", str(enc), "--seed", "3"]) == 0
        assert main(["decrypt", "--priv", str(priv), "--in", str(enc), "--out", str(dec)]) == 0
        assert dec.read_bytes() == src.read_bytes()

    def test_decrypt_tampered(self, tmp_path, capsys):
        _, pub, priv = self.keygen(tmp_path)
        src, enc = tmp_path / "m", tmp_path / "m.enc"
        src.write_bytes(b"attack at dawn")
        main(["encrypt", "--pub", str(pub), "--in", str(src), "--out", str(enc)])
        data = bytearray(enc.read_bytes())
        data[-1] ^= 0x10
        enc.write_bytes(bytes(data))
        assert main(["decrypt", "--priv", str(priv), "--in", str(enc), "--out", str(tmp_path / "x")]) != 0
        assert "authentication failure" in capsys.readouterr().err
        assert not (tmp_path / "x").exists()

    def test_kat(self, tmp_path):
        a, b, z = tmp_path / "a.kat", tmp_path / "b.kat", tmp_path / "z.kat"
        for out in (a, b):
            assert main(["kat", "-n", "7", "-k", "4", "-w", "1", "--count", "3", "--seed", "5", "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert verify_kat(a.read_text()) == []
        assert main(["kat", "-n", "7", "-k", "4", "-w", "1", "--count", "0", "--out", str(z)]) == 0
        assert parse_kat(z.read_text())[1] == []

    def test_dfr(self, tmp_path, capsys):
        args = ["dfr", "-n", "16", "-k", "8", "-w", "1", "--row-weight", "3", "--trials", "1000", "--seed", "2"]
        assert main(args + ["--out", str(tmp_path / "a")]) == 0
        assert main(args + ["--out", str(tmp_path / "b")]) == 0
        report = (tmp_path / "a").read_text()
        assert report == (tmp_path / "b").read_text()
        fields = dict(line.split() for line in report.splitlines())
        assert 0.0 <= float(fields["failure_rate"]) <= 1.0 and fields["trials"] == "1000"
        assert main(["dfr", "--family", "toy", "-n", "7", "-k", "4", "-w", "1"]) != 0
        assert "DFR undefined" in capsys.readouterr().err
        assert main(["dfr", "-n", "16", "-k", "8", "-w", "1"]) != 0

    def test_game(self, tmp_path, capsys):
        transcript = tmp_path / "t.txt"
        assert main(["game", "-n", "7", "-k", "4", "-w", "1", "--adversary", "random-dec", "--n-dec", "3",
                     "--trials", "5", "--transcript", str(transcript)]) == 0
        out = capsys.readouterr().out
        assert "advantage" in out and "n_dec       15" in out
        assert transcript.read_text().count("# trial") == 5

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "mceliece_kem", "keygen", "-n", "7", "-k", "8", "-w", "1",
                               "--pub", str(tmp_path / "p"), "--priv", str(tmp_path / "s")],
                              capture_output=True, text=True)
        assert proc.returncode == 1 and proc.stderr.startswith("error:")
