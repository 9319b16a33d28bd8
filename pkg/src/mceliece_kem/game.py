"""IND-CCA game for the KEM and the GDP reduction that simulates it.

The real game runs the KEM with its KDF replaced by a lazily sampled random
oracle.  The simulated game answers the same queries from two tables without
the private key, on a planted GDP instance, and extracts a codeword close to
``y*`` as soon as the adversary queries the oracle at the challenge's
``(x*, e*)`` (event F2).  Event F1 is the challenge ciphertext having been
submitted for decryption before it was issued.

Each trial splits its randomness into named streams (key, plant, oracle,
coin, adversary) so that the two games draw identical values for identical
queries; under a shared seed their transcripts agree until F1 or F2.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Literal, Optional, Protocol

from .gf2 import (BitMatrix, BitVector, SystemParams, count_ciphertext_space, hamming_distance, mat_vec_mul,
                  random_vector, rank, sample_constant_weight)
from .kdf import RandomOracle, kdf_payload, random_bits
from .kem import KemPublicKey, decaps, kem_keygen

BOT = None  # decryption oracle's answer on the challenge ciphertext


class ProtocolViolation(Exception):
    """The adversary broke the game's query contract."""


class _Halt(Exception):
    def __init__(self, event: str):
        super().__init__(event)
        self.event = event


@dataclass(frozen=True)
class GdpInstance:
    G: BitMatrix
    y_star: BitVector
    w: int
    plant: tuple[BitVector, BitVector] = field(repr=False, compare=False)


def plant_instance(G: BitMatrix, w: int, rng: random.Random) -> GdpInstance:
    x = random_vector(G.rows, rng)
    e = sample_constant_weight(G.cols, w, rng)
    return GdpInstance(G, mat_vec_mul(x, G) ^ e, w, (x, e))


def make_gdp_instance(params: SystemParams, family: str, rng: random.Random, **family_opts) -> GdpInstance:
    """Planted instance: a fresh public key and ``y* = x*G + e*``."""
    pk, _ = kem_keygen(params, family, rng, **family_opts)
    return plant_instance(pk.G, params.w, rng)


def _is_codeword(G: BitMatrix, c: BitVector) -> bool:
    k = G.rows
    if all((row & ((1 << k) - 1)) == 1 << i for i, row in enumerate(G.data)):
        return mat_vec_mul(BitVector(k, c.bits & ((1 << k) - 1)), G) == c
    return rank(BitMatrix(k + 1, G.cols, G.data + (c.bits,))) == rank(G)


def verify_gdp_solution(gdp: GdpInstance, c: BitVector) -> bool:
    if c.length != gdp.G.cols:
        raise ValueError("candidate has the wrong length")
    return hamming_distance(c, gdp.y_star) <= gdp.w and _is_codeword(gdp.G, c)


def brute_force_gdp(gdp: GdpInstance) -> Optional[BitVector]:
    """Exhaustive search over all ``2^k`` codewords (Gray-code order)."""
    return _brute_force(gdp)[0]


def _brute_force(gdp: GdpInstance) -> tuple[Optional[BitVector], int]:
    k = gdp.G.rows
    if k > 20:
        raise ValueError("brute force limited to k <= 20")
    rows = gdp.G.data
    target = gdp.y_star.bits
    c = 0
    for i in range(1 << k):
        if i:
            c ^= rows[(i & -i).bit_length() - 1]
        if (c ^ target).bit_count() <= gdp.w:
            return BitVector(gdp.G.cols, c), i + 1
    return None, 1 << k


# ---------------------------------------------------------------------------
# the simulator


@dataclass
class SimulatorState:
    gdp: GdpInstance
    ell: int
    rng: random.Random
    challenge_rng: Optional[random.Random] = None
    t1: dict = field(default_factory=dict)        # (x, e) -> (y, K)
    t1_by_word: dict = field(default_factory=dict)  # y -> (x, e)
    t2: dict = field(default_factory=dict)        # y -> K
    off_domain: dict = field(default_factory=dict)  # oracle points with weight(e) != w
    k_star: Optional[bytes] = None
    psi0_star: Optional[BitVector] = None
    solved: Optional[BitVector] = None


def sim_ro_query(state: SimulatorState, gdp: GdpInstance, x: BitVector, e: BitVector) -> Optional[bytes]:
    """Random-oracle answer, or ``None`` once the query solved the GDP instance."""
    hit = state.t1.get((x, e))
    if hit is not None:
        return hit[1]
    if e.weight != gdp.w:
        # outside the proof's domain; answered as an independent oracle point
        out = state.off_domain.get((x, e))
        if out is None:
            out = state.off_domain[(x, e)] = random_bits(state.ell, state.rng)
        return out
    c = mat_vec_mul(x, gdp.G)
    y = c ^ e
    if y == gdp.y_star:
        state.solved = c
        return None
    if y in state.t2:
        return state.t2[y]
    key = random_bits(state.ell, state.rng)
    state.t1[(x, e)] = (y, key)
    state.t1_by_word.setdefault(y, (x, e))
    return key


def sim_dec_query(state: SimulatorState, y: BitVector) -> bytes:
    if y in state.t2:
        return state.t2[y]
    pre = state.t1_by_word.get(y)
    if pre is not None:
        return state.t1[pre][1]
    key = random_bits(state.ell, state.rng)
    state.t2[y] = key
    return key


def sim_challenge(state: SimulatorState) -> tuple[bytes, BitVector]:
    if state.psi0_star is not None:
        raise RuntimeError("challenge already issued")
    state.k_star = random_bits(state.ell, state.challenge_rng or state.rng)
    state.psi0_star = state.gdp.y_star
    return state.k_star, state.psi0_star


def check_simulator_consistency(state: SimulatorState) -> None:
    """Raise ``AssertionError`` if the tables disagree with each other or with ``G``."""
    G = state.gdp.G
    for (x, e), (y, key) in state.t1.items():
        assert mat_vec_mul(x, G) ^ e == y, "T1 entry with y != xG + e"
        if y in state.t2:
            assert state.t2[y] == key, "T1 and T2 disagree on a word"
    for y, (x, e) in state.t1_by_word.items():
        assert state.t1[(x, e)][0] == y


# ---------------------------------------------------------------------------
# the game


class Adversary(Protocol):
    def play(self, pk: KemPublicKey, oracles: "GameOracles", rng: random.Random) -> int:
        """Run the attack through ``oracles`` and return the guess ``b*``."""


@dataclass
class TrialOutcome:
    b: Optional[int] = None
    b_star: Optional[int] = None
    halted: Optional[str] = None
    f1: bool = False
    f2: bool = False
    extracted_c: Optional[BitVector] = None
    gdp: Optional[GdpInstance] = None
    error: Optional[str] = None
    transcript: list = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.halted is None and self.error is None and self.b_star == self.b


@dataclass
class GameReport:
    trials: int = 0
    successes: int = 0
    completed: int = 0
    n_kdf: int = 0
    n_dec: int = 0
    runtime_theta: float = 0.0
    f1_count: int = 0
    f2_count: int = 0
    aborted: int = 0
    extracted_c: Optional[BitVector] = None
    outcomes: list = field(default_factory=list, repr=False)

    @property
    def advantage_estimate(self) -> float:
        if not self.completed:
            return 0.0
        return abs(self.successes / self.completed - 0.5)

    @property
    def f2_fired(self) -> bool:
        return self.f2_count > 0


class GameOracles:
    """What the adversary may call during one trial."""

    def __init__(self, params: SystemParams, mode: str, outcome: TrialOutcome, streams: dict,
                 pk: KemPublicKey, gdp: GdpInstance, sk=None, record: bool = False):
        self.params = params
        self.mode = mode
        self.leaked_plant: Optional[tuple[BitVector, BitVector]] = None
        self.n_dec = 0
        self.n_kdf = 0
        self._outcome = outcome
        self._streams = streams
        self._pk = pk
        self._gdp = gdp
        self._sk = sk
        self._record = record
        self._pre_challenge: set = set()
        self._plant_payload = kdf_payload(*gdp.plant)
        if mode == "real":
            self._oracle = RandomOracle(streams["oracle"])
        else:
            self._state = SimulatorState(gdp, params.ell_k, streams["oracle"], streams["coin"])
        self._psi0_star: Optional[BitVector] = None

    def _log(self, kind: str, inp: str, out: str) -> None:
        if self._record:
            self._outcome.transcript.append((kind, inp or "-", out or "-"))

    def decrypt(self, psi0: BitVector) -> Optional[bytes]:
        if not isinstance(psi0, BitVector) or psi0.length != self.params.n:
            raise ProtocolViolation(f"decryption query must be {self.params.n} bits")
        self.n_dec += 1
        if self._psi0_star is not None and psi0 == self._psi0_star:
            self._log("dec", psi0.to_bytes().hex(), "bot")
            return BOT
        if self._psi0_star is None:
            self._pre_challenge.add(psi0)
        if self.mode == "real":
            key = decaps(self._sk, psi0, self._oracle)
        else:
            key = sim_dec_query(self._state, psi0)
        self._log("dec", psi0.to_bytes().hex(), key.hex())
        return key

    def kdf(self, x: BitVector, e: BitVector) -> bytes:
        if x.length != self.params.k or e.length != self.params.n:
            raise ProtocolViolation("oracle query must be (k-bit x, n-bit e)")
        self.n_kdf += 1
        payload = kdf_payload(x, e)
        if payload == self._plant_payload:
            self._outcome.f2 = True
        if self.mode == "real":
            key = self._oracle(payload, self.params.ell_k)
        else:
            key = sim_ro_query(self._state, self._gdp, x, e)
            if key is None:
                self._outcome.f2 = True
                self._outcome.extracted_c = self._state.solved
                self._log("ro", payload.to_bytes().hex(), "solved")
                raise _Halt("F2")
        self._log("ro", payload.to_bytes().hex(), key.hex())
        return key

    def challenge(self) -> tuple[bytes, BitVector]:
        if self._psi0_star is not None:
            raise ProtocolViolation("challenge requested twice")
        coin = self._streams["coin"]
        b = coin.getrandbits(1)
        self._outcome.b = b
        psi0_star = self._gdp.y_star
        self._psi0_star = psi0_star
        if psi0_star in self._pre_challenge:
            self._outcome.f1 = True
        if self.mode == "real":
            table = self._oracle.table
            if self._plant_payload in table:
                real_key = table.entries[self._plant_payload]
                k_star = real_key if b else random_bits(self.params.ell_k, coin)
            else:
                # H(x*||e*) is still free: sample it and the decoy together
                k_star = random_bits(self.params.ell_k, coin)
                if b:
                    self._oracle.program(self._plant_payload, k_star)
        else:
            if self._outcome.f1:
                self._log("challenge", "", "halt-F1")
                raise _Halt("F1")
            k_star, _ = sim_challenge(self._state)
        self._log("challenge", "", k_star.hex() + ":" + psi0_star.to_bytes().hex())
        return k_star, psi0_star


def _streams(trial_seed: int) -> dict:
    return {name: random.Random(f"{trial_seed}:{name}") for name in ("key", "plant", "oracle", "coin", "adversary")}


def play_trial(adversary: Adversary, params: SystemParams, family: str, trial_seed: int, *,
               mode: Literal["real", "simulated"] = "real", leak_plant: bool = False,
               record_transcript: bool = False, family_opts: Optional[dict] = None) -> tuple[TrialOutcome, GameOracles]:
    """One run of the game (real KEM or simulator) from a single seed."""
    if mode not in ("real", "simulated"):
        raise ValueError(f"unknown mode {mode!r}")
    streams = _streams(trial_seed)
    pk, sk = kem_keygen(params, family, streams["key"], **(family_opts or {}))
    gdp = plant_instance(pk.G, params.w, streams["plant"])
    outcome = TrialOutcome(gdp=gdp)
    oracles = GameOracles(params, mode, outcome, streams, pk, gdp, sk if mode == "real" else None,
                          record_transcript)
    if leak_plant:
        oracles.leaked_plant = gdp.plant
    try:
        b_star = adversary.play(pk, oracles, streams["adversary"])
        if oracles._psi0_star is None:
            raise ProtocolViolation("adversary never requested the challenge")
        if b_star not in (0, 1):
            raise ProtocolViolation(f"guess must be 0 or 1, got {b_star!r}")
        outcome.b_star = int(b_star)
        oracles._log("guess", "", str(b_star))
    except _Halt as halt:
        outcome.halted = halt.event
    except ProtocolViolation as exc:
        outcome.error = str(exc)
    return outcome, oracles


def run_cca_game(adversary: Adversary, params: SystemParams, family: str = "toy", trials: int = 1,
                 rng: Optional[random.Random] = None, *, mode: Literal["real", "simulated"] = "real",
                 leak_plant: bool = False, record_transcripts: bool = False,
                 family_opts: Optional[dict] = None) -> GameReport:
    """Play ``trials`` independent games and aggregate them.

    ``mode="real"`` is the unmodified game (events are recorded, never
    enforced); ``mode="simulated"`` is the reduction, which halts on F1 at
    challenge time and on F2 with an extracted codeword.
    """
    rng = rng if rng is not None else random.Random(0)
    report = GameReport()
    start = time.perf_counter()
    for _ in range(trials):
        outcome, oracles = play_trial(adversary, params, family, rng.getrandbits(64), mode=mode,
                                      leak_plant=leak_plant, record_transcript=record_transcripts,
                                      family_opts=family_opts)
        report.trials += 1
        report.n_dec += oracles.n_dec
        report.n_kdf += oracles.n_kdf
        report.f1_count += outcome.f1
        report.f2_count += outcome.f2
        if outcome.error is not None:
            report.aborted += 1
        elif outcome.halted is None:
            report.completed += 1
            report.successes += outcome.success
        if outcome.extracted_c is not None and report.extracted_c is None:
            report.extracted_c = outcome.extracted_c
        report.outcomes.append(outcome)
    report.runtime_theta = time.perf_counter() - start
    return report


def format_transcript(transcript: list) -> str:
    """One query per line: ``kind input-hex output-hex``."""
    return "".join(f"{kind} {inp} {out}\n" for kind, inp, out in transcript)


# ---------------------------------------------------------------------------
# stock adversaries


class ConstantGuessAdversary:
    def __init__(self, guess: int = 0):
        self.guess = guess

    def play(self, pk, oracles, rng):
        oracles.challenge()
        return self.guess


class CheatingAdversary:
    """Recomputes the challenge key from the leaked ``(x*, e*)``."""

    def play(self, pk, oracles, rng):
        k_star, _ = oracles.challenge()
        x, e = oracles.leaked_plant
        return int(oracles.kdf(x, e) == k_star)


class RandomDecryptionAdversary:
    """``n_dec`` decryption queries on distinct uniformly chosen valid ciphertexts, then a coin flip."""

    def __init__(self, n_dec: int):
        self.n_dec = n_dec

    def play(self, pk, oracles, rng):
        p = oracles.params
        if self.n_dec > count_ciphertext_space(p):
            raise ProtocolViolation("more distinct queries requested than valid ciphertexts exist")
        seen = set()
        while len(seen) < self.n_dec:
            x = random_vector(p.k, rng)
            e = sample_constant_weight(p.n, p.w, rng)
            if (x, e) in seen:
                continue
            seen.add((x, e))
            oracles.decrypt(mat_vec_mul(x, pk.G) ^ e)
        oracles.challenge()
        return rng.getrandbits(1)
