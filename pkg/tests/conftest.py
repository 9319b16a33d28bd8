import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mceliece_kem import SystemParams  # noqa: E402
from mceliece_kem.codes import toy_from_generator  # noqa: E402
from mceliece_kem.gf2 import BitMatrix  # noqa: E402

HAMMING_ROWS = ["1000110", "0100101", "0010011", "0001111"]
EXT_HAMMING_ROWS = ["10001101", "01001011", "00100111", "00011110"]


@pytest.fixture
def rng():
    return random.Random(20241016)


@pytest.fixture
def hamming():
    G = BitMatrix.from_strs(HAMMING_ROWS)
    return toy_from_generator(G, 1), G


@pytest.fixture
def ext_hamming():
    G = BitMatrix.from_strs(EXT_HAMMING_ROWS)
    return toy_from_generator(G, 1), G


@pytest.fixture
def p741():
    return SystemParams(7, 4, 1)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
