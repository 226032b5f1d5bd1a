import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from libraries.eqparser import parse  # noqa: E402

FIXTURES = Path(__file__).parent / 'fixtures'


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def jet_of():
    '''Parse an expression in n variables, e.g. jet_of('z1^2*zb1^2', 1).'''

    def make(text: str, n: int, trunc: int = None):
        return parse(text, n, trunc)

    return make


@pytest.fixture
def diagonal():
    # |z1|^4 + |z2|^6
    return parse('z1^2*zb1^2 + z2^3*zb2^3', 2)


@pytest.fixture
def staircase():
    # |z1^2 - z2^3|^2
    return parse('z1^2*zb1^2 - z1^2*zb2^3 - zb1^2*z2^3 + z2^3*zb2^3', 2)
