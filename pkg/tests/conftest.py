from fractions import Fraction
from math import comb

import pytest

from chancecheck.sequence import SystemTrace

REFERENCE_F = (1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 2)


def exact_pmf(k, n, p):
    """Brute-force binomial mass in exact rational arithmetic."""
    p = Fraction(p)
    return comb(n, k) * p**k * (1 - p) ** (n - k)


def exact_sf(k, n, p):
    return sum(exact_pmf(j, n, p) for j in range(k, n + 1))


@pytest.fixture
def reference_trace():
    return SystemTrace.from_states(REFERENCE_F)


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
