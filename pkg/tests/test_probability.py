import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancecheck.errors import DomainError
from chancecheck.probability import (
    best_of_m,
    binom_cdf,
    binom_logpmf,
    binom_pmf,
    binom_sf,
    combine_results,
    intersect,
    wilson_interval,
)

from conftest import exact_pmf, exact_sf


def mp_sf(k, n, p, dps=40):
    with mpmath.workdps(dps):
        p = mpmath.mpf(p)
        return float(mpmath.fsum(
            mpmath.binomial(n, j) * p**j * (1 - p) ** (n - j) for j in range(k, n + 1)
        ))


class TestPmf:
    def test_information_paradox_universe_one(self):
        # mpmath, 50 digits: 0.056326414502921143775
        assert binom_pmf(50, 1_000_000, 5e-5) == pytest.approx(0.056326414502921144, rel=1e-12)

    def test_information_paradox_universe_two(self):
        assert binom_pmf(5, 10, 5e-5) == pytest.approx(7.8730314468651565e-20, rel=1e-12)

    def test_zero_probability_zero_count(self):
        assert binom_pmf(0, 10, 0.0) == 1.0
        assert binom_pmf(1, 10, 0.0) == 0.0
        assert binom_pmf(10, 10, 1.0) == 1.0

    def test_large_n_precision(self):
        # 1e7 trials: mpmath reference 0.00021695125838732975782
        got = binom_pmf(3_001_000, 10**7, 0.3)
        assert got == pytest.approx(0.00021695125838732976, rel=1e-10)

    @pytest.mark.parametrize("n", [0, 1, 2, 7, 33, 100, 500, 1000])
    @pytest.mark.parametrize("p", [0.0, 1e-4, 0.3, 0.5, 0.97, 1.0])
    def test_sums_to_one(self, n, p):
        total = math.fsum(binom_pmf(k, n, p) for k in range(n + 1))
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_sums_to_one_at_a_million(self):
        n, p = 10**6, 0.5
        lo, hi = 500_000 - 4000, 500_000 + 4000
        total = math.fsum(binom_pmf(k, n, p) for k in range(lo, hi + 1))
        assert total == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("k,n,p", [(8, 10, 0.5), (3, 40, 0.1), (123, 700, 0.17), (0, 50, 0.02)])
    def test_matches_exact_rational(self, k, n, p):
        assert binom_pmf(k, n, p) == pytest.approx(float(exact_pmf(k, n, p)), rel=1e-12)

    def test_logpmf_survives_underflow(self):
        assert binom_pmf(1000, 1000, 1e-5) == 0.0
        assert binom_logpmf(1000, 1000, 1e-5) == pytest.approx(1000 * math.log(1e-5), rel=1e-12)

    @pytest.mark.parametrize(
        "args", [(11, 10, 0.5), (-1, 10, 0.5), (1, 10, 1.5), (1, 10, -0.1), (1, 10, float("nan")), (1.5, 10, 0.5)]
    )
    def test_domain_errors(self, args):
        with pytest.raises(DomainError):
            binom_pmf(*args)
        with pytest.raises(DomainError):
            binom_sf(*args)


class TestSf:
    def test_eight_of_ten_is_exact(self):
        assert exact_sf(8, 10, Fraction(1, 2)) == Fraction(56, 1024)
        assert binom_sf(8, 10, 0.5) == 0.0546875

    @pytest.mark.parametrize(
        "k,n,p,expected",
        [
            (600, 1000, 0.5, 1.3642320780330092e-10),
            (65, 100, 0.5, 0.0017588208614850791),
            (301, 500, 0.6, 0.48301175754121365),
            (251, 500, 0.4, 2.4976515112154464e-06),
        ],
    )
    def test_worked_examples(self, k, n, p, expected):
        assert binom_sf(k, n, p) == pytest.approx(expected, rel=1e-10)

    def test_brute_force_small_n(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            n = int(rng.integers(0, 1001))
            k = int(rng.integers(0, n + 1))
            p = float(rng.choice([rng.uniform(), rng.uniform() * 1e-3, 0.5]))
            direct = math.fsum(binom_pmf(j, n, p) for j in range(k, n + 1))
            assert binom_sf(k, n, p) == pytest.approx(direct, rel=1e-9, abs=1e-300)

    @pytest.mark.parametrize(
        "k,n,p", [(51, 10**6, 5e-5), (500_600, 10**6, 0.5), (499_000, 10**6, 0.5), (29_500, 10**5, 0.3)]
    )
    def test_relative_error_large_n(self, k, n, p):
        expected = mp_sf(k, n, p) if n <= 10**5 else None
        if expected is None:
            # Sum the short side with mpmath and complement when needed.
            with mpmath.workdps(40):
                pm = mpmath.mpf(p)

                def term(j):
                    return mpmath.binomial(n, j) * pm**j * (1 - pm) ** (n - j)

                mean = n * p
                if k > mean:
                    expected = float(mpmath.fsum(term(j) for j in range(k, min(n, k + 20000) + 1)))
                else:
                    lo = max(0, k - 20000)
                    expected = float(1 - mpmath.fsum(term(j) for j in range(lo, k)))
        assert binom_sf(k, n, p) == pytest.approx(expected, rel=1e-9)

    def test_edges(self):
        assert binom_sf(0, 10, 0.3) == 1.0
        assert binom_sf(10, 10, 0.0) == 0.0
        assert binom_sf(10, 10, 1.0) == 1.0
        assert binom_sf(0, 0, 0.5) == 1.0

    @settings(max_examples=200, deadline=None)
    @given(
        n=st.integers(0, 400),
        data=st.data(),
        p=st.floats(0.0, 1.0, allow_nan=False),
    )
    def test_symmetry(self, n, data, p):
        k = data.draw(st.integers(0, n))
        assert binom_sf(k, n, p) == pytest.approx(binom_cdf(n - k, n, 1 - p), abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(1, 2000), data=st.data(), p=st.floats(0.0, 1.0, allow_nan=False))
    def test_cdf_plus_sf_is_one(self, n, data, p):
        k = data.draw(st.integers(0, n - 1))
        assert binom_cdf(k, n, p) + binom_sf(k + 1, n, p) == pytest.approx(1.0, abs=1e-12)


class TestCdf:
    @pytest.mark.parametrize(
        "k,n,expected",
        [(4, 10, 0.16623861760000004), (24, 50, 0.0573437605422004), (49, 100, 0.016761686503161407)],
    )
    def test_rigged_coin_losing_out(self, k, n, expected):
        assert binom_cdf(k, n, 0.6) == pytest.approx(expected, rel=1e-12)

    def test_full_range(self):
        assert binom_cdf(10, 10, 0.3) == 1.0


class TestBestOfM:
    def test_two_attempts(self):
        # 1 - (1 - 56/1024)**2 = 1743/16384
        assert best_of_m(8, 10, 0.5, 2) == pytest.approx(1743 / 16384, rel=1e-14)

    def test_single_attempt_is_sf(self):
        for k, n, p in [(65, 100, 0.5), (3, 7, 0.2), (600, 1000, 0.5)]:
            assert best_of_m(k, n, p, 1) == binom_sf(k, n, p)

    def test_ten_attempts(self):
        # mpmath: 1 - (1 - sf)**10 = 0.017449654221579148853
        assert best_of_m(65, 100, 0.5, 10) == pytest.approx(0.017449654221579149, rel=1e-12)

    def test_hundred_attempts_reaches_sixteen_percent(self):
        assert best_of_m(65, 100, 0.5, 100) == pytest.approx(0.1614129948823228, rel=1e-12)

    def test_tiny_probability_keeps_digits(self):
        s = binom_sf(600, 1000, 0.5)
        assert best_of_m(600, 1000, 0.5, 1000) == pytest.approx(1000 * s, rel=1e-6)

    def test_monte_carlo_cross_check(self):
        rng = np.random.default_rng(5)
        wins = rng.binomial(100, 0.5, size=(200_000, 10))
        freq = np.mean((wins >= 65).any(axis=1))
        lo, hi = wilson_interval(int(freq * 200_000), 200_000, 0.999)
        assert lo <= best_of_m(65, 100, 0.5, 10) <= hi

    def test_zero_attempts_rejected(self):
        with pytest.raises(DomainError):
            best_of_m(8, 10, 0.5, 0)

    @given(st.integers(0, 60), st.data(), st.floats(0, 1), st.integers(1, 50))
    def test_monotone_in_m(self, n, data, p, m):
        k = data.draw(st.integers(0, n))
        assert best_of_m(k, n, p, m) <= best_of_m(k, n, p, m + 1)


class TestCombine:
    def test_intersect(self):
        assert intersect(0.01, 0.01) == pytest.approx(1e-4, rel=1e-15)
        assert intersect(0.3, 1.0) == 0.3
        assert intersect(0.0, 0.7) == 0.0

    def test_two_informative_results(self):
        assert combine_results([0.01, 0.01], 0.05) == 0.0001

    def test_informative_with_useless(self):
        assert combine_results([0.01, 1.0], 0.05) == pytest.approx(0.0199, rel=1e-12)

    def test_single_result(self):
        assert combine_results([0.012], 0.05) == 0.012

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            combine_results([])

    @given(
        st.lists(st.floats(0, 1), min_size=1, max_size=8),
        st.floats(0, 0.0499),
        st.floats(0.05, 1),
    )
    def test_monotonicity(self, ps, informative, useless):
        base = combine_results(ps)
        assert combine_results(ps + [informative]) <= base + 1e-15
        assert combine_results(ps + [useless]) >= base - 1e-15


class TestWilson:
    def test_zero_successes(self):
        assert wilson_interval(0, 10, 0.95)[0] == 0.0

    def test_all_successes(self):
        assert wilson_interval(10, 10, 0.95)[1] == 1.0

    def test_half(self):
        # roots of (0.5 - p)^2 n = z^2 p (1 - p), solved in mpmath
        lo, hi = wilson_interval(50, 100, 0.95)
        assert lo == pytest.approx(0.4038315303659956, abs=1e-12)
        assert hi == pytest.approx(0.5961684696340044, abs=1e-12)

    @given(st.integers(1, 10**6), st.data(), st.floats(0.5, 0.9999))
    def test_contains_point(self, n, data, conf):
        x = data.draw(st.integers(0, n))
        lo, hi = wilson_interval(x, n, conf)
        assert 0.0 <= lo <= x / n <= hi <= 1.0

    def test_errors(self):
        with pytest.raises(DomainError):
            wilson_interval(0, 0)
        with pytest.raises(DomainError):
            wilson_interval(5, 4)
