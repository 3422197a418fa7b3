import math

import numpy as np
import pytest

from jamkit.exact import (asymptotic_variance, blocking_vacancy_upper_bound,
                          branch_probability, chain_solution, correlation,
                          covariance, occupation_probability,
                          pair_vacancy_double_reduced, pair_vacancy_full,
                          pair_vacancy_reduced, variance_lower_bound)
from jamkit.processes import ProcessKind as PK

KINDS3 = (PK.BLOCKING, PK.DIMER, PK.ANNIHILATION)


def blocking_vacancy(k, t):
    b = branch_probability(PK.BLOCKING, k, t)
    return 0.5 * (1.0 + b * b)


class TestBranchProbability:
    def test_initial_condition(self):
        for kind in KINDS3:
            for k in (1, 2, 5):
                assert branch_probability(kind, k, 0.0) == 1.0

    def test_blocking_k2_half(self):
        assert branch_probability(PK.BLOCKING, 2, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_annihilation_k1(self):
        assert branch_probability(PK.ANNIHILATION, 1, 1.0) == pytest.approx(
            math.exp(-0.5), abs=1e-15)

    def test_dimer_equals_blocking(self):
        for k in (1, 2, 4):
            for t in (0.2, 0.9):
                assert branch_probability(PK.DIMER, k, t) == branch_probability(
                    PK.BLOCKING, k, t)

    def test_map_has_none(self):
        with pytest.raises(ValueError):
            branch_probability(PK.MAP, 2, 0.5)

    def test_monotone_decreasing_in_time(self):
        grid = np.linspace(0.0, 1.0, 101)
        for kind in KINDS3:
            for k in (1, 3):
                vals = [branch_probability(kind, k, t) for t in grid]
                assert np.all(np.diff(vals) < 0)


class TestOccupation:
    @pytest.mark.parametrize("k,kind,value", [
        (3, PK.BLOCKING, 1.0 / 3.0), (3, PK.DIMER, 8.0 / 9.0),
        (3, PK.ANNIHILATION, 0.25), (1, PK.ANNIHILATION, math.exp(-1.0)),
        (1, PK.BLOCKING, 0.5 * (1 - math.exp(-2.0))),
    ])
    def test_jamming_values(self, k, kind, value):
        assert occupation_probability(kind, k, 1.0) == pytest.approx(value, abs=1e-12)

    def test_map_matches_blocking_at_jamming(self):
        for k in (2, 3, 7):
            assert occupation_probability(PK.MAP, k, 1.0) == pytest.approx(
                occupation_probability(PK.BLOCKING, k, 1.0), abs=1e-14)

    def test_map_k2(self):
        assert occupation_probability(PK.MAP, 2, 1.0) == pytest.approx(0.375, abs=1e-14)

    def test_map_requires_k2(self):
        with pytest.raises(ValueError):
            occupation_probability(PK.MAP, 1, 0.5)

    def test_monotone_in_time(self):
        grid = np.linspace(0.0, 1.0, 101)
        for k in (1, 2, 4):
            for kind in KINDS3 + ((PK.MAP,) if k >= 2 else ()):
                vals = [occupation_probability(kind, k, t) for t in grid]
                diffs = np.diff(vals)
                if kind in (PK.BLOCKING, PK.DIMER):
                    assert np.all(diffs >= -1e-14)
                else:
                    assert np.all(diffs <= 1e-14)

    def test_time_range_checked(self):
        with pytest.raises(ValueError):
            occupation_probability(PK.BLOCKING, 2, 1.2)


class TestPairHelpers:
    def test_double_reduced_base_cases(self):
        for k in (2, 3):
            for t in (0.3, 1.0):
                g = 2.0 * math.log(branch_probability(PK.BLOCKING, k, t))
                assert pair_vacancy_double_reduced(k, t, 0) == pytest.approx(
                    1.0 + g / 2.0, abs=1e-14)
                assert pair_vacancy_double_reduced(k, t, -1) == 1.0

    def test_limits(self):
        # distant sites decouple: products of the single-site quantities
        for k in (2, 3, 5):
            t = 0.8
            b = branch_probability(PK.BLOCKING, k, t)
            vac = blocking_vacancy(k, t)
            assert pair_vacancy_double_reduced(k, t, 30) == pytest.approx(
                b * b, abs=1e-10)
            assert pair_vacancy_reduced(k, t, 40) == pytest.approx(
                vac * b, abs=1e-10)
            assert pair_vacancy_full(k, t, 40) == pytest.approx(
                vac * vac, abs=1e-10)

    def test_reduced_at_zero_is_branch(self):
        for k in (2, 4):
            t = 0.6
            assert pair_vacancy_reduced(k, t, 0) == pytest.approx(
                branch_probability(PK.BLOCKING, k, t), abs=1e-14)

    def test_full_consistent_with_covariance(self):
        for k in (1, 2, 3):
            for t in (0.4, 1.0):
                vac = blocking_vacancy(k, t)
                for m in (1, 2, 5):
                    assert pair_vacancy_full(k, t, m) - vac * vac == pytest.approx(
                        covariance(PK.BLOCKING, k, m, t), abs=1e-13)


class TestChainSolution:
    def test_m1_is_seed(self):
        for a, b, c, v in [(1.5, 0.5, -1.0, -0.8), (2.0, 1.0, -2.0, -0.3)]:
            assert chain_solution(a, b, c, 1, v) == pytest.approx(
                a - b * math.exp(v / c), abs=1e-14)

    def test_b_zero_drops_tail(self):
        a, m, v = 1.25, 4, -0.9
        expected = a * v ** 3 / 6.0 + sum(v ** j / math.factorial(j) for j in range(3))
        assert chain_solution(a, 0.0, -1.0, m, v) == pytest.approx(expected, abs=1e-14)

    def test_rejects_zero_c(self):
        with pytest.raises(ValueError):
            chain_solution(1.0, 1.0, 0.0, 2, -0.5)

    def test_derivative_relation(self):
        # d f_m / dv = f_{m-1}, checked by central differences
        a, b, c = 2.0, 1.0, -1.0
        v, h = -0.7, 1e-6
        for m in (2, 3, 5):
            fd = (chain_solution(a, b, c, m, v + h)
                  - chain_solution(a, b, c, m, v - h)) / (2 * h)
            assert fd == pytest.approx(chain_solution(a, b, c, m - 1, v), abs=1e-8)


class TestCovariance:
    def test_m1_blocking_identity(self):
        for k in (1, 2, 3, 5):
            for t in (0.25, 0.5, 1.0):
                vac = blocking_vacancy(k, t)
                assert covariance(PK.BLOCKING, k, 1, t) == pytest.approx(
                    -((1 - vac) ** 2), abs=1e-12)

    def test_m1_edge_kinds_at_jamming(self):
        for k in (1, 2, 3, 5):
            vac = 1.0 - occupation_probability(PK.DIMER, k, 1.0)
            assert covariance(PK.DIMER, k, 1, 1.0) == pytest.approx(
                -vac * vac, abs=1e-12)
            occ = occupation_probability(PK.ANNIHILATION, k, 1.0)
            assert covariance(PK.ANNIHILATION, k, 1, 1.0) == pytest.approx(
                -occ * occ, abs=1e-12)

    def test_sign_pattern(self):
        for kind in (PK.BLOCKING, PK.ANNIHILATION):
            for k in range(1, 7):
                for m in range(1, 9):
                    for t in (0.25, 0.5, 1.0):
                        c = covariance(kind, k, m, t)
                        assert c != 0.0
                        assert (c > 0) == (m % 2 == 0), (kind, k, m, t, c)

    def test_decay(self):
        for kind in (PK.BLOCKING, PK.ANNIHILATION):
            for k in (3, 5):
                mags = [abs(covariance(kind, k, m, 1.0)) for m in range(1, 7)]
                assert all(a > b for a, b in zip(mags, mags[1:]))

    def test_blocking_k1_against_direct_series(self):
        # independent brute-force sum of the tail series in 2*log(branch)
        for t in (0.3, 0.8, 1.0):
            b = math.exp(-t)
            g = 2.0 * math.log(b)
            for m in (1, 2, 4):
                direct = -0.5 * b * b * sum(
                    g ** (m + 1 + 2 * n) / math.factorial(m + 1 + 2 * n)
                    for n in range(60))
                assert covariance(PK.BLOCKING, 1, m, t) == pytest.approx(
                    direct, abs=1e-15)

    def test_map_time_half_differs_but_matches_at_one(self):
        k = 3
        assert covariance(PK.MAP, k, 2, 0.5) != pytest.approx(
            covariance(PK.BLOCKING, k, 2, 0.5), abs=1e-6)
        assert covariance(PK.MAP, k, 2, 1.0) == pytest.approx(
            covariance(PK.BLOCKING, k, 2, 1.0), abs=1e-12)

    def test_map_requires_k2(self):
        with pytest.raises(ValueError):
            covariance(PK.MAP, 1, 1, 0.5)

    def test_rejects_m0(self):
        with pytest.raises(ValueError):
            covariance(PK.BLOCKING, 2, 0, 0.5)


class TestCorrelation:
    @pytest.mark.parametrize("kind,k,m,value", [
        (PK.BLOCKING, 3, 1, -0.5000), (PK.BLOCKING, 3, 2, 0.1760),
        (PK.BLOCKING, 5, 3, -0.0200), (PK.DIMER, 5, 1, -0.0982),
        (PK.DIMER, 3, 3, 0.0085), (PK.ANNIHILATION, 3, 3, -0.0130),
        (PK.ANNIHILATION, 5, 2, 0.0407),
    ])
    def test_published_entries(self, kind, k, m, value):
        assert correlation(kind, k, m, 1.0) == pytest.approx(value, abs=5e-5)

    def test_blocking_k3_m1_is_exactly_minus_half(self):
        assert correlation(PK.BLOCKING, 3, 1, 1.0) == pytest.approx(-0.5, abs=1e-12)

    def test_degenerate_at_time_zero(self):
        with pytest.raises(ValueError):
            correlation(PK.BLOCKING, 3, 1, 0.0)


class TestBounds:
    def test_vacancy_bound_values(self):
        assert blocking_vacancy_upper_bound(3, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-14)
        assert 1 - blocking_vacancy_upper_bound(2, 1.0) == pytest.approx(0.375, abs=1e-14)
        assert 1 - blocking_vacancy_upper_bound(5, 1.0) == pytest.approx(0.2764, abs=5e-5)
        assert 1 - blocking_vacancy_upper_bound(7, 1.0) == pytest.approx(0.2386, abs=5e-5)

    def test_vacancy_bound_requires_k2(self):
        with pytest.raises(ValueError):
            blocking_vacancy_upper_bound(1, 0.5)

    def test_variance_bound_hand_value(self):
        assert variance_lower_bound(PK.BLOCKING, 2, 0.5, 100) == pytest.approx(
            100.0 / 48.0, abs=1e-12)

    def test_variance_bound_vanishes_at_zero(self):
        assert variance_lower_bound(PK.BLOCKING, 3, 1e-12, 50) < 1e-10

    def test_edge_kind_bound_allows_degree_one(self):
        v = variance_lower_bound(PK.DIMER, 1, 0.5, 10)
        assert v == pytest.approx(0.5 * 0.5 * 0.5 / 1.0 * 10, abs=1e-12)

    def test_jamming_bound_needs_entropy_count(self):
        with pytest.raises(ValueError):
            variance_lower_bound(PK.BLOCKING, 4, 1.0, 100)
        v = variance_lower_bound(PK.BLOCKING, 4, 1.0, 100, card_w_plus=400)
        assert v == pytest.approx(400 * 2.0 ** (-321) / (4 ** 6 * 25), rel=1e-12)

    def test_annihilation_jamming_unsupported(self):
        with pytest.raises(ValueError):
            variance_lower_bound(PK.ANNIHILATION, 4, 1.0, 100, card_w_plus=100)

    def test_map_unsupported(self):
        with pytest.raises(ValueError):
            variance_lower_bound(PK.MAP, 4, 0.5, 100)


class TestAsymptoticVariance:
    def test_values_at_jamming(self):
        assert asymptotic_variance(PK.BLOCKING, 1.0) == pytest.approx(
            math.exp(-4.0), abs=1e-15)
        assert asymptotic_variance(PK.ANNIHILATION, 1.0) == pytest.approx(
            3 * math.exp(-2.0) - math.exp(-1.0), abs=1e-15)

    def test_dimer_is_four_times_blocking(self):
        for t in np.linspace(0.05, 1.0, 20):
            assert asymptotic_variance(PK.DIMER, t) == pytest.approx(
                4.0 * asymptotic_variance(PK.BLOCKING, t), rel=1e-14)

    def test_map_unsupported(self):
        with pytest.raises(ValueError):
            asymptotic_variance(PK.MAP, 0.5)

    def test_rejects_time_zero(self):
        with pytest.raises(ValueError):
            asymptotic_variance(PK.BLOCKING, 0.0)
