"""Signed-moment predictions, polytope volumes and the finite-size oracle.

The k = 2 crossing contribution 2/3 was pinned before the build by the
Riemann-grid oracle (and is re-derivable by hand: the integrand splits into
four unit-simplex integrals of 1/6 each).  The finite-size oracle is checked
against a from-scratch rational expansion written inline here.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from chordspec import theory as th
from chordspec.ensembles import BaseDistribution, Kind
from chordspec.pairings import CapExceededError, Pairing, catalan, double_factorial

CROSSING_K2 = Pairing((2, 3, 0, 1))
ADJACENT_K2 = Pairing((1, 0, 3, 2))
NESTED_K2 = Pairing((3, 2, 1, 0))


class TestEpsilonWeight:
    def test_repeated_pair_cancels(self):
        assert th.epsilon_weight([1, 2, 1, 2], Fraction(3, 4)) == 1

    def test_palindrome_cycle_cancels(self):
        assert th.epsilon_weight([1, 2, 3, 2], Fraction(3, 4)) == 1

    def test_distinct_pairs(self):
        assert th.epsilon_weight([1, 2, 3, 4], Fraction(3, 4)) == Fraction(1, 16)
        assert th.epsilon_weight([1, 2, 3, 4], 1.0) == 1.0

    def test_all_even_multiplicities(self):
        # a closed walk traversed twice uses every pair an even number of times
        assert th.epsilon_weight([1, 2, 3, 4, 1, 2, 3, 4], 0.6) == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_rotation_and_reversal_invariance(self, seed):
        rng = np.random.default_rng(seed)
        cycle = list(rng.integers(1, 5, size=8))
        base = th.epsilon_weight(cycle, Fraction(2, 3))
        for shift in range(1, 8):
            rotated = cycle[shift:] + cycle[:shift]
            assert th.epsilon_weight(rotated, Fraction(2, 3)) == base
        assert th.epsilon_weight(cycle[::-1], Fraction(2, 3)) == base


class TestPalindromicPrediction:
    @pytest.mark.parametrize("k", range(1, 8))
    def test_endpoints(self, k):
        assert th.signed_moment_palindromic(k, 1).value_exact == double_factorial(2 * k - 1)
        assert th.signed_moment_palindromic(k, Fraction(1, 2)).value_exact == catalan(k)

    def test_interpolated_fourth_moment(self):
        prediction = th.signed_moment_palindromic(2, Fraction(3, 4))
        assert prediction.value_exact == Fraction(33, 16)
        assert prediction.value == 2.0625

    def test_decomposition_terms_nonnegative(self):
        prediction = th.signed_moment_palindromic(4, Fraction(3, 4))
        terms = [row["term"] for row in prediction.decomposition]
        assert all(t >= 0 for t in terms)
        partials = np.cumsum(terms)
        assert np.all(np.diff(partials) >= 0)
        assert partials[-1] == pytest.approx(prediction.value)

    def test_small_k_avoids_enumeration(self):
        # k <= 5 uses closed forms, so an enumeration cap of 1 must not matter
        assert th.signed_moment_palindromic(5, 1, cap=1).value_exact == 945

    def test_cap_error_past_census(self):
        with pytest.raises(CapExceededError):
            th.signed_moment_palindromic(12, Fraction(3, 4))

    def test_p_validated(self):
        with pytest.raises(ValueError):
            th.signed_moment_palindromic(3, 0.4)

    @pytest.mark.parametrize("k", range(1, 8))
    @pytest.mark.parametrize("p", [Fraction(3, 5), Fraction(3, 4), Fraction(9, 10)])
    def test_support_lower_bound(self, k, p):
        moment = th.signed_moment_palindromic(k, p).value_exact
        assert moment >= (2 * p - 1) ** (2 * k) * double_factorial(2 * k - 1)


class TestToeplitzVolume:
    def test_grid_pins_crossing_value(self):
        value = th.toeplitz_x_grid(CROSSING_K2, 2000)
        assert value == pytest.approx(2 / 3, abs=1e-5)

    @pytest.mark.parametrize("pairing", [ADJACENT_K2, NESTED_K2])
    def test_grid_noncrossing_is_one(self, pairing):
        assert th.toeplitz_x_grid(pairing, 500) == pytest.approx(1.0, abs=1e-9)

    def test_mc_within_ci_of_grid(self):
        estimate, half_width = th.toeplitz_x(CROSSING_K2, 200_000, seed=5)
        assert abs(estimate - 2 / 3) <= half_width

    def test_mc_noncrossing_near_one(self):
        estimate, half_width = th.toeplitz_x(ADJACENT_K2, 50_000, seed=2)
        assert abs(estimate - 1.0) <= max(half_width, 1e-12)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_estimates_in_unit_interval(self, seed):
        for pairing in (CROSSING_K2, ADJACENT_K2, Pairing((3, 4, 5, 0, 1, 2))):
            estimate, _ = th.toeplitz_x(pairing, 20_000, seed=seed)
            assert 0.0 <= estimate <= 1.0

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            th.toeplitz_x(CROSSING_K2, 5000, seed=0)

    def test_grid_budget(self):
        with pytest.raises(ValueError):
            th.toeplitz_x_grid(Pairing((3, 4, 5, 0, 1, 2)), 2000)


class TestToeplitzPrediction:
    def test_semicircle_at_half(self):
        prediction = th.signed_moment_toeplitz(2, Fraction(1, 2), 20_000, seed=1)
        assert prediction.value == 2.0
        assert prediction.x_method == th.X_METHOD_EXACT
        assert prediction.mc_ci == 0.0

    def test_unsigned_fourth_moment(self):
        prediction = th.signed_moment_toeplitz(2, 1, 200_000, seed=9)
        assert prediction.x_method == th.X_METHOD_MC
        assert abs(prediction.value - 8 / 3) <= prediction.mc_ci + 5e-3

    def test_monotone_in_p(self):
        values = [
            th.signed_moment_toeplitz(2, p, 20_000, seed=4).value
            for p in (Fraction(1, 2), Fraction(5, 8), Fraction(3, 4), Fraction(7, 8), 1)
        ]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_decomposition_bookkeeping(self):
        prediction = th.signed_moment_toeplitz(3, 1, 20_000, seed=2)
        mults = sum(row["multiplicity"] for row in prediction.decomposition)
        assert mults == 15
        assert prediction.value == pytest.approx(
            sum(row["term"] for row in prediction.decomposition)
        )


class TestHighlyPalindromicPrediction:
    def test_semicircle_endpoint(self):
        prediction = th.signed_moment_highly_palindromic(3, Fraction(1, 2), 1)
        assert prediction.supported and prediction.value == 5.0

    @pytest.mark.parametrize("p", [Fraction(3, 4), 1])
    def test_unsupported_away_from_half(self, p):
        prediction = th.signed_moment_highly_palindromic(3, p, 1)
        assert not prediction.supported
        assert prediction.value is None
        assert prediction.reason


def _finite_moment_from_scratch(N, k, p, base):
    """Independent rational expansion for the Toeplitz kind (slow, tiny N)."""
    total = Fraction(0)
    for tup in itertools.product(range(N), repeat=k):
        pairs = [
            (min(tup[t], tup[(t + 1) % k]), max(tup[t], tup[(t + 1) % k]))
            for t in range(k)
        ]
        diff_groups: dict[int, int] = {}
        for lo, hi in pairs:
            diff_groups[hi - lo] = diff_groups.get(hi - lo, 0) + 1
        factor = Fraction(1)
        for mult in diff_groups.values():
            factor *= base.moment(mult)
        if factor == 0:
            continue
        total += factor * th.epsilon_weight([t for t in tup], p)
    return total / N ** (k // 2 + 1)


class TestBruteForceOracle:
    @pytest.mark.parametrize(
        "kind,degree",
        [(Kind.FULL_SYMMETRIC, 0), (Kind.TOEPLITZ, 0), (Kind.PALINDROMIC_TOEPLITZ, 0), (Kind.HIGHLY_PALINDROMIC, 1)],
    )
    @pytest.mark.parametrize("N", [4, 8])
    def test_second_moment_is_one(self, kind, degree, N):
        value = th.brute_force_finite_moment(
            N, 2, kind, Fraction(3, 4), palindrome_degree=degree
        )
        assert value == 1

    @pytest.mark.parametrize("base", list(BaseDistribution))
    def test_odd_moments_vanish(self, base):
        assert th.brute_force_finite_moment(5, 3, Kind.TOEPLITZ, Fraction(3, 4), base) == 0

    @pytest.mark.parametrize("base", list(BaseDistribution))
    @pytest.mark.parametrize("p", [Fraction(1, 2), Fraction(3, 4), Fraction(1)])
    def test_matches_from_scratch_expansion(self, base, p):
        mine = th.brute_force_finite_moment(3, 4, Kind.TOEPLITZ, p, base)
        reference = _finite_moment_from_scratch(3, 4, p, base)
        assert mine == reference

    def test_interpolation_trend(self):
        target = Fraction(33, 16)
        deviations = [
            abs(
                th.brute_force_finite_moment(N, 4, Kind.PALINDROMIC_TOEPLITZ, Fraction(3, 4))
                - target
            )
            for N in (4, 8, 16)
        ]
        assert deviations[0] > deviations[1] > deviations[2]
        assert float(deviations[2]) < 0.4

    def test_budget(self):
        with pytest.raises(ValueError):
            th.brute_force_finite_moment(100, 6, Kind.TOEPLITZ, 1)

    def test_divisibility_checks(self):
        with pytest.raises(ValueError):
            th.brute_force_finite_moment(6, 2, Kind.HIGHLY_PALINDROMIC, 1, palindrome_degree=1)
        with pytest.raises(ValueError):
            th.brute_force_finite_moment(5, 2, Kind.PALINDROMIC_TOEPLITZ, 1)
