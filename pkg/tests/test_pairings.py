"""Enumeration, classification and census tests.

Expected values are either hand-checkable (Catalan numbers, double
factorials, the k <= 3 censuses), produced by the independent recursion
through the total count (2k-1)!!, or frozen from brute-force enumeration.
"""

import json
import math

import pytest

from chordspec import pairings as pr
from chordspec.pairings import (
    CapExceededError,
    EdgeKind,
    Pairing,
    UnsupportedFormulaError,
    catalan,
    catalan_convolution,
    classify,
    closed_form_cr,
    configuration_classes,
    crossing_census,
    double_factorial,
    enumerate_pairings,
    matching_count,
    nc_nd_placement_count,
    nc_nd_placement_verify,
    partition_formula,
)

CROSSING_K2 = Pairing((2, 3, 0, 1))
ADJACENT_K2 = Pairing((1, 0, 3, 2))


def diameters(v):
    return Pairing(tuple((i + v) % (2 * v) for i in range(2 * v)))


class TestPairingType:
    def test_basic(self):
        p = Pairing((1, 0, 3, 2))
        assert p.k == 2
        assert p.edges() == [(0, 1), (2, 3)]

    def test_fixed_point_rejected(self):
        with pytest.raises(ValueError):
            Pairing((0, 1, 3, 2))

    def test_non_involution_rejected(self):
        with pytest.raises(ValueError):
            Pairing((1, 2, 0, 3))

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            Pairing((1, 0, 2))

    def test_from_edges_roundtrip(self):
        p = Pairing.from_edges([(0, 2), (1, 3)])
        assert p == CROSSING_K2

    def test_rotation_is_pairing(self):
        assert CROSSING_K2.rotated(1) == CROSSING_K2
        assert ADJACENT_K2.rotated(1) == Pairing((3, 2, 1, 0))


class TestEnumeration:
    @pytest.mark.parametrize("k,count", [(1, 1), (2, 3), (3, 15), (4, 105), (5, 945)])
    def test_counts(self, k, count):
        assert sum(1 for _ in enumerate_pairings(k)) == count
        assert count == double_factorial(2 * k - 1)

    def test_k1_unique(self):
        assert list(enumerate_pairings(1)) == [Pairing((1, 0))]

    def test_documented_order(self):
        # smallest free vertex matched upward: (0,1)(2,3), (0,2)(1,3), (0,3)(1,2)
        got = [p.edges() for p in enumerate_pairings(2)]
        assert got == [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]]

    def test_no_duplicates(self):
        seen = set(p.partner for p in enumerate_pairings(4))
        assert len(seen) == 105

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            list(enumerate_pairings(0))
        with pytest.raises(CapExceededError):
            list(enumerate_pairings(11))

    def test_cap_override(self, monkeypatch):
        monkeypatch.setenv("CHORDSPEC_MAX_ENUM_K", "3")
        with pytest.raises(CapExceededError):
            list(enumerate_pairings(4))
        assert sum(1 for _ in enumerate_pairings(4, cap=5)) == 105


class TestClassify:
    def test_crossing_pair(self):
        cl = classify(CROSSING_K2)
        assert cl.crossing_vertices == 4
        assert cl.dividing_count == 0
        assert cl.partition_count == 1
        assert all(kind is EdgeKind.CROSSING for kind in cl.edge_class)

    def test_adjacent_pair(self):
        cl = classify(ADJACENT_K2)
        assert cl.crossing_vertices == 0
        assert cl.partition_count == 0
        assert all(kind is EdgeKind.NON_CROSSING_NON_DIVIDING for kind in cl.edge_class)

    def test_two_quadruples_split_by_diagonal(self):
        # 10 vertices: a main-diagonal chord dividing two crossed quadruples
        p = Pairing.from_edges([(0, 5), (1, 3), (2, 4), (6, 8), (7, 9)])
        cl = classify(p)
        assert cl.crossing_vertices == 8
        assert cl.dividing_count == 1
        assert cl.partition_count == 2
        assert cl.edge_class[0] is EdgeKind.DIVIDING

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_crossing_vertices_never_two(self, k):
        for p in enumerate_pairings(k):
            e = classify(p).crossing_vertices
            assert e % 2 == 0 and e != 2

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_rotation_invariance_exhaustive(self, k):
        for p in enumerate_pairings(k):
            base = classify(p)
            for shift in range(1, 2 * k):
                rot = classify(p.rotated(shift))
                assert rot.crossing_vertices == base.crossing_vertices
                assert rot.dividing_count == base.dividing_count
                assert rot.partition_count == base.partition_count

    def test_rotation_invariance_spot_k6(self):
        p = Pairing.from_edges([(0, 7), (1, 4), (2, 9), (3, 5), (6, 11), (8, 10)])
        base = classify(p)
        for shift in range(1, 12):
            rot = classify(p.rotated(shift))
            assert (
                rot.crossing_vertices,
                rot.dividing_count,
                rot.partition_count,
            ) == (base.crossing_vertices, base.dividing_count, base.partition_count)

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_partition_bounds(self, k):
        for p in enumerate_pairings(k):
            cl = classify(p)
            if cl.crossing_vertices == 0:
                assert cl.partition_count == 0
            else:
                assert 1 <= cl.partition_count <= cl.crossing_vertices // 4


class TestCensus:
    def test_k3_values(self):
        assert crossing_census(3).totals == {0: 5, 1: 0, 2: 6, 3: 4}

    def test_k4_k5_pinned(self):
        assert crossing_census(4).totals[4] == 31
        assert crossing_census(5).totals[5] == 288

    def test_k6_row(self):
        # m=4 entry derived in closed form: 31*C(12,2) + C(12,1)*5 + C(12,0)*6
        totals = crossing_census(6).totals
        assert totals[4] == 2112
        assert totals == {0: 132, 1: 0, 2: 495, 3: 880, 4: 2112, 5: 3504, 6: 3272}

    @pytest.mark.parametrize("k", range(1, 8))
    def test_sum_rule_and_basics(self, k):
        census = crossing_census(k)
        assert census.total_pairings() == double_factorial(2 * k - 1)
        assert census.totals[1] == 0
        assert census.totals[0] == catalan(k)

    @pytest.mark.parametrize("k", range(1, 8))
    def test_matches_closed_forms(self, k):
        census = crossing_census(k)
        for m in range(0, min(k, 5) + 1):
            assert census.totals[m] == closed_form_cr(k, m)

    @pytest.mark.parametrize("k", range(2, 8))
    def test_partition_marginals(self, k):
        census = crossing_census(k)
        for m in range(2, k + 1):
            by_block = [census.partitions.get((m, i), 0) for i in range(1, k // 2 + 1)]
            assert sum(by_block) == census.totals[m]

    def test_cap(self):
        with pytest.raises(CapExceededError):
            crossing_census(11)

    def test_json_schema(self):
        payload = json.loads(crossing_census(4).to_json())
        assert payload["k"] == 4
        assert payload["totals"]["4"] == "31"
        assert payload["double_factorial"] == "105"
        assert payload["partitions"]["4"] == {"1": "31"}


class TestClosedForms:
    def test_examples(self):
        assert closed_form_cr(3, 2) == 6
        assert closed_form_cr(6, 4) == 2112
        for k in (1, 2, 5, 9):
            assert closed_form_cr(k, 1) == 0

    def test_small_k_zero(self):
        assert closed_form_cr(1, 2) == 0  # binomial with negative lower index

    def test_unsupported(self):
        with pytest.raises(UnsupportedFormulaError):
            closed_form_cr(7, 6)


class TestPartitionFormulas:
    @pytest.mark.parametrize("k", range(2, 8))
    def test_against_census(self, k):
        census = crossing_census(k)
        for m in range(2, k + 1):
            assert census.partitions.get((m, 1), 0) == partition_formula(k, m, 1)
            assert census.partitions.get((m, 2), 0) == partition_formula(k, m, 2)

    def test_examples(self):
        assert partition_formula(4, 4, 1) == 31
        assert partition_formula(4, 4, 2) == 0  # no room for a dividing chord
        assert partition_formula(5, 4, 2) == 5

    def test_unsupported_block_count(self):
        with pytest.raises(UnsupportedFormulaError):
            partition_formula(6, 4, 3)


class TestIntegerHelpers:
    def test_catalan(self):
        assert [catalan(i) for i in range(7)] == [1, 1, 2, 5, 14, 42, 132]

    def test_matching_count(self):
        assert matching_count(0) == 1
        assert matching_count(3) == 0
        assert matching_count(6) == 15

    def test_double_factorial(self):
        assert double_factorial(-1) == 1
        assert double_factorial(7) == 105


class TestPlacements:
    def test_nothing_to_place(self):
        assert nc_nd_placement_count(2, 2, diameters(2)) == 1

    def test_examples(self):
        assert nc_nd_placement_count(3, 2, diameters(2)) == 6
        assert nc_nd_placement_count(4, 2, diameters(2)) == 28

    @pytest.mark.parametrize("k", range(1, 6))
    def test_verifier_matches(self, k):
        for v in range(1, k + 1):
            partial = Pairing((1, 0)) if v == 1 else diameters(v)
            assert nc_nd_placement_verify(k, v, partial) == math.comb(2 * k, k - v)

    def test_v_zero_rejected(self):
        with pytest.raises(ValueError):
            nc_nd_placement_count(3, 0, Pairing((1, 0)))

    def test_partial_with_plain_chord_rejected(self):
        with pytest.raises(ValueError):
            nc_nd_placement_count(4, 2, Pairing((1, 0, 3, 2)))


class TestCatalanConvolution:
    def test_examples(self):
        assert catalan_convolution(2, 2) == (1, 1)
        assert catalan_convolution(3, 2) == (2, 2)
        lhs, rhs = catalan_convolution(4, 2)
        assert lhs == rhs == 5

    def test_identity_full_range(self):
        for n in range(1, 13):
            for r in range(1, n + 1):
                lhs, rhs = catalan_convolution(n, r)
                assert lhs == rhs

    def test_bad_args(self):
        with pytest.raises(ValueError):
            catalan_convolution(2, 3)
        with pytest.raises(CapExceededError):
            catalan_convolution(25, 2)


class TestConfigurations:
    def test_k2(self):
        classes = configuration_classes(2)
        by_mult = {c.multiplicity: c.canonical for c in classes}
        assert sorted(by_mult) == [1, 2]
        assert by_mult[1] == CROSSING_K2  # full-crossing class is rotation-invariant

    def test_k3_multiplicities(self):
        mults = sorted(c.multiplicity for c in configuration_classes(3))
        assert mults == [1, 2, 3, 3, 6]

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_orbit_partition(self, k):
        classes = configuration_classes(k)
        assert sum(c.multiplicity for c in classes) == double_factorial(2 * k - 1)
        for cls in classes:
            assert 2 * k % cls.multiplicity == 0
            stabilizer = sum(
                1
                for shift in range(2 * k)
                if cls.canonical.rotated(shift) == cls.canonical
            )
            assert cls.multiplicity * stabilizer == 2 * k
