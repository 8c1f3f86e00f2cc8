"""Matrix samplers: structure, reproducibility, sign mask, occurrence counts."""

import math

import numpy as np
import pytest

from chordspec.ensembles import (
    BaseDistribution,
    EnsembleSpec,
    Kind,
    hadamard,
    per_row_occurrences,
    sample_matrix,
    sample_sign_mask,
    variable_index_matrix,
)


class TestSpecValidation:
    def test_p_range(self):
        with pytest.raises(ValueError):
            EnsembleSpec(kind=Kind.TOEPLITZ, dimension=8, sign_p=0.4)
        with pytest.raises(ValueError):
            EnsembleSpec(kind=Kind.TOEPLITZ, dimension=8, sign_p=1.1)

    def test_highly_palindromic_divisibility(self):
        EnsembleSpec(kind=Kind.HIGHLY_PALINDROMIC, dimension=8, palindrome_degree=1)
        with pytest.raises(ValueError):
            EnsembleSpec(kind=Kind.HIGHLY_PALINDROMIC, dimension=6, palindrome_degree=1)
        with pytest.raises(ValueError):
            EnsembleSpec(kind=Kind.HIGHLY_PALINDROMIC, dimension=8, palindrome_degree=0)

    def test_palindromic_needs_even(self):
        with pytest.raises(ValueError):
            EnsembleSpec(kind=Kind.PALINDROMIC_TOEPLITZ, dimension=7)

    def test_degree_only_for_highly_palindromic(self):
        with pytest.raises(ValueError):
            EnsembleSpec(kind=Kind.TOEPLITZ, dimension=8, palindrome_degree=1)


class TestStructure:
    def test_full_symmetric_bit_exact(self):
        spec = EnsembleSpec(kind=Kind.FULL_SYMMETRIC, dimension=17, seed=4)
        data = sample_matrix(spec).data
        assert np.array_equal(data, data.T)

    def test_toeplitz_constant_diagonals(self):
        spec = EnsembleSpec(kind=Kind.TOEPLITZ, dimension=9, seed=1)
        data = sample_matrix(spec).data
        for offset in range(9):
            diag = np.diagonal(data, offset)
            assert np.all(diag == diag[0])

    def test_palindromic_first_row(self):
        spec = EnsembleSpec(kind=Kind.PALINDROMIC_TOEPLITZ, dimension=10, seed=2)
        row = sample_matrix(spec).data[0]
        assert np.array_equal(row, row[::-1])

    def test_highly_palindromic_first_row_copies(self):
        spec = EnsembleSpec(
            kind=Kind.HIGHLY_PALINDROMIC, dimension=16, palindrome_degree=1, seed=3
        )
        row = sample_matrix(spec).data[0]
        assert np.array_equal(row[:8], row[8:])  # 2 copies of the palindrome
        assert np.array_equal(row[:8], row[:8][::-1])  # each copy a palindrome

    @pytest.mark.parametrize("degree,dim", [(1, 8), (1, 16), (1, 32), (2, 16), (2, 32)])
    def test_first_row_occurrences(self, degree, dim):
        # each independent variable appears exactly 2**(degree+1) times in the
        # first row, independent of the dimension
        spec = EnsembleSpec(
            kind=Kind.HIGHLY_PALINDROMIC, dimension=dim, palindrome_degree=degree
        )
        counts = per_row_occurrences(spec)
        assert np.all(counts[0] == 2 ** (degree + 1))
        assert counts.max() <= 2 ** (degree + 2)

    def test_variable_ids_match_sample_equalities(self):
        # continuous base: entries are equal exactly when their variable ids agree
        spec = EnsembleSpec(
            kind=Kind.HIGHLY_PALINDROMIC, dimension=8, palindrome_degree=1, seed=9
        )
        ids = variable_index_matrix(spec)
        data = sample_matrix(spec).data
        for var in range(ids.max() + 1):
            values = data[ids == var]
            assert np.all(values == values[0])
        firsts = [data[ids == var][0] for var in range(ids.max() + 1)]
        assert len(set(firsts)) == len(firsts)


class TestReproducibility:
    @pytest.mark.parametrize(
        "kind,degree", [(Kind.FULL_SYMMETRIC, 0), (Kind.TOEPLITZ, 0), (Kind.HIGHLY_PALINDROMIC, 1)]
    )
    def test_same_spec_same_matrix(self, kind, degree):
        spec = EnsembleSpec(kind=kind, dimension=16, palindrome_degree=degree, seed=42)
        assert np.array_equal(sample_matrix(spec).data, sample_matrix(spec).data)

    def test_seed_changes_matrix(self):
        spec = EnsembleSpec(kind=Kind.TOEPLITZ, dimension=16, seed=1)
        assert not np.array_equal(
            sample_matrix(spec).data, sample_matrix(spec.with_seed(2)).data
        )


class TestBaseDistributions:
    @pytest.mark.parametrize("base", list(BaseDistribution))
    def test_mean_zero_variance_one(self, base):
        spec = EnsembleSpec(kind=Kind.FULL_SYMMETRIC, dimension=1414, base=base, seed=8)
        draws = sample_matrix(spec).data[np.triu_indices(1414)]
        n = draws.size  # ~1e6
        fourth = float(base.moment(4))
        assert abs(draws.mean()) < 5 / math.sqrt(n)
        # sample variance fluctuates by ~sqrt((E b^4 - 1)/n) plus the mean^2 bias
        assert abs(draws.var() - 1.0) < 5 * math.sqrt((fourth - 1.0) / n) + 25.0 / n

    def test_moment_table(self):
        assert BaseDistribution.STANDARD_GAUSSIAN.moment(6) == 15
        assert BaseDistribution.RADEMACHER.moment(8) == 1
        assert BaseDistribution.UNIFORM_SCALED.moment(4) == pytest.approx(9 / 5)
        for base in BaseDistribution:
            assert base.moment(3) == 0
            assert base.moment(2) == 1


class TestSignMask:
    def test_p_one_all_ones(self):
        assert np.all(sample_sign_mask(20, 1.0, 0).data == 1.0)

    def test_symmetric_pm_one(self):
        mask = sample_sign_mask(31, 0.7, 5).data
        assert np.array_equal(mask, mask.T)
        assert set(np.unique(mask)) <= {-1.0, 1.0}

    def test_half_mean_band(self):
        mask = sample_sign_mask(200, 0.5, 3).data
        upper = mask[np.triu_indices(200)]
        assert abs(upper.mean()) < 5 / math.sqrt(upper.size)

    def test_mean_tracks_two_p_minus_one(self):
        mask = sample_sign_mask(300, 0.8, 4).data
        upper = mask[np.triu_indices(300)]
        assert abs(upper.mean() - 0.6) < 5 * math.sqrt((1 - 0.6**2) / upper.size)

    def test_p_out_of_range(self):
        with pytest.raises(ValueError):
            sample_sign_mask(10, 0.3, 0)


class TestHadamard:
    def test_identity_mask(self):
        spec = EnsembleSpec(kind=Kind.TOEPLITZ, dimension=12, seed=6)
        matrix = sample_matrix(spec)
        masked = hadamard(matrix, sample_sign_mask(12, 1.0, 0))
        assert np.array_equal(masked.data, matrix.data)

    def test_involution(self):
        spec = EnsembleSpec(kind=Kind.FULL_SYMMETRIC, dimension=12, seed=6)
        matrix = sample_matrix(spec)
        mask = sample_sign_mask(12, 0.6, 1)
        twice = hadamard(hadamard(matrix, mask), mask)
        assert np.array_equal(twice.data, matrix.data)

    def test_flips_where_negative(self):
        spec = EnsembleSpec(kind=Kind.TOEPLITZ, dimension=12, seed=6)
        matrix = sample_matrix(spec)
        mask = sample_sign_mask(12, 0.6, 1)
        masked = hadamard(matrix, mask)
        flipped = mask.data == -1.0
        assert np.array_equal(masked.data[flipped], -matrix.data[flipped])
        assert np.array_equal(masked.data[~flipped], matrix.data[~flipped])

    def test_dimension_mismatch(self):
        matrix = sample_matrix(EnsembleSpec(kind=Kind.TOEPLITZ, dimension=8))
        with pytest.raises(ValueError):
            hadamard(matrix, sample_sign_mask(9, 0.9, 0))
