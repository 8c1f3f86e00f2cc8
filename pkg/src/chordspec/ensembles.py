"""Structured real symmetric matrix ensembles and the random sign mask.

Supported kinds:

- full symmetric: independent entries on and above the diagonal;
- Toeplitz: constant along diagonals, first row b_0 .. b_{N-1};
- palindromic Toeplitz: Toeplitz with a palindromic first row (b_j = b_{N-1-j});
- highly palindromic of degree n >= 1: the first row is 2**n copies of a
  palindrome of length N / 2**n, so each independent variable appears
  exactly 2**(n+1) times in the first row.

All base distributions have mean 0 and variance 1 with tabulated even
moments, which the exact finite-size moment oracle in ``theory`` relies on.
The weighted ensemble multiplies entrywise by a symmetric +-1 matrix whose
independent entries are +1 with probability p (the Hadamard sign mask).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

import numpy as np

from chordspec.pairings import double_factorial

SQRT3 = 1.7320508075688772

# sub-streams so matrix draws and mask draws never share a generator
_STREAM_MATRIX = 0
_STREAM_MASK = 1


class Kind(str, Enum):
    FULL_SYMMETRIC = "full_symmetric"
    TOEPLITZ = "toeplitz"
    PALINDROMIC_TOEPLITZ = "palindromic_toeplitz"
    HIGHLY_PALINDROMIC = "highly_palindromic"


class BaseDistribution(str, Enum):
    """Mean-0 variance-1 entry distributions with known moment sequences."""

    STANDARD_GAUSSIAN = "standard_gaussian"
    RADEMACHER = "rademacher"
    UNIFORM_SCALED = "uniform_scaled"  # uniform on [-sqrt(3), sqrt(3)]

    def moment(self, order: int) -> Fraction:
        """Exact E(b**order); odd moments vanish for all three families."""
        if order < 0:
            raise ValueError("moment order must be nonnegative")
        if order % 2:
            return Fraction(0)
        if self is BaseDistribution.STANDARD_GAUSSIAN:
            return Fraction(double_factorial(order - 1))
        if self is BaseDistribution.RADEMACHER:
            return Fraction(1)
        return Fraction(3 ** (order // 2), order + 1)


@dataclass(frozen=True)
class EnsembleSpec:
    """Which ensemble to sample: kind, dimension, palindromicity, sign weight, base."""

    kind: Kind
    dimension: int
    palindrome_degree: int = 0  # n; meaningful for HIGHLY_PALINDROMIC only
    sign_p: float = 1.0
    base: BaseDistribution = BaseDistribution.STANDARD_GAUSSIAN
    seed: int = 0

    def __post_init__(self):
        n_deg = self.palindrome_degree
        size = self.dimension
        if size < 1:
            raise ValueError("dimension must be positive")
        if not 0.5 <= self.sign_p <= 1.0:
            raise ValueError(f"sign parameter p={self.sign_p} outside [1/2, 1]")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.kind is Kind.HIGHLY_PALINDROMIC:
            if n_deg < 1:
                raise ValueError("highly palindromic ensembles need degree n >= 1")
            # N must be a multiple of 2**(n+1): the palindrome of length
            # N / 2**n has to pair its entries, so its length is even.
            if size % (1 << (n_deg + 1)):
                raise ValueError(
                    f"dimension {size} not divisible by 2**(n+1) = {1 << (n_deg + 1)}"
                )
        elif n_deg != 0:
            raise ValueError("palindrome_degree is only meaningful for highly palindromic")
        if self.kind is Kind.PALINDROMIC_TOEPLITZ and size % 2:
            raise ValueError("palindromic Toeplitz needs even dimension")

    def with_seed(self, seed: int) -> "EnsembleSpec":
        return replace(self, seed=seed)

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind.value,
                "dimension": self.dimension,
                "palindrome_degree": self.palindrome_degree,
                "sign_p": self.sign_p,
                "base": self.base.value,
                "seed": self.seed,
            },
            indent=2,
        )


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric sample with its provenance."""

    data: np.ndarray
    spec: EnsembleSpec | None = None

    @property
    def dimension(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class SignMatrix:
    """Symmetric matrix with entries in {-1, +1}."""

    data: np.ndarray

    @property
    def dimension(self) -> int:
        return self.data.shape[0]


def _base_draws(rng: np.random.Generator, base: BaseDistribution, count: int) -> np.ndarray:
    if base is BaseDistribution.STANDARD_GAUSSIAN:
        return rng.standard_normal(count)
    if base is BaseDistribution.RADEMACHER:
        return rng.integers(0, 2, size=count).astype(np.float64) * 2.0 - 1.0
    return rng.uniform(-SQRT3, SQRT3, size=count)


def first_row_variable_ids(spec: EnsembleSpec) -> np.ndarray:
    """Independent-variable index of each first-row position (Toeplitz kinds)."""
    size = spec.dimension
    d = np.arange(size)
    if spec.kind is Kind.TOEPLITZ:
        return d
    if spec.kind is Kind.PALINDROMIC_TOEPLITZ:
        return np.minimum(d, size - 1 - d)
    if spec.kind is Kind.HIGHLY_PALINDROMIC:
        block = size >> spec.palindrome_degree
        dm = d % block
        return np.minimum(dm, block - 1 - dm)
    raise ValueError("first_row_variable_ids applies to Toeplitz-structured kinds")


def variable_index_matrix(spec: EnsembleSpec) -> np.ndarray:
    """(N, N) array mapping each entry to its independent-variable index.

    Entries are equal in every sample exactly when their indices here agree;
    used by the structural occurrence counter and as the ground truth of the
    identification rule shared with the brute-force moment oracle.
    """
    size = spec.dimension
    if spec.kind is Kind.FULL_SYMMETRIC:
        i = np.arange(size)[:, None]
        j = np.arange(size)[None, :]
        lo = np.minimum(i, j)
        hi = np.maximum(i, j)
        return lo * size + hi
    row_ids = first_row_variable_ids(spec)
    d = np.abs(np.arange(size)[:, None] - np.arange(size)[None, :])
    return row_ids[d]


def independent_variable_count(spec: EnsembleSpec) -> int:
    return int(variable_index_matrix(spec).max()) + 1


def sample_matrix(spec: EnsembleSpec) -> SymmetricMatrix:
    """Draw one matrix; identical spec (including seed) gives a bit-identical sample."""
    rng = np.random.default_rng(np.random.SeedSequence((spec.seed, _STREAM_MATRIX)))
    size = spec.dimension
    if spec.kind is Kind.FULL_SYMMETRIC:
        out = np.zeros((size, size))
        iu = np.triu_indices(size)
        out[iu] = _base_draws(rng, spec.base, iu[0].size)
        out = out + np.triu(out, 1).T
        return SymmetricMatrix(data=out, spec=spec)
    row_ids = first_row_variable_ids(spec)
    draws = _base_draws(rng, spec.base, int(row_ids.max()) + 1)
    first_row = draws[row_ids]
    d = np.abs(np.arange(size)[:, None] - np.arange(size)[None, :])
    return SymmetricMatrix(data=first_row[d], spec=spec)


def sample_sign_mask(size: int, p: float, seed: int) -> SignMatrix:
    """Symmetric +-1 matrix, independent upper-triangle entries, Prob(+1) = p."""
    if not 0.5 <= p <= 1.0:
        raise ValueError(f"sign parameter p={p} outside [1/2, 1]")
    if size < 1:
        raise ValueError("dimension must be positive")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    rng = np.random.default_rng(np.random.SeedSequence((seed, _STREAM_MASK)))
    out = np.ones((size, size))
    iu = np.triu_indices(size)
    out[iu] = np.where(rng.random(iu[0].size) < p, 1.0, -1.0)
    lower = np.tril_indices(size, -1)
    out[lower] = out.T[lower]
    return SignMatrix(data=out)


def hadamard(matrix: SymmetricMatrix, mask: SignMatrix) -> SymmetricMatrix:
    """Entrywise product; symmetry is preserved since both factors are symmetric."""
    if matrix.dimension != mask.dimension:
        raise ValueError(
            f"dimension mismatch: {matrix.dimension} vs {mask.dimension}"
        )
    return SymmetricMatrix(data=matrix.data * mask.data, spec=matrix.spec)


def per_row_occurrences(spec: EnsembleSpec) -> np.ndarray:
    """Structural occurrence counts: (N, #variables) with row i counting how
    often each independent variable appears in matrix row i.

    For a degree-n highly palindromic ensemble every first-row count is
    exactly 2**(n+1), and no row count exceeds 2**(n+2); both are
    independent of N, which is the o(N)-occurrences hypothesis made exact.
    """
    ids = variable_index_matrix(spec)
    nvars = int(ids.max()) + 1
    counts = np.zeros((spec.dimension, nvars), dtype=np.int64)
    rows = np.repeat(np.arange(spec.dimension), spec.dimension)
    np.add.at(counts, (rows, ids.ravel()), 1)
    return counts


def matrix_to_csv(matrix: SymmetricMatrix, path: str) -> None:
    """Debug dump of a sampled matrix."""
    np.savetxt(path, matrix.data, delimiter=",")
