"""Statistics of the crossing-vertex count over uniform random matchings.

For a uniform random pairing of 2k circle vertices, let Y be the number of
vertices that belong to at least one crossing chord.  This module computes
E(Y) exactly (finite binomial-ratio sum), through a hypergeometric identity
(Pfaff-transformed series at z = 1/2), and by exhaustive enumeration; the
variance by enumeration and by seeded Monte Carlo; and the two chord
crossing probabilities that drive the variance asymptotics:

- p_a: two random disjoint chords cross each other (exactly 1/3 for every k);
- p_b: both chords are crossed by something, given they do not cross each
  other (via an inclusion-exclusion count over placements).

E(Y) = 2k - 2 - 2/k + O(1/k^2) and Var(Y) -> 4 as k grows.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from chordspec._backend import kernels
from chordspec.pairings import crossing_census, double_factorial, matching_count

MC_CHUNK = 4096
_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


# ---------------------------------------------------------------------------
# exact mean
# ---------------------------------------------------------------------------


def mean_sum_terms(k: int) -> list[Fraction]:
    """The binomial-ratio terms C(k-2, m-2)/C(2k-3, 2m-3) for m = 2..k-1.

    The first and last terms both equal 1/(2k-3); the full sum is
    2/(2k-3) + O(1/k^2), which yields the asymptotic mean 2k - 2 - 2/k.
    """
    if k < 2:
        raise ValueError("mean_sum_terms needs k >= 2")
    return [
        Fraction(math.comb(k - 2, m - 2), math.comb(2 * k - 3, 2 * m - 3))
        for m in range(2, k)
    ]


def mean_crossing_exact(k: int) -> Fraction:
    """Exact E(Y) for 2k vertices.

    E(Y) = 2k (2k-3)/(2k-1) - (2k/(2k-1)) * sum_{m=2}^{k-1} C(k-2,m-2)/C(2k-3,2m-3).
    The sum is empty at k = 2, where E(Y) = 4/3.
    """
    if k < 2:
        raise ValueError("mean_crossing_exact needs k >= 2")
    s = sum(mean_sum_terms(k), Fraction(0))
    return Fraction(2 * k * (2 * k - 3), 2 * k - 1) - Fraction(2 * k, 2 * k - 1) * s


def mean_crossing_asymptotic(k: int) -> float:
    """Leading asymptotic 2k - 2 - 2/k of the exact mean."""
    return 2 * k - 2 - 2 / k


# ---------------------------------------------------------------------------
# hypergeometric route
# ---------------------------------------------------------------------------


class PoleError(ValueError):
    """2F1 undefined: c is a nonpositive integer."""


def _as_fraction(x) -> Fraction:
    # binary floats like 1.5 or 2.5 - k convert exactly
    return x if isinstance(x, Fraction) else Fraction(x)


def _is_nonpositive_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


def _series_half(a: Fraction, b: Fraction, c: Fraction):
    """Sum 2F1(a, b; c; 1/2) termwise.

    Exact rational summation when the series terminates (a or b a
    nonpositive integer); otherwise float summation until the next term is
    below 1e-15 of the partial sum.  Returns (value, exact_flag).
    """
    if _is_nonpositive_int(a):
        a, b = b, a
    if _is_nonpositive_int(b):
        total = Fraction(0)
        term = Fraction(1)
        m = 0
        while True:
            total += term
            if a + m == 0 or b + m == 0:
                break
            term *= Fraction(a + m, 1) * (b + m) / ((c + m) * (m + 1) * 2)
            m += 1
            if term == 0:
                break
        return total, True
    total = 0.0
    term = 1.0
    af, bf, cf = float(a), float(b), float(c)
    m = 0
    while True:
        total += term
        term *= (af + m) * (bf + m) / ((cf + m) * (m + 1) * 2.0)
        m += 1
        if abs(term) < 1e-15 * abs(total) or m > 100000:
            break
    return total, False


def hyp2f1_at_minus_one(a, b, c, variant: str = "auto"):
    """Evaluate 2F1(a, b; c; -1) through a Pfaff transformation to z = 1/2.

    Supported parameter families: (1, 3/2, 5/2-k) and (1, 1/2+k, 3/2) for
    integer k >= 2, plus the sanity families c == a or c == b (where the
    value is 2**-b resp. 2**-a).  The literal series at z = -1 diverges for
    the first family; the transformed series terminates or converges
    geometrically.

    ``variant`` selects the transformation: "a" uses
    2**-a * 2F1(a, c-b; c; 1/2), "b" uses 2**-b * 2F1(c-a, b; c; 1/2),
    "auto" prefers whichever series terminates (both give the same value
    and the tests cross-check them).
    """
    a, b, c = _as_fraction(a), _as_fraction(b), _as_fraction(c)
    if _is_nonpositive_int(c):
        raise PoleError(f"c={c} is a nonpositive integer")
    if not _supported_family(a, b, c):
        raise ValueError(f"unsupported 2F1 parameter family (a={a}, b={b}, c={c})")
    if variant == "auto":
        variant = "a" if _is_nonpositive_int(c - b) or not _is_nonpositive_int(c - a) else "b"
    if variant == "a":
        prefactor, series_args = Fraction(1, 2) ** a if a.denominator == 1 else 2.0 ** -float(a), (a, c - b, c)
    elif variant == "b":
        prefactor, series_args = Fraction(1, 2) ** b if b.denominator == 1 else 2.0 ** -float(b), (c - a, b, c)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    value, exact = _series_half(*series_args)
    if exact and isinstance(prefactor, Fraction):
        return float(prefactor * value)
    return float(prefactor) * float(value)


def _supported_family(a: Fraction, b: Fraction, c: Fraction) -> bool:
    if c == a or c == b:
        return True
    if a == 1 and b == Fraction(3, 2) and (Fraction(5, 2) - c).denominator == 1 and c <= Fraction(1, 2):
        return True  # (1, 3/2, 5/2 - k), k >= 2
    if a == 1 and c == Fraction(3, 2) and (b - Fraction(1, 2)).denominator == 1 and b >= Fraction(5, 2):
        return True  # (1, 1/2 + k, 3/2), k >= 2
    return False


def _hyp_exact(a, b, c) -> Fraction:
    """Exact rational 2F1(a, b; c; -1) for the terminating families."""
    a, b, c = _as_fraction(a), _as_fraction(b), _as_fraction(c)
    value, exact = _series_half(a, c - b, c)
    if not exact:
        raise ValueError("family does not terminate")
    return Fraction(1, 2) ** a * value


def mean_crossing_hypergeometric(k: int) -> float:
    """E(Y) through the hypergeometric identity

        (2k/(2k-1)) (2k - 2 - F1/(2k-3) - (2k-1) F2),

    with F1 = 2F1(1, 3/2, 5/2-k; -1) and F2 = 2F1(1, 1/2+k, 3/2; -1), both
    evaluated by Pfaff transformation.  The assembled value is exact in
    rational arithmetic (both transformed series terminate), so it matches
    mean_crossing_exact to float precision.
    """
    if k < 2:
        raise ValueError("mean_crossing_hypergeometric needs k >= 2")
    f1 = _hyp_exact(1, Fraction(3, 2), Fraction(5, 2) - k)
    f2 = _hyp_exact(1, Fraction(1, 2) + k, Fraction(3, 2))
    value = Fraction(2 * k, 2 * k - 1) * (
        2 * k - 2 - f1 / (2 * k - 3) - (2 * k - 1) * f2
    )
    return float(value)


# ---------------------------------------------------------------------------
# enumerated moments
# ---------------------------------------------------------------------------


def crossing_moments_enumerated(k: int, cap: int | None = None) -> tuple[Fraction, Fraction]:
    """Exact (mean, variance) of Y over all (2k-1)!! pairings, via the census."""
    census = crossing_census(k, cap=cap)
    total = census.total_pairings()
    first = sum(count * 2 * m for m, count in census.totals.items())
    second = sum(count * (2 * m) ** 2 for m, count in census.totals.items())
    mean = Fraction(first, total)
    var = Fraction(second, total) - mean * mean
    return mean, var


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def sample_crossing_vertex_counts(k: int, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Y values for ``trials`` uniform random matchings of 2k vertices.

    Sampling: per-chunk Philox streams keyed by (seed, chunk index), a
    Fisher-Yates shuffle of the 2k labels, consecutive labels paired.
    Results depend only on (k, trials, seed): chunking is fixed, so worker
    count cannot change the stream.
    """
    if k < 1:
        raise ValueError("sampling needs k >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    chunks = [
        (idx, lo, min(trials, lo + MC_CHUNK))
        for idx, lo in enumerate(range(0, trials, MC_CHUNK))
    ]
    out = np.empty(trials, dtype=np.int64)
    if workers > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (_, lo, hi), values in zip(
                chunks, pool.map(_mc_chunk, [(k, seed, c) for c in chunks])
            ):
                out[lo:hi] = values
    else:
        for chunk in chunks:
            _, lo, hi = chunk
            out[lo:hi] = _mc_chunk((k, seed, chunk))
    return out


def _mc_chunk(args) -> np.ndarray:
    k, seed, (chunk_idx, lo, hi) = args
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, chunk_idx))))
    labels = np.tile(np.arange(2 * k, dtype=np.int64), (hi - lo, 1))
    perms = rng.permuted(labels, axis=1)
    return kernels.crossing_vertex_counts(perms)


@dataclass(frozen=True)
class CrossingStatsReport:
    """Mean/variance report for the crossing-vertex count at one k."""

    k: int
    method: str  # Enumeration | ExactSum | Hypergeometric | MonteCarlo
    mean_exact: Fraction | None = None
    mean_hypergeometric: float | None = None
    mean_asymptotic: float | None = None
    mean: float | None = None
    variance: float | Fraction | None = None
    trials: int | None = None
    seed: int | None = None
    std_error: float | None = None

    def to_json(self) -> str:
        def _frac(x):
            return f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else x

        payload = {
            "k": self.k,
            "method": self.method,
            "mean_exact": _frac(self.mean_exact),
            "mean_float": float(self.mean_exact) if self.mean_exact is not None else self.mean,
            "mean_asymptotic": self.mean_asymptotic,
            "variance": float(self.variance) if self.variance is not None else None,
            "trials": self.trials,
            "seed": self.seed,
            "stderr": self.std_error,
        }
        return json.dumps(payload, indent=2)


def monte_carlo_crossing(
    k: int, trials: int, seed: int, workers: int = 1
) -> CrossingStatsReport:
    """Sample mean/variance of Y over ``trials`` uniform random matchings.

    Deterministic for fixed (k, trials, seed); the sums are accumulated in
    exact integers so the report is also independent of worker count and
    kernel backend.
    """
    if k < 2:
        raise ValueError("monte_carlo_crossing needs k >= 2")
    values = sample_crossing_vertex_counts(k, trials, seed, workers=workers)
    total = int(values.sum())
    total_sq = int((values * values).sum())
    mean = total / trials
    if trials > 1:
        var = (total_sq - total * total / trials) / (trials - 1)
        stderr = math.sqrt(var / trials)
    else:
        var = 0.0
        stderr = float("inf")
    return CrossingStatsReport(
        k=k,
        method="MonteCarlo",
        mean=mean,
        mean_asymptotic=mean_crossing_asymptotic(k),
        variance=var,
        trials=trials,
        seed=seed,
        std_error=stderr,
    )


# ---------------------------------------------------------------------------
# chord crossing probabilities
# ---------------------------------------------------------------------------


def probability_two_chords_cross(k: int) -> Fraction:
    """p_a: probability two chords on distinct vertex pairs cross each other.

    Computed by the placement sum
        sum_{m=2}^{2k} (1/(2k-1)) * 2 * (m-2)/(2k-2) * (2k-m)/(2k-3)
    which telescopes to exactly 1/3 for every k >= 2 (asserted).
    """
    if k < 2:
        raise ValueError("probability_two_chords_cross needs k >= 2")
    total = sum(
        (
            Fraction(1, 2 * k - 1)
            * 2
            * Fraction(m - 2, 2 * k - 2)
            * Fraction(2 * k - m, 2 * k - 3)
        )
        for m in range(2, 2 * k + 1)
    )
    if total != Fraction(1, 3):
        raise AssertionError(f"placement sum gave {total}, expected 1/3")
    return total


def n_kmpq(k: int, m: int, p: int, q: int) -> int:
    """Fillings of the remaining 2k-4 vertices leaving chord {1,m} or {p,q} uncrossed.

    Vertices are labeled 1..2k; requires 1 < m < p < q <= 2k with the two
    chords {1,m} and {p,q} non-crossing by construction.  With L = m-2,
    M = p-m-1+2k-q and R = q-p-1 the inclusion-exclusion count is
    P(L+M) P(R) + P(R+M) P(L) - P(L) P(M) P(R), except that an adjacent
    chord (L or R zero) is never crossed and all (2k-5)!! fillings qualify.
    """
    if not (1 < m < p < q <= 2 * k):
        raise ValueError("need 1 < m < p < q <= 2k")
    left = m - 2
    mid = p - m - 1 + 2 * k - q
    right = q - p - 1
    if left == 0 or right == 0:
        return double_factorial(2 * k - 5)
    return (
        matching_count(left + mid) * matching_count(right)
        + matching_count(right + mid) * matching_count(left)
        - matching_count(left) * matching_count(mid) * matching_count(right)
    )


def probability_both_chords_crossed(k: int) -> Fraction:
    """p_b: both chords are crossed by something, given they don't cross each other.

    p_b = 1 - sum_{1<m<p<q<=2k} N(k,m,p,q) / (C(2k-1, 3) (2k-5)!!), exact.
    Asymptotically p_b = 1 - 3/k - 3/(2k^2) + O(1/k^3).
    """
    if k < 3:
        raise ValueError("probability_both_chords_crossed needs k >= 3")
    total = 0
    for m in range(2, 2 * k - 1):
        for p in range(m + 1, 2 * k):
            for q in range(p + 1, 2 * k + 1):
                total += n_kmpq(k, m, p, q)
    denom = math.comb(2 * k - 1, 3) * double_factorial(2 * k - 5)
    return 1 - Fraction(total, denom)


def probability_both_chords_crossed_asymptotic(k: int) -> float:
    """Leading asymptotic 1 - 3/k - 3/(2k^2) of p_b."""
    return 1 - 3 / k - 3 / (2 * k * k)


def chord_crossing_probs(k: int) -> tuple[Fraction, Fraction]:
    """(p_a, p_b) for 2k vertices; p_a is exactly 1/3, p_b from the exact sum."""
    return probability_two_chords_cross(k), probability_both_chords_crossed(k)
