"""Predicted signed spectral moments and the exact finite-size oracle.

For sign-weighted Toeplitz-structured ensembles, the limiting 2k-th moment
is a sum over pairings c of 2k vertices of

    (unsigned contribution of c) * (2p - 1)**(number of crossing vertices of c).

For the singly palindromic Toeplitz ensemble every unsigned contribution is
1, so the moment collapses to a census sum over crossing numbers; at
p = 1/2 only non-crossing pairings survive (Catalan numbers, semicircle)
and at p = 1 everything contributes ((2k-1)!!, Gaussian).  For the plain
Toeplitz ensemble the unsigned contribution of a pairing is the volume of a
polytope slice of [0,1] x [-1,1]^k, estimated here by Monte Carlo with a
confidence interval and pinned for small k by a deterministic Riemann-grid
oracle.

For doubly and higher palindromic ensembles the crossing count alone does
not determine a pairing's contribution (the sixth moment already splits),
so predictions away from p = 1/2 are refused with an explicit marker.

``brute_force_finite_moment`` is the independent finite-size oracle: it
expands Trace(A^k) over all N**k index tuples exactly, grouping matrix and
sign factors by the ensemble's identification rule and multiplying
tabulated base-distribution moments, all in rational arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from chordspec._backend import kernels
from chordspec.ensembles import BaseDistribution, Kind
from chordspec.pairings import (
    Pairing,
    catalan,
    classify,
    closed_form_cr,
    configuration_classes,
    crossing_census,
    double_factorial,
)

X_METHOD_EXACT = "exact_one"
X_METHOD_MC = "monte_carlo_volume"

MIN_VOLUME_SAMPLES = 10_000
BRUTE_FORCE_BUDGET = 10_000_000
_Z99 = 2.5758293035489004

_KIND_MODE = {
    Kind.FULL_SYMMETRIC: 0,
    Kind.TOEPLITZ: 1,
    Kind.PALINDROMIC_TOEPLITZ: 2,
    Kind.HIGHLY_PALINDROMIC: 3,
}


# ---------------------------------------------------------------------------
# sign-product expectation
# ---------------------------------------------------------------------------


def epsilon_weight(cycle, p):
    """Exact expectation of the cyclic product of sign variables along ``cycle``.

    Consecutive entries (i_t, i_{t+1}), taken cyclically, each select the
    sign variable of the unordered index pair.  A variable of even
    multiplicity contributes 1 (epsilon**2 = 1); odd multiplicity
    contributes its mean 2p - 1.  Invariant under rotation and reversal of
    the cycle.  Pass p as a Fraction for an exact rational result.
    """
    cycle = list(cycle)
    if len(cycle) < 2:
        raise ValueError("cycle needs at least two indices")
    counts: dict[tuple[int, int], int] = {}
    for t, u in enumerate(cycle):
        v = cycle[(t + 1) % len(cycle)]
        key = (u, v) if u <= v else (v, u)
        counts[key] = counts.get(key, 0) + 1
    odd = sum(1 for mult in counts.values() if mult % 2)
    return (2 * p - 1) ** odd


# ---------------------------------------------------------------------------
# predictions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignedMomentPrediction:
    """Predicted 2k-th moment of a signed ensemble at sign parameter p."""

    k: int
    p: float
    supported: bool
    value: float | None
    x_method: str
    value_exact: Fraction | None = None
    mc_ci: float | None = None  # 99% half-width, when Monte Carlo enters
    decomposition: tuple[dict, ...] = ()
    reason: str | None = None  # set when unsupported

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "p": self.p,
            "supported": self.supported,
            "value": self.value,
            "ci": self.mc_ci,
            "method": self.x_method,
            "decomposition": list(self.decomposition),
            "reason": self.reason,
        }
        if self.value_exact is not None:
            payload["value_exact"] = (
                f"{self.value_exact.numerator}/{self.value_exact.denominator}"
            )
        return json.dumps(payload, indent=2)


def _census_totals(k: int, cap: int | None) -> dict[int, int]:
    """Crossing-number counts for signed-moment sums: closed forms when they
    cover every m (k <= 5), else the exhaustive census (cap applies)."""
    if k <= 5:
        totals = {m: closed_form_cr(k, m) for m in range(min(k, 5) + 1)}
        missing = double_factorial(2 * k - 1) - sum(totals.values())
        if missing:
            raise AssertionError("closed forms must cover all m for k <= 5")
        return totals
    return crossing_census(k, cap=cap).totals


def signed_moment_palindromic(k: int, p, cap: int | None = None) -> SignedMomentPrediction:
    """Limiting 2k-th moment of the signed singly palindromic Toeplitz ensemble.

    Every pairing contributes (2p-1)**(crossing vertices), so the value is
    sum_m count(m) * (2p-1)**(2m), evaluated exactly in the arithmetic of p.
    Equals the Catalan number C_k at p = 1/2 and (2k-1)!! at p = 1.
    """
    if k < 1:
        raise ValueError("signed_moment_palindromic needs k >= 1")
    _check_sign_p(p)
    totals = _census_totals(k, cap)
    w = 2 * Fraction(p) - 1
    terms = []
    value = Fraction(0)
    for m in sorted(totals):
        term = totals[m] * w ** (2 * m)
        value += term
        terms.append(
            {"m": m, "count": totals[m], "weight": float(w ** (2 * m)), "term": float(term)}
        )
    return SignedMomentPrediction(
        k=k,
        p=float(p),
        supported=True,
        value=float(value),
        value_exact=value,
        x_method=X_METHOD_EXACT,
        decomposition=tuple(terms),
    )


def _check_sign_p(p) -> None:
    if not Fraction(1, 2) <= Fraction(p) <= 1:
        raise ValueError(f"sign parameter p={p} outside [1/2, 1]")


# ---------------------------------------------------------------------------
# Toeplitz contributions (polytope volumes)
# ---------------------------------------------------------------------------


def _edge_sign_matrix(pairing: Pairing) -> np.ndarray:
    """(2k, k) matrix turning per-chord difference values into cyclic steps.

    Matched positions carry the same magnitude with opposite sign, so the
    step at the smaller position of chord e is +x_e and -x_e at the larger.
    """
    n = 2 * pairing.k
    signs = np.zeros((n, pairing.k))
    for e, (a, b) in enumerate(pairing.edges()):
        signs[a, e] = 1.0
        signs[b, e] = -1.0
    return signs


def _range_shortfall(prefix: np.ndarray) -> np.ndarray:
    """max(0, 1 - (max - min)) of each row of cyclic prefix sums (0 included)."""
    high = np.maximum(prefix.max(axis=1), 0.0)
    low = np.minimum(prefix.min(axis=1), 0.0)
    return np.clip(1.0 - (high - low), 0.0, None)


def toeplitz_x(
    pairing: Pairing, mc_samples: int, seed: int, chunk: int = 65536
) -> tuple[float, float]:
    """Monte Carlo estimate of a pairing's unsigned Toeplitz contribution.

    The contribution is the volume of the base points and chord differences
    (base index scaled to (0, 1], differences to [-1, 1], matched with
    opposite signs) for which all 2k cyclic indices stay inside (0, 1].
    Sampling draws the k differences uniformly; the base point is integrated
    out exactly, leaving max(0, 1 - range of cyclic prefix sums) per draw,
    scaled by 2**k because the difference box has volume 2**k.  Returns
    (estimate clipped to [0, 1], 99% confidence half-width).  Non-crossing
    pairings have contribution exactly 1; every contribution lies in [0, 1].
    """
    if mc_samples < MIN_VOLUME_SAMPLES:
        raise ValueError(f"mc_samples must be >= {MIN_VOLUME_SAMPLES}")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    k = pairing.k
    signs = _edge_sign_matrix(pairing)
    scale = 2.0**k
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk_idx = 0
    while done < mc_samples:
        size = min(chunk, mc_samples - done)
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence((seed, chunk_idx)))
        )
        diffs = rng.uniform(-1.0, 1.0, size=(size, k))
        steps = diffs @ signs.T  # (size, 2k)
        prefix = np.cumsum(steps[:, :-1], axis=1)
        values = scale * _range_shortfall(prefix)
        total += float(values.sum())
        total_sq += float((values * values).sum())
        done += size
        chunk_idx += 1
    mean = total / mc_samples
    var = max(0.0, (total_sq - total * total / mc_samples) / (mc_samples - 1))
    half_width = _Z99 * math.sqrt(var / mc_samples)
    return min(max(mean, 0.0), 1.0), half_width


def toeplitz_x_grid(pairing: Pairing, grid_points: int = 2000) -> float:
    """Deterministic Riemann (midpoint) oracle for the unsigned contribution.

    Integrates max(0, 1 - range of cyclic prefix sums) over the difference
    box [-1, 1]^k on a grid_points-per-axis midpoint grid, the base point
    having been integrated exactly.  Intended as the independent check that
    pins the Monte Carlo estimator; practical for k <= 3
    (grid_points**k <= ~3e7).
    """
    k = pairing.k
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    if grid_points**k > 30_000_000:
        raise ValueError("grid too large; reduce grid_points or k")
    signs = _edge_sign_matrix(pairing)
    step = 2.0 / grid_points
    axis = -1.0 + step * (np.arange(grid_points) + 0.5)
    total = 0.0
    if k == 1:
        diffs = axis[:, None]
        prefix = np.cumsum(diffs @ signs.T, axis=1)[:, :-1]
        total = float(_range_shortfall(prefix).sum())
    else:
        grids = np.meshgrid(*([axis] * (k - 1)), indexing="ij")
        rest = np.stack([g.ravel() for g in grids], axis=1)  # (grid**(k-1), k-1)
        for x0 in axis:
            diffs = np.concatenate(
                [np.full((rest.shape[0], 1), x0), rest], axis=1
            )
            prefix = np.cumsum(diffs @ signs.T, axis=1)[:, :-1]
            total += float(_range_shortfall(prefix).sum())
    return total * step**k  # sum of midpoint values times cell volume


def signed_moment_toeplitz(
    k: int, p, mc_samples: int, seed: int, cap: int | None = None
) -> SignedMomentPrediction:
    """Limiting 2k-th moment of the signed Toeplitz ensemble.

    Sums multiplicity * contribution * (2p-1)**(crossing vertices) over
    rotation classes.  Non-crossing classes contribute exactly 1; crossing
    classes use the Monte Carlo volume estimate (skipped when the sign
    weight vanishes, i.e. p = 1/2).  The reported 99% CI half-width
    propagates the per-class Monte Carlo uncertainty in quadrature.
    """
    if k < 1:
        raise ValueError("signed_moment_toeplitz needs k >= 1")
    _check_sign_p(p)
    w = 2 * Fraction(p) - 1
    classes = configuration_classes(k, cap=cap)
    value = 0.0
    ci_sq = 0.0
    rows = []
    any_mc = False
    for index, cls in enumerate(classes):
        crossing_vertices = classify(cls.canonical).crossing_vertices
        weight = float(w**crossing_vertices)
        if crossing_vertices == 0:
            x_est, x_ci = 1.0, 0.0
        elif weight == 0.0:
            x_est, x_ci = None, None  # killed by the sign weight; volume not needed
        else:
            class_seed = int(np.random.SeedSequence((seed, index)).generate_state(1)[0])
            x_est, x_ci = toeplitz_x(cls.canonical, mc_samples, class_seed)
            any_mc = True
        term = cls.multiplicity * weight * x_est if x_est is not None else 0.0
        value += term
        if x_ci:
            ci_sq += (cls.multiplicity * weight * x_ci) ** 2
        rows.append(
            {
                "config": ",".join(str(v) for v in cls.canonical.partner),
                "multiplicity": cls.multiplicity,
                "crossing_vertices": crossing_vertices,
                "x": x_est,
                "x_ci": x_ci,
                "term": term,
            }
        )
    return SignedMomentPrediction(
        k=k,
        p=float(p),
        supported=True,
        value=value,
        x_method=X_METHOD_MC if any_mc else X_METHOD_EXACT,
        mc_ci=math.sqrt(ci_sq) if any_mc else 0.0,
        decomposition=tuple(rows),
    )


def signed_moment_highly_palindromic(k: int, p, degree: int) -> SignedMomentPrediction:
    """Signed-moment prediction for degree >= 1 palindromic ensembles.

    Only the p = 1/2 endpoint has a crossing-census prediction (semicircle,
    Catalan moments).  Away from it the contribution of a pairing is not a
    function of its crossing count alone, and the unsigned (p = 1) limit has
    no closed form here either, so an explicit unsupported marker is
    returned instead of a number.
    """
    if degree < 1:
        raise ValueError("use signed_moment_palindromic for degree 0")
    _check_sign_p(p)
    if Fraction(p) == Fraction(1, 2):
        value = Fraction(catalan(k))
        return SignedMomentPrediction(
            k=k,
            p=0.5,
            supported=True,
            value=float(value),
            value_exact=value,
            x_method=X_METHOD_EXACT,
            decomposition=({"m": 0, "count": catalan(k), "weight": 1.0, "term": float(value)},),
        )
    return SignedMomentPrediction(
        k=k,
        p=float(p),
        supported=False,
        value=None,
        x_method="unsupported",
        reason=(
            "contributions of degree >= 1 palindromic ensembles are not determined "
            "by crossing counts alone; no closed form away from p = 1/2"
        ),
    )


# ---------------------------------------------------------------------------
# exact finite-size oracle
# ---------------------------------------------------------------------------


def brute_force_finite_moment(
    N: int,
    k: int,
    kind: Kind,
    p,
    base: BaseDistribution = BaseDistribution.STANDARD_GAUSSIAN,
    palindrome_degree: int = 0,
) -> Fraction:
    """Exact expected k-th rescaled moment of an N x N signed sample.

    Expands E(Trace(A^k)) / N**(k/2+1) over all N**k cyclic index tuples:
    matrix factors are grouped by the ensemble's variable-identification
    rule and contribute products of tabulated base moments; sign factors
    contribute (2p-1) per odd-multiplicity sign variable.  Returns an exact
    Fraction (pass p as a Fraction to keep it exact in p); odd k gives 0.

    Budget: N**k <= 10**7.
    """
    if N**k > BRUTE_FORCE_BUDGET:
        raise ValueError(f"N**k = {N**k} exceeds budget {BRUTE_FORCE_BUDGET}")
    _check_sign_p(p)
    mode = _KIND_MODE[kind]
    block = 0
    if kind is Kind.HIGHLY_PALINDROMIC:
        if palindrome_degree < 1:
            raise ValueError("highly palindromic oracle needs degree >= 1")
        if N % (1 << (palindrome_degree + 1)):
            raise ValueError("N must be divisible by 2**(degree+1)")
        block = N >> palindrome_degree
    elif palindrome_degree:
        raise ValueError("palindrome_degree only applies to the highly palindromic kind")
    if kind is Kind.PALINDROMIC_TOEPLITZ and N % 2:
        raise ValueError("palindromic Toeplitz oracle needs even N")
    table = kernels.tuple_moment_counts(N, k, mode, block)
    w = 2 * Fraction(p) - 1
    total = Fraction(0)
    for profile, counts in table.items():
        base_factor = Fraction(1)
        for mult in profile:
            base_factor *= base.moment(mult)
        if base_factor == 0:
            continue
        for odd_eps, count in enumerate(counts):
            if count:
                total += int(count) * base_factor * w**odd_eps
    if total == 0:
        return Fraction(0)
    return total / Fraction(N ** (k // 2 + 1))
