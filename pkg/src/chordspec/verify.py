"""Acceptance checks, grouped into named suites for the CLI and the test gate.

Each check returns a CheckResult; the defaults are the full acceptance
parameters (exhaustive censuses through k = 7, 10^5 Monte Carlo trials,
N = 1024 with 100 samples).  ``quick=True`` shrinks the expensive spectral
checks for interactive use; the test suite always runs the full versions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from chordspec import crossing_stats as cs
from chordspec import pairings as pr
from chordspec import spectra as sp
from chordspec import theory as th
from chordspec.ensembles import EnsembleSpec, Kind


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _result(name: str, started: float, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=passed, detail=detail, elapsed=time.time() - started)


def _diameters(v: int) -> pr.Pairing:
    return pr.Pairing(tuple((i + v) % (2 * v) for i in range(2 * v)))


# ---------------------------------------------------------------------------
# combinatorics
# ---------------------------------------------------------------------------


def check_census_exactness(k_max: int = 7) -> CheckResult:
    """Census totals sum to (2k-1)!! and match the closed forms for m <= 5."""
    started = time.time()
    failures = []
    for k in range(1, k_max + 1):
        census = pr.crossing_census(k)
        if census.total_pairings() != pr.double_factorial(2 * k - 1):
            failures.append(f"k={k}: total != (2k-1)!!")
        for m in range(0, min(k, 5) + 1):
            if census.totals[m] != pr.closed_form_cr(k, m):
                failures.append(f"k={k}, m={m}: census != closed form")
    pinned = {2: 1, 3: 4, 4: 31, 5: 288}
    for k, expected in pinned.items():
        if k <= k_max and pr.crossing_census(k).totals[k] != expected:
            failures.append(f"all-crossing count at k={k} != {expected}")
    detail = "; ".join(failures) if failures else (
        f"censuses exact for k <= {k_max}; pinned all-crossing counts 1, 4, 31, 288"
    )
    return _result("census-exactness", started, not failures, detail)


def check_insertion_counts(k_max: int = 6) -> CheckResult:
    """Brute-force insertion counts equal C(2k, k-v) for crossing partials."""
    started = time.time()
    single = pr.Pairing((1, 0))
    failures = []
    for k in range(1, k_max + 1):
        for v in range(1, k + 1):
            partial = single if v == 1 else _diameters(v)
            closed = pr.nc_nd_placement_count(k, v, partial)
            brute = pr.nc_nd_placement_verify(k, v, partial)
            if closed != brute:
                failures.append(f"(k={k}, v={v}): {closed} != {brute}")
    detail = "; ".join(failures) if failures else f"all (k <= {k_max}, v <= k) insertion counts match"
    return _result("insertion-counts", started, not failures, detail)


def check_catalan_convolution(n_max: int = 12) -> CheckResult:
    started = time.time()
    failures = [
        f"(n={n}, r={r})"
        for n in range(1, n_max + 1)
        for r in range(1, n + 1)
        if pr.catalan_convolution(n, r)[0] != pr.catalan_convolution(n, r)[1]
    ]
    detail = "; ".join(failures) if failures else f"identity exact for all n <= {n_max}, r <= n"
    return _result("catalan-convolution", started, not failures, detail)


def check_support_inequality(k_max: int = 7) -> CheckResult:
    """Signed palindromic moments dominate (2p-1)^(2k) (2k-1)!! exactly."""
    started = time.time()
    failures = []
    for k in range(1, k_max + 1):
        for p in (Fraction(3, 5), Fraction(3, 4), Fraction(9, 10)):
            moment = th.signed_moment_palindromic(k, p).value_exact
            bound = (2 * p - 1) ** (2 * k) * pr.double_factorial(2 * k - 1)
            if not moment >= bound:
                failures.append(f"(k={k}, p={p})")
    detail = "; ".join(failures) if failures else (
        f"M(p) >= (2p-1)^(2k) (2k-1)!! exactly for k <= {k_max}, p in {{0.6, 0.75, 0.9}}"
    )
    return _result("support-inequality", started, not failures, detail)


# ---------------------------------------------------------------------------
# crossing statistics
# ---------------------------------------------------------------------------


def check_mean_formulas(
    enum_k_max: int = 7,
    hyp_k_max: int = 50,
    residual_range: tuple[int, int] = (10, 60),
    residual_bound: float = 10.0,
) -> CheckResult:
    started = time.time()
    failures = []
    expected_small = {2: Fraction(4, 3), 3: Fraction(16, 5)}
    for k in range(2, enum_k_max + 1):
        exact = cs.mean_crossing_exact(k)
        enumerated, _ = cs.crossing_moments_enumerated(k)
        if exact != enumerated:
            failures.append(f"k={k}: exact sum != enumerated mean")
        if k in expected_small and exact != expected_small[k]:
            failures.append(f"k={k}: mean != {expected_small[k]}")
    for k in range(2, hyp_k_max + 1):
        exact = float(cs.mean_crossing_exact(k))
        hyp = cs.mean_crossing_hypergeometric(k)
        if abs(hyp - exact) > 1e-9 * abs(exact):
            failures.append(f"k={k}: hypergeometric mean off by {abs(hyp - exact):.3e}")
    worst = 0.0
    for k in range(residual_range[0], residual_range[1] + 1):
        resid = abs(float(cs.mean_crossing_exact(k)) - cs.mean_crossing_asymptotic(k)) * k * k
        worst = max(worst, resid)
    if worst > residual_bound:
        failures.append(f"k^2 residual {worst:.3f} exceeds bound {residual_bound}")
    detail = "; ".join(failures) if failures else (
        f"mean exact==enumerated (k<={enum_k_max}); hypergeometric within 1e-9 "
        f"(k<={hyp_k_max}); k^2 residual <= {worst:.2f}"
    )
    return _result("mean-formulas", started, not failures, detail)


def check_variance_and_pa(
    enum_k_max: int = 7,
    mc_ks: tuple[int, ...] = (50, 100, 200),
    trials: int = 100_000,
    seed: int = 11,
    band: tuple[float, float] = (3.4, 4.6),
) -> CheckResult:
    started = time.time()
    failures = []
    expected_var = {2: Fraction(32, 9), 3: Fraction(144, 25)}
    deviations = []
    for k in range(2, enum_k_max + 1):
        _, var = cs.crossing_moments_enumerated(k)
        deviations.append(abs(float(var) - 4.0))
        if k in expected_var and var != expected_var[k]:
            failures.append(f"k={k}: variance != {expected_var[k]}")
    # approach to 4: deviations decrease once past the early hump (k >= 4)
    tail = deviations[2:]
    if any(late >= early for early, late in zip(tail, tail[1:])):
        failures.append(f"|var - 4| not decreasing for k >= 4: {tail}")
    mc_vals = []
    for k in mc_ks:
        report = cs.monte_carlo_crossing(k, trials, seed)
        mc_vals.append(f"k={k}: {report.variance:.3f}")
        if not band[0] <= report.variance <= band[1]:
            failures.append(f"MC variance at k={k} is {report.variance:.3f}, outside {band}")
    for k in range(2, 13):
        if cs.probability_two_chords_cross(k) != Fraction(1, 3):
            failures.append(f"p_a != 1/3 at k={k}")
    detail = "; ".join(failures) if failures else (
        f"enumerated variances exact; MC variance {', '.join(mc_vals)}; p_a = 1/3"
    )
    return _result("variance-and-pa", started, not failures, detail)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


def _ensemble_grid(dimension: int):
    yield EnsembleSpec(kind=Kind.FULL_SYMMETRIC, dimension=dimension)
    yield EnsembleSpec(kind=Kind.TOEPLITZ, dimension=dimension)
    yield EnsembleSpec(kind=Kind.PALINDROMIC_TOEPLITZ, dimension=dimension)
    yield EnsembleSpec(
        kind=Kind.HIGHLY_PALINDROMIC, dimension=dimension, palindrome_degree=1
    )


def check_trace_lemma(
    dimension: int = 64, repetitions: int = 20, tol: float = 1e-8, seed: int = 303
) -> CheckResult:
    """Sum of eigenvalue powers equals the trace of the matrix power."""
    started = time.time()
    failures = []
    worst = 0.0
    for spec in _ensemble_grid(dimension):
        for rep in range(repetitions):
            sample = sp.sample_matrix(spec.with_seed(seed + rep))
            spectrum = sp.eigenvalues(sample)
            for order in (2, 4, 6, 8):
                from_eigs = sp.rescaled_moment(spectrum, order)
                from_trace = sp.trace_moment(sample, order)
                rel = abs(from_eigs - from_trace) / abs(from_trace)
                worst = max(worst, rel)
                if rel > tol:
                    failures.append(
                        f"{spec.kind.value} rep={rep} order={order}: rel err {rel:.2e}"
                    )
    detail = "; ".join(failures) if failures else (
        f"{repetitions} matrices x 4 kinds, even orders <= 8: worst rel err {worst:.2e}"
    )
    return _result("trace-lemma", started, not failures, detail)


def _check_moment(report, order: int, target: float, sigmas: float, failures: list, label: str):
    mean, se = report.moments[order]
    if abs(mean - target) > sigmas * se:
        failures.append(
            f"{label} M{order} = {mean:.4f} +- {se:.4f} not within {sigmas} SE of {target}"
        )


def check_endpoint_moments(
    dimension: int = 1024, samples: int = 100, seed: int = 2024, quick: bool = False
) -> CheckResult:
    """Signed palindromic Toeplitz at p = 1/2 (semicircle) and p = 1 (Gaussian)."""
    started = time.time()
    if quick:
        dimension, samples = 256, 30
    failures: list[str] = []
    targets = {0.5: {2: 1.0, 4: 2.0, 6: 5.0}, 1.0: {2: 1.0, 4: 3.0, 6: 15.0}}
    for p, expected in targets.items():
        spec = EnsembleSpec(
            kind=Kind.PALINDROMIC_TOEPLITZ, dimension=dimension, sign_p=p, seed=seed
        )
        report = sp.ensemble_moments(spec, samples=samples, k_max=6)
        for order, target in expected.items():
            _check_moment(report, order, target, 5.0, failures, f"p={p}")
        for order in (1, 3, 5):
            _check_moment(report, order, 0.0, 5.0, failures, f"p={p}")
    detail = "; ".join(failures) if failures else (
        f"N={dimension}, {samples} samples: Catalan moments at p=1/2, Gaussian at p=1, "
        "odd moments at 0, all within 5 SE"
    )
    return _result("endpoint-moments", started, not failures, detail)


def check_interpolation(
    dimension: int = 1024, samples: int = 100, seed: int = 2024, quick: bool = False
) -> CheckResult:
    """p = 0.75 fourth moment matches the census prediction 2 + (1/2)^4."""
    started = time.time()
    if quick:
        dimension, samples = 256, 30
    failures: list[str] = []
    target = float(th.signed_moment_palindromic(2, Fraction(3, 4)).value_exact)
    spec = EnsembleSpec(
        kind=Kind.PALINDROMIC_TOEPLITZ, dimension=dimension, sign_p=0.75, seed=seed
    )
    report = sp.ensemble_moments(spec, samples=samples, k_max=4)
    _check_moment(report, 4, target, 5.0, failures, "p=0.75")
    # independent confirmation: the exact finite-size oracle trends to the target
    deviations = [
        abs(
            float(
                th.brute_force_finite_moment(
                    N, 4, Kind.PALINDROMIC_TOEPLITZ, Fraction(3, 4)
                )
            )
            - target
        )
        for N in (4, 8, 16)
    ]
    if not (deviations[0] > deviations[1] > deviations[2]):
        failures.append(f"finite-size oracle deviations not decreasing: {deviations}")
    detail = "; ".join(failures) if failures else (
        f"M4 within 5 SE of {target}; oracle deviations {['%.3f' % d for d in deviations]} decreasing"
    )
    return _result("interpolation", started, not failures, detail)


# ---------------------------------------------------------------------------
# theory
# ---------------------------------------------------------------------------


def check_toeplitz_volume(
    mc_samples: int = 400_000,
    grid_points: int = 2000,
    dimension: int = 1024,
    samples: int = 100,
    seed: int = 77,
    quick: bool = False,
) -> CheckResult:
    """Monte Carlo contribution of the crossed quadruple vs the grid oracle,
    and the resulting unsigned fourth-moment prediction vs simulation."""
    started = time.time()
    if quick:
        dimension, samples, mc_samples, grid_points = 256, 30, 100_000, 800
    failures: list[str] = []
    crossing = pr.Pairing((2, 3, 0, 1))
    oracle = th.toeplitz_x_grid(crossing, grid_points)
    estimate, half_width = th.toeplitz_x(crossing, mc_samples, seed)
    if abs(estimate - oracle) > half_width:
        failures.append(
            f"MC volume {estimate:.5f} +- {half_width:.5f} misses grid oracle {oracle:.5f}"
        )
    prediction = th.signed_moment_toeplitz(2, 1, mc_samples, seed)
    spec = EnsembleSpec(kind=Kind.TOEPLITZ, dimension=dimension, sign_p=1.0, seed=seed)
    report = sp.ensemble_moments(spec, samples=samples, k_max=4)
    mean, se = report.moments[4]
    combined = 5.0 * se + (prediction.mc_ci or 0.0)
    if abs(mean - prediction.value) > combined:
        failures.append(
            f"simulated M4 {mean:.4f} vs predicted {prediction.value:.4f} "
            f"outside combined band {combined:.4f}"
        )
    detail = "; ".join(failures) if failures else (
        f"volume {estimate:.5f} +- {half_width:.5f} contains grid {oracle:.5f}; "
        f"simulated M4 {mean:.4f} within {combined:.4f} of predicted {prediction.value:.4f}"
    )
    return _result("toeplitz-volume", started, not failures, detail)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

SUITES = {
    "combinatorics": ("census-exactness", "insertion-counts", "catalan-convolution"),
    "crossing-stats": ("mean-formulas", "variance-and-pa"),
    "spectra": ("trace-lemma", "endpoint-moments"),
    "theory": ("interpolation", "toeplitz-volume", "support-inequality"),
}
SUITES["all"] = tuple(name for group in ("combinatorics", "crossing-stats", "spectra", "theory") for name in SUITES[group])

_QUICK_AWARE = {"endpoint-moments", "interpolation", "toeplitz-volume"}

_CHECKS = {
    "census-exactness": check_census_exactness,
    "insertion-counts": check_insertion_counts,
    "catalan-convolution": check_catalan_convolution,
    "mean-formulas": check_mean_formulas,
    "variance-and-pa": check_variance_and_pa,
    "trace-lemma": check_trace_lemma,
    "endpoint-moments": check_endpoint_moments,
    "interpolation": check_interpolation,
    "toeplitz-volume": check_toeplitz_volume,
    "support-inequality": check_support_inequality,
}

# quick mode only trims the spectral checks; spectra keeps trace-lemma alone
_QUICK_SUITES = {"spectra": ("trace-lemma",)}


def run_suite(suite: str, quick: bool = False) -> list[CheckResult]:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    names = SUITES[suite]
    if quick and suite in _QUICK_SUITES:
        names = _QUICK_SUITES[suite]
    results = []
    for name in names:
        check = _CHECKS[name]
        if quick and name in _QUICK_AWARE:
            results.append(check(quick=True))
        else:
            results.append(check())
    return results
