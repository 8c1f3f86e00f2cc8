"""Command-line interface.

Subcommands:

- ``census``          exact crossing census with closed-form comparison columns
- ``crossing-stats``  exact / asymptotic / Monte Carlo mean and variance per k
- ``simulate``        ensemble moment report plus histogram data
- ``theory``          predicted signed moments (census weights or MC volumes)
- ``verify``          run a named acceptance suite

Exit codes: 0 on success (and all comparisons matching), 1 on verification
failure, 2 on usage errors.  Every subcommand is deterministic given its
full flag set including --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from chordspec import backend_name
from chordspec import crossing_stats as cs
from chordspec import pairings as pr
from chordspec import spectra as sp
from chordspec import theory as th
from chordspec import verify as vf
from chordspec.ensembles import BaseDistribution, EnsembleSpec, Kind

USAGE_ERROR = 2

_KIND_FLAGS = {
    "full-symmetric": Kind.FULL_SYMMETRIC,
    "toeplitz": Kind.TOEPLITZ,
    "palindromic-toeplitz": Kind.PALINDROMIC_TOEPLITZ,
    "highly-palindromic": Kind.HIGHLY_PALINDROMIC,
}
_BASE_FLAGS = {
    "gaussian": BaseDistribution.STANDARD_GAUSSIAN,
    "rademacher": BaseDistribution.RADEMACHER,
    "uniform": BaseDistribution.UNIFORM_SCALED,
}


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _parse_probability(text: str) -> Fraction:
    value = Fraction(text) if "/" in text else Fraction(text)
    if not Fraction(1, 2) <= value <= 1:
        raise argparse.ArgumentTypeError(f"p={text} outside [1/2, 1]")
    return value


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


def cmd_census(args) -> int:
    try:
        census = pr.crossing_census(args.k, cap=args.cap)
    except pr.CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    rows = []
    all_match = True
    for m in range(args.k + 1):
        count = census.totals[m]
        try:
            closed = pr.closed_form_cr(args.k, m)
            match = closed == count
        except pr.UnsupportedFormulaError:
            closed, match = None, None
        if match is False:
            all_match = False
        rows.append((m, count, closed, match))
    total_ok = census.total_pairings() == pr.double_factorial(2 * args.k - 1)
    all_match = all_match and total_ok

    if args.format == "json":
        _write(census.to_json() + "\n", args.out)
    elif args.format == "csv":
        lines = ["m,count,closed_form,match"]
        for m, count, closed, match in rows:
            lines.append(f"{m},{count},{'' if closed is None else closed},{'' if match is None else match}")
        _write("\n".join(lines) + "\n", args.out)
    else:
        header = f"crossing census for 2k = {2 * args.k} vertices ({census.total_pairings()} pairings)"
        lines = [header, f"{'m':>3} {'count':>12} {'closed form':>12} {'match':>6}"]
        for m, count, closed, match in rows:
            closed_s = "-" if closed is None else str(closed)
            match_s = "-" if match is None else ("yes" if match else "NO")
            lines.append(f"{m:>3} {count:>12} {closed_s:>12} {match_s:>6}")
        lines.append(f"sum == (2k-1)!!: {'yes' if total_ok else 'NO'}")
        _write("\n".join(lines) + "\n", args.out)
    return 0 if all_match else 1


# ---------------------------------------------------------------------------
# crossing-stats
# ---------------------------------------------------------------------------


def cmd_crossing_stats(args) -> int:
    ks = list(range(args.k_min, args.k_max + 1))
    mc_ks = [int(x) for x in args.mc_k.split(",")] if args.mc_k else []
    records = []
    all_match = True
    for k in ks:
        exact = cs.mean_crossing_exact(k)
        record = {
            "k": k,
            "mean_exact": f"{exact.numerator}/{exact.denominator}",
            "mean_float": float(exact),
            "mean_hypergeometric": cs.mean_crossing_hypergeometric(k),
            "mean_asymptotic": cs.mean_crossing_asymptotic(k),
        }
        if k <= pr.enumeration_cap(args.cap):
            mean_enum, var_enum = cs.crossing_moments_enumerated(k, cap=args.cap)
            record["mean_enumerated"] = float(mean_enum)
            record["variance_enumerated"] = float(var_enum)
            record["exact_matches_enumerated"] = mean_enum == exact
            all_match = all_match and mean_enum == exact
        records.append(record)
    for k in mc_ks:
        report = cs.monte_carlo_crossing(k, args.trials, args.seed, workers=args.workers)
        records.append(
            {
                "k": k,
                "mean_mc": report.mean,
                "variance_mc": report.variance,
                "std_error": report.std_error,
                "mean_asymptotic": report.mean_asymptotic,
                "trials": report.trials,
                "seed": report.seed,
            }
        )
    if args.format == "json":
        _write(json.dumps(records, indent=2) + "\n", args.out)
    else:
        fields = [
            "k", "mean_exact", "mean_float", "mean_hypergeometric", "mean_asymptotic",
            "mean_enumerated", "variance_enumerated", "exact_matches_enumerated",
            "mean_mc", "variance_mc", "std_error", "trials", "seed",
        ]
        lines = [",".join(fields)]
        for record in records:
            lines.append(",".join(str(record.get(f, "")) for f in fields))
        _write("\n".join(lines) + "\n", args.out)
    return 0 if all_match else 1


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _theory_column(kind: Kind, degree: int, order: int, p: Fraction, mc_samples: int, seed: int):
    """Predicted moment for one order, or None when no prediction is in scope."""
    if order % 2:
        return 0.0
    half = order // 2
    if kind is Kind.PALINDROMIC_TOEPLITZ:
        return th.signed_moment_palindromic(half, p).value
    if kind is Kind.FULL_SYMMETRIC:
        return float(pr.catalan(half))  # Wigner semicircle at every p
    if kind is Kind.TOEPLITZ:
        return th.signed_moment_toeplitz(half, p, mc_samples, seed).value
    prediction = th.signed_moment_highly_palindromic(half, p, degree)
    return prediction.value if prediction.supported else None


def cmd_simulate(args) -> int:
    try:
        spec = EnsembleSpec(
            kind=_KIND_FLAGS[args.kind],
            dimension=args.dim,
            palindrome_degree=args.degree,
            sign_p=float(args.p),
            base=_BASE_FLAGS[args.base],
            seed=args.seed,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    report = sp.ensemble_moments(
        spec, samples=args.samples, k_max=args.k_max, workers=args.workers
    )
    theory = {
        order: _theory_column(
            spec.kind, args.degree, order, args.p, args.theory_mc_samples, args.seed
        )
        for order in range(1, args.k_max + 1)
    }
    report = sp.MomentReport(
        spec=report.spec,
        samples=report.samples,
        k_max=report.k_max,
        seed=report.seed,
        moments=report.moments,
        theory=theory,
    )
    if args.format == "csv":
        lines = ["order,mean,std_error,theory"]
        for order in range(1, args.k_max + 1):
            mean, se = report.moments[order]
            tval = theory[order]
            lines.append(f"{order},{mean},{se},{'unsupported' if tval is None else tval}")
        _write("\n".join(lines) + "\n", args.out)
    else:
        _write(report.to_json() + "\n", args.out)
    if args.hist_out:
        lo, hi = (float(x) for x in args.range.split(":"))
        hist = sp.spectral_histogram(
            spec, samples=args.samples, bins=args.bins, value_range=(lo, hi)
        )
        with open(args.hist_out, "w") as handle:
            handle.write(hist.to_csv())
    return 0


# ---------------------------------------------------------------------------
# theory
# ---------------------------------------------------------------------------


def cmd_theory(args) -> int:
    kind = _KIND_FLAGS[args.kind]
    try:
        if kind is Kind.PALINDROMIC_TOEPLITZ:
            prediction = th.signed_moment_palindromic(args.k, args.p, cap=args.cap)
        elif kind is Kind.TOEPLITZ:
            prediction = th.signed_moment_toeplitz(
                args.k, args.p, args.mc_samples, args.seed, cap=args.cap
            )
        elif kind is Kind.HIGHLY_PALINDROMIC:
            prediction = th.signed_moment_highly_palindromic(args.k, args.p, args.degree)
        else:
            print("error: theory predictions cover Toeplitz-structured kinds", file=sys.stderr)
            return USAGE_ERROR
    except (pr.CapExceededError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    _write(prediction.to_json() + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        results = vf.run_suite(args.suite, quick=args.quick)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return USAGE_ERROR
    summary = {
        "suite": args.suite,
        "quick": args.quick,
        "backend": backend_name,
        "checks": [
            {
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
                "elapsed_seconds": round(r.elapsed, 3),
            }
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name} ({r.elapsed:.1f}s): {r.detail}")
    if args.out:
        _write(json.dumps(summary, indent=2) + "\n", args.out)
    return 0 if summary["passed"] else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chordspec",
        description="Chord-diagram crossing combinatorics and signed structured matrix spectra",
    )
    parser.add_argument("--version", action="version", version="chordspec 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--out", default=None, help="write output to this path")
        p.add_argument("--cap", type=int, default=None, help="enumeration cap override")

    p_census = sub.add_parser("census", help="exact crossing census with closed-form checks")
    p_census.add_argument("--k", type=int, required=True)
    common(p_census)
    p_census.set_defaults(func=cmd_census)

    p_stats = sub.add_parser("crossing-stats", help="mean/variance of the crossing count")
    p_stats.add_argument("--k-min", type=int, default=2)
    p_stats.add_argument("--k-max", type=int, default=7)
    p_stats.add_argument("--mc-k", default="", help="comma-separated k values for Monte Carlo")
    p_stats.add_argument("--trials", type=int, default=100_000)
    common(p_stats)
    p_stats.set_defaults(func=cmd_crossing_stats, format="csv")

    p_sim = sub.add_parser("simulate", help="sample an ensemble and report moments")
    p_sim.add_argument("--kind", choices=sorted(_KIND_FLAGS), required=True)
    p_sim.add_argument("--dim", type=int, default=1024)
    p_sim.add_argument("--degree", type=int, default=0, help="palindromicity degree n")
    p_sim.add_argument("--p", type=_parse_probability, default=Fraction(1))
    p_sim.add_argument("--base", choices=sorted(_BASE_FLAGS), default="gaussian")
    p_sim.add_argument("--samples", type=int, default=100)
    p_sim.add_argument("--k-max", type=int, default=6)
    p_sim.add_argument("--bins", type=int, default=80)
    p_sim.add_argument("--range", default="-3:3", help="histogram range lo:hi")
    p_sim.add_argument("--hist-out", default=None, help="write histogram CSV here")
    p_sim.add_argument("--theory-mc-samples", type=int, default=100_000)
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate, format="json")

    p_theory = sub.add_parser("theory", help="predicted signed moments")
    p_theory.add_argument("--kind", choices=sorted(_KIND_FLAGS), default="palindromic-toeplitz")
    p_theory.add_argument("--k", type=int, required=True)
    p_theory.add_argument("--p", type=_parse_probability, required=True)
    p_theory.add_argument("--degree", type=int, default=1)
    p_theory.add_argument("--mc-samples", type=int, default=100_000)
    common(p_theory)
    p_theory.set_defaults(func=cmd_theory)

    p_verify = sub.add_parser("verify", help="run an acceptance suite")
    p_verify.add_argument("suite", choices=sorted(vf.SUITES))
    p_verify.add_argument("--quick", action="store_true", help="smaller spectral checks")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
