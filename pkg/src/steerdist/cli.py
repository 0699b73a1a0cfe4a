"""Command-line interface: theta/N sweeps, witness-threshold search, filter
optimization, Monte Carlo runs and assemblage JSON linting.

Data goes to stdout (or --out); diagnostics go to stderr.  Exit status is
0 only when the command completed without errors (for ``validate``, only
when the assemblage is valid).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .assemblage import (
    Assemblage,
    Scenario,
    gghz_assemblage_1sdi,
    gghz_assemblage_2sdi,
    ghz_assemblage,
    validate,
)
from .distillation import (
    asymptotic_kappa,
    distill,
    optimize_kappa,
    two_copy_optimal_kappa,
)
from .errors import NoSignChangeError, SteerdistError
from .metrics import assemblage_fidelity, witness_1sdi, witness_2sdi
from .protocol import run_protocol, success_probability
from .states import THETA_MAX

CSV_HEADER = "theta,n,filter,kappa,p_succ,f_1sdi,f_2sdi,s_1sdi,s_2sdi"

FILTER_KINDS = ("none", "optimal", "asymptotic", "fixed")


@dataclass
class SweepRow:
    theta: float
    n_copies: int
    filter_kind: str
    kappa: float
    p_succ_total: float
    f_1sdi: float | None = None
    f_2sdi: float | None = None
    s_1sdi: float | None = None
    s_2sdi: float | None = None

    def to_csv(self) -> str:
        cells = [
            _fmt(self.theta),
            str(self.n_copies),
            self.filter_kind,
            _fmt(self.kappa),
            _fmt(self.p_succ_total),
            _fmt(self.f_1sdi),
            _fmt(self.f_2sdi),
            _fmt(self.s_1sdi),
            _fmt(self.s_2sdi),
        ]
        return ",".join(cells)

    def to_json_dict(self) -> dict:
        return {
            "theta": self.theta,
            "n": self.n_copies,
            "filter": self.filter_kind,
            "kappa": self.kappa,
            "p_succ": self.p_succ_total,
            "f_1sdi": self.f_1sdi,
            "f_2sdi": self.f_2sdi,
            "s_1sdi": self.s_1sdi,
            "s_2sdi": self.s_2sdi,
        }


def _fmt(v) -> str:
    # 9 significant digits, locale-independent; empty cell for skipped scenarios.
    return "" if v is None else format(float(v), ".9g")


def parse_filter(text: str):
    """Parse --filter into (kind, fixed_kappa_or_None)."""
    if text.startswith("fixed:"):
        return "fixed", float(text.split(":", 1)[1])
    if text in ("none", "optimal", "asymptotic"):
        return text, None
    raise argparse.ArgumentTypeError(
        f"filter must be none|optimal|asymptotic|fixed:<kappa>, got {text!r}"
    )


def resolve_kappa(filter_kind, fixed_kappa, theta, n_copies) -> float:
    """Filter strength for one grid point.

    The "optimal" kind maximizes the one-sided fidelity; for GGHZ inputs
    the two scenarios share the same optimum.
    """
    if filter_kind == "none":
        return 1.0
    if filter_kind == "asymptotic":
        return asymptotic_kappa(theta)
    if filter_kind == "fixed":
        return float(fixed_kappa)
    return optimize_kappa(theta, n_copies).kappa_star


def evaluate_point(theta, n_copies, kappa, filter_kind, scenario="both") -> SweepRow:
    """Fidelity and witness of the distilled GGHZ assemblage at one point."""
    row = SweepRow(
        theta=float(theta),
        n_copies=int(n_copies),
        filter_kind=filter_kind,
        kappa=float(kappa),
        p_succ_total=success_probability(theta, kappa, n_copies),
    )
    if scenario in ("1sdi", "both"):
        dist = distill(gghz_assemblage_1sdi(theta), kappa, n_copies)
        row.f_1sdi = assemblage_fidelity(dist, ghz_assemblage(Scenario.ONE_SIDED))
        row.s_1sdi = witness_1sdi(dist).value
    if scenario in ("2sdi", "both"):
        dist = distill(gghz_assemblage_2sdi(theta), kappa, n_copies)
        row.f_2sdi = assemblage_fidelity(dist, ghz_assemblage(Scenario.TWO_SIDED))
        row.s_2sdi = witness_2sdi(dist).value
    return row


def sweep_rows(theta_min, theta_max, steps, n_copies, filter_kind, fixed_kappa=None,
               scenario="both"):
    """One SweepRow per point of the uniform theta grid."""
    if not (0.0 <= theta_min < theta_max <= THETA_MAX + 1e-12):
        raise ValueError(
            f"need 0 <= theta_min < theta_max <= pi/4, got [{theta_min}, {theta_max}]"
        )
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    for theta in np.linspace(theta_min, theta_max, int(steps)):
        kappa = resolve_kappa(filter_kind, fixed_kappa, theta, n_copies)
        yield evaluate_point(theta, n_copies, kappa, filter_kind, scenario)


def threshold_theta(filter_kind, n_copies, scenario="1sdi", fixed_kappa=None,
                    lo=0.01, hi=THETA_MAX, tol=1e-6):
    """Bisect the witness zero of the (possibly distilled) GGHZ assemblage."""
    sc = Scenario(scenario)

    def s_of(theta: float) -> float:
        kappa = resolve_kappa(filter_kind, fixed_kappa, theta, n_copies)
        if sc is Scenario.ONE_SIDED:
            dist = distill(gghz_assemblage_1sdi(theta), kappa, n_copies)
            return witness_1sdi(dist).value
        dist = distill(gghz_assemblage_2sdi(theta), kappa, n_copies)
        return witness_2sdi(dist).value

    s_lo, s_hi = s_of(lo), s_of(hi)
    if s_lo == 0.0:
        return lo
    if s_hi == 0.0:
        return hi
    if (s_lo > 0) == (s_hi > 0):
        raise NoSignChangeError(
            f"witness has sign {'+' if s_lo > 0 else '-'} at both ends of "
            f"[{lo}, {hi}] for filter={filter_kind}, n={n_copies}"
        )
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s_mid = s_of(mid)
        if s_mid == 0.0:
            return mid
        if (s_mid > 0) == (s_lo > 0):
            lo, s_lo = mid, s_mid
        else:
            hi = mid
    return (lo + hi) / 2


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc, out_path) -> None:
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", out_path)


def cmd_sweep(args) -> int:
    rows = list(
        sweep_rows(
            args.theta_min,
            args.theta_max,
            args.steps,
            args.n,
            args.filter[0],
            args.filter[1],
            args.scenario,
        )
    )
    if args.format == "csv":
        lines = [CSV_HEADER] + [r.to_csv() for r in rows]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json([r.to_json_dict() for r in rows], args.out)
    return 0


def cmd_threshold(args) -> int:
    root = threshold_theta(args.filter[0], args.n, args.scenario, args.filter[1])
    _emit_json(
        {
            "theta_root": root,
            "filter": args.filter[0],
            "n": args.n,
            "scenario": args.scenario,
        },
        args.out,
    )
    return 0


def cmd_optimize(args) -> int:
    if (args.theta is None) == (args.assemblage is None):
        raise ValueError("provide exactly one of --theta or --assemblage")
    scenario = Scenario(args.scenario)
    if args.theta is not None:
        result = optimize_kappa(args.theta, args.n, scenario=scenario)
    else:
        asm = Assemblage.load(args.assemblage)
        result = optimize_kappa(asm, args.n)
    doc = {
        "kappa_star": result.kappa_star,
        "f_star": result.f_star,
        "evaluations": result.evaluations,
        "bracket_width": result.bracket_width,
        "n": args.n,
    }
    if args.theta is not None and args.n == 2:
        # comparison point: the analytic two-copy optimum for GGHZ inputs
        doc["closed_form_kappa"] = two_copy_optimal_kappa(args.theta)
    _emit_json(doc, args.out)
    return 0


def cmd_simulate(args) -> int:
    outcome = run_protocol(args.theta, args.kappa, args.n, args.trials, args.seed)
    _emit_json(outcome.to_json_dict(), args.out)
    return 0


def cmd_validate(args) -> int:
    asm = Assemblage.load(args.assemblage)
    report = validate(asm)
    _emit_json(report.to_json_dict(), args.out)
    if not report.ok:
        print(f"{args.assemblage}: {len(report.violations)} violation(s)", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steerdist",
        description="Tripartite steering distillation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None, help="write output to this path")

    p = sub.add_parser("sweep", help="theta sweep of fidelity and witness values")
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=THETA_MAX)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--n", type=int, default=2, help="number of copies")
    p.add_argument("--filter", type=parse_filter, default=("none", None),
                   help="none|optimal|asymptotic|fixed:<kappa>")
    p.add_argument("--scenario", choices=("1sdi", "2sdi", "both"), default="both")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", help="bisect the witness sign change over theta")
    p.add_argument("--filter", type=parse_filter, default=("none", None))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--scenario", choices=("1sdi", "2sdi"), default="1sdi")
    add_common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("optimize", help="maximize distilled fidelity over kappa")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--assemblage", default=None, help="assemblage JSON file")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--scenario", choices=("1sdi", "2sdi"), default="1sdi")
    add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="seeded Monte Carlo of the protocol")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="lint an assemblage JSON file")
    p.add_argument("assemblage", help="assemblage JSON file")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SteerdistError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
