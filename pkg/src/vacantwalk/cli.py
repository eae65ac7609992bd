"""Command-line interface.

Subcommands: simulate (run an experiment from a config file), theory (emit
prediction curves), scan (critical-window scaling), pairing-test (finalized
pairing uniformity), compare (re-aggregate stored trial records against
theory).  Exit codes: 0 success, 1 validation/usage error, 2 a --check run
whose statistical checks did not pass.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io
from .experiments import (
    aggregate,
    critical_window_scan,
    pairing_uniformity_test,
    run_experiment,
)

_SLOPE_WINDOWS = {"critical": (0.55, 0.75), "super": (0.95, 1.05), "sub": (None, 0.2)}


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route through _CliError so
    # usage problems consistently exit 1 and status 2 stays reserved for
    # failed --check runs
    def error(self, message):
        raise _CliError(f"{self.prog}: {message}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="vacantwalk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="run one experiment from a config file")
    sim.add_argument("--config", required=True, help="flat dotted-key config file")
    sim.add_argument("--seed", type=int, default=None, help="override run.seed")
    sim.add_argument("--workers", type=int, default=None, help="override run.workers")
    sim.add_argument("--out", default=".", help="output directory")
    sim.add_argument("--check", action="store_true", help="exit 2 unless every row passes")

    the = sub.add_parser("theory", help="emit prediction curves as CSV")
    the.add_argument("--model", default="regular", choices=["regular"])
    the.add_argument("--r", type=int, default=3)
    the.add_argument("--n", type=int, required=True)
    the.add_argument("--grid", type=int, default=200)
    the.add_argument("--kmax", type=int, default=3)
    the.add_argument("--tmax", type=int, default=None, help="last grid time (default 1.5*tstar)")
    the.add_argument("--out", default="-", help="output CSV path, '-' for stdout")

    scan = sub.add_parser("scan", help="largest-component scaling across n")
    scan.add_argument("--r", type=int, default=3)
    scan.add_argument("--n-list", required=True, help="comma-separated graph sizes")
    scan.add_argument("--trials", type=int, default=30)
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--workers", type=int, default=1)
    scan.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    scan.add_argument("--check", action="store_true", help="exit 2 unless slopes are in window")

    pt = sub.add_parser("pairing-test", help="uniformity chi-square of finalized pairings")
    pt.add_argument("--runs", type=int, default=150000)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--n", type=int, default=2)
    pt.add_argument("--r", type=int, default=3)
    pt.add_argument("--steps", type=int, default=3)
    pt.add_argument("--significance", type=float, default=1e-3)
    pt.add_argument("--check", action="store_true", help="exit 2 if uniformity is rejected")

    cmp_p = sub.add_parser("compare", help="re-aggregate stored trial records against theory")
    cmp_p.add_argument("--manifest", default=None, help="manifest.json of a finished run")
    cmp_p.add_argument("--config", default=None, help="config file (alternative to --manifest)")
    cmp_p.add_argument("--trials", default=None, help="trials.jsonl (alternative to --manifest)")
    cmp_p.add_argument("--out", default="-", help="report CSV path, '-' for stdout")
    cmp_p.add_argument("--check", action="store_true", help="exit 2 unless every row passes")
    return parser


def _cmd_simulate(args) -> int:
    with open(args.config) as fh:
        mapping = io.parse_config(fh.read())
    if args.seed is not None:
        mapping["run.seed"] = str(args.seed)
    if args.workers is not None:
        mapping["run.workers"] = str(args.workers)
    cfg = io.config_to_experiment(mapping)
    os.makedirs(args.out, exist_ok=True)
    report_path = os.path.join(args.out, "report.csv")
    trials_path = os.path.join(args.out, "trials.jsonl")
    manifest_path = os.path.join(args.out, "manifest.json")
    manifest = io.RunManifest.for_config(cfg, [report_path, trials_path])
    io.write_manifest(manifest, manifest_path)
    report, records = run_experiment(cfg)
    io.write_report(report, report_path)
    io.write_trials(records, trials_path)
    failed = [row for row in report.rows if not row.passed]
    print(f"wrote {manifest_path}, {report_path}, {trials_path}")
    print(f"{len(report.rows) - len(failed)}/{len(report.rows)} rows passed")
    if args.check and failed:
        return 2
    return 0


def _cmd_theory(args) -> int:
    header, rows = io.theory_curve(args.n, args.r, args.grid, kmax=args.kmax, t_max=args.tmax)
    if args.out == "-":
        print(",".join(header))
        for row in rows:
            print(",".join(io._fmt(v) for v in row))
    else:
        io.write_csv(args.out, header, rows)
        print(f"wrote {args.out}")
    return 0


def _cmd_scan(args) -> int:
    n_list = [int(item) for item in args.n_list.split(",") if item.strip()]
    report = critical_window_scan(
        args.r, n_list, args.trials, args.seed, workers=args.workers
    )
    header = ["n"] + [f"mean_max_{lab}" for lab in report.mean_max]
    rows = []
    for i, n in enumerate(report.n_values):
        rows.append([n] + [float(report.mean_max[lab][i]) for lab in report.mean_max])
    if args.out == "-":
        print(",".join(header))
        for row in rows:
            print(",".join(io._fmt(v) for v in row))
    else:
        io.write_csv(args.out, header, rows)
    ok = True
    for lab, (slope, stderr) in report.slopes.items():
        print(f"slope[{lab}] = {slope:.4f} +- {stderr:.4f}")
        lo, hi = _SLOPE_WINDOWS.get(lab, (None, None))
        if lo is not None and slope < lo:
            ok = False
        if hi is not None and slope > hi:
            ok = False
    if args.check and not ok:
        return 2
    return 0


def _cmd_pairing_test(args) -> int:
    result = pairing_uniformity_test(args.runs, args.seed, n=args.n, r=args.r, steps=args.steps)
    result.significance = args.significance
    print(
        f"runs={result.runs} categories={len(result.counts)} "
        f"chisq={result.chisq:.3f} p={result.pvalue:.6f}"
    )
    if args.check and not result.passed:
        return 2
    return 0


def _cmd_compare(args) -> int:
    if args.manifest is not None:
        manifest = io.read_manifest(args.manifest)
        mapping = manifest.config
        trials_path = next(p for p in manifest.outputs if p.endswith(".jsonl"))
    else:
        if args.config is None or args.trials is None:
            raise _CliError("compare: need --manifest, or both --config and --trials")
        with open(args.config) as fh:
            mapping = io.parse_config(fh.read())
        trials_path = args.trials
    cfg = io.config_to_experiment(mapping)
    records = io.read_trials(trials_path)
    report = aggregate(cfg, records)
    if args.out == "-":
        print(",".join(io.REPORT_HEADER))
        for row in report.rows:
            print(
                ",".join(
                    [
                        str(row.t),
                        row.stat,
                        io._fmt(row.empirical_mean),
                        io._fmt(row.empirical_stderr),
                        io._fmt(row.theory),
                        io._fmt(row.rel_err),
                        io._fmt(row.z),
                        io._fmt(row.passed),
                    ]
                )
            )
    else:
        io.write_report(report, args.out)
        print(f"wrote {args.out}")
    if args.check and not report.all_passed:
        return 2
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "theory": _cmd_theory,
    "scan": _cmd_scan,
    "pairing-test": _cmd_pairing_test,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
