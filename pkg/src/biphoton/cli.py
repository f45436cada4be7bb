"""Command-line front end: run presets, sweep phases, test CHSH, self-check.

Exit codes: 0 all verdicts/invariants pass, 1 a verdict or invariant
failed, 2 usage or configuration error.  All numeric output uses 15
significant digits so files diff byte-identically between runs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import checks
from .analysis import FringeScan, chsh, fringe_visibility, phase_grid, state_discrimination_report
from .config import (
    ConfigError,
    build_bell_request,
    build_experiment_spec,
    build_sweep_request,
    load_config,
)
from .experiments import DelayedChoiceData, ExperimentSpec, RunOutcome, Verdict, run_preset
from .measurement import marginals

SWEEP_COLUMNS = (
    "delta_phi",
    "p11",
    "p12",
    "p21",
    "p22",
    "marg_s1",
    "marg_a1",
    "emp_p11",
    "emp_p12",
    "emp_p21",
    "emp_p22",
    "n_trials",
)

DELAYED_COLUMNS = ("phi_s", "analytic_off_p1", "off_n", "off_p1", "on_n", "on_p1")

_MIN_VISIBILITY_POINTS = 8


def _fmt(value) -> str:
    return format(value, ".15g")


def _scan_csv_lines(scan: FringeScan) -> list[str]:
    lines = [",".join(SWEEP_COLUMNS)]
    for setting, p, tally in zip(scan.settings, scan.analytic, scan.empirical):
        dist_s, dist_a = marginals(p)
        emp = tally.frequencies
        row = (
            _fmt(setting.delta),
            _fmt(p.p11),
            _fmt(p.p12),
            _fmt(p.p21),
            _fmt(p.p22),
            _fmt(dist_s[0]),
            _fmt(dist_a[0]),
            _fmt(emp[0, 0]),
            _fmt(emp[0, 1]),
            _fmt(emp[1, 0]),
            _fmt(emp[1, 1]),
            str(tally.n_trials),
        )
        lines.append(",".join(row))
    return lines


def _delayed_csv_lines(data: DelayedChoiceData) -> list[str]:
    lines = [",".join(DELAYED_COLUMNS)]
    for k in range(data.phi_values.size):
        row = (
            _fmt(data.phi_values[k]),
            _fmt(data.analytic_off_p1[k]),
            str(int(data.off_n[k])),
            _fmt(data.off_p1[k]),
            str(int(data.on_n[k])),
            _fmt(data.on_p1[k]),
        )
        lines.append(",".join(row))
    return lines


def _write_lines(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _verdict_lines(verdicts: list[Verdict]) -> list[str]:
    return [
        f"{'PASS' if v.passed else 'FAIL'} {v.name} "
        f"measured={_fmt(v.measured)} expected={_fmt(v.expected)} tolerance={_fmt(v.tolerance)}"
        for v in verdicts
    ]


def _emit(args, text: str) -> None:
    if not args.quiet:
        print(text)


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    spec = build_experiment_spec(cfg, seed_override=args.seed)
    outcome: RunOutcome = run_preset(spec)
    out_dir = Path(args.out if args.out is not None else cfg.get("out", "out"))

    if outcome.scan is not None:
        _write_lines(out_dir / f"{spec.preset}_scan.csv", _scan_csv_lines(outcome.scan))
    if outcome.delayed is not None:
        _write_lines(out_dir / f"{spec.preset}_bins.csv", _delayed_csv_lines(outcome.delayed))
    lines = _verdict_lines(outcome.verdicts)
    _write_lines(out_dir / f"{spec.preset}_verdicts.txt", lines)
    for line in lines:
        _emit(args, line)
    return 0 if all(v.passed for v in outcome.verdicts) else 1


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    source, base, sweep, n_trials, seed = build_sweep_request(cfg, seed_override=args.seed)

    from .experiments import _build_scan, _scan_settings  # shared sweep machinery

    spec = ExperimentSpec(
        preset={"entangled": "rtm", "product": "product_control", "mixture": "mixture_control"}[source.tag],
        source=source,
        settings=base,
        n_trials=n_trials,
        seed=seed,
        sweep=sweep,
    )
    scan = _build_scan(spec, _scan_settings(spec))
    out_dir = Path(args.out if args.out is not None else cfg.get("out", "out"))
    _write_lines(out_dir / "sweep.csv", _scan_csv_lines(scan))

    if len(scan.settings) >= _MIN_VISIBILITY_POINTS:
        vis = fringe_visibility(scan.cell_series(1, 1))
        _emit(args, f"coincidence visibility (cell 1,1): {_fmt(vis)}")
    else:
        _emit(args, "coincidence visibility: not computable (fewer than 8 sweep points)")
    _emit(args, f"wrote {len(scan.settings)} rows")
    return 0


def cmd_bell(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    angles, source, expect_violation = build_bell_request(cfg)
    result = chsh(*angles, source=source)
    for pair, corr in zip(result.settings, result.correlations):
        _emit(args, f"E(phi_s={_fmt(pair.phi_s)}, phi_a={_fmt(pair.phi_a)}) = {_fmt(corr)}")
    _emit(args, f"S = {_fmt(result.s_value)}  |S| = {_fmt(abs(result.s_value))}")
    _emit(args, "violation" if result.violates else "no violation")
    return 0 if result.violates == expect_violation else 1


def cmd_check(args) -> int:
    results = checks.run_all()
    for r in results:
        if r.passed:
            _emit(args, f"ok   {r.name}")
        else:
            _emit(args, f"FAIL {r.name}: {r.detail}")
    failed = [r for r in results if not r.passed]
    _emit(args, f"{len(results) - len(failed)}/{len(results)} invariants passed")
    if not failed:
        report = state_discrimination_report(phase_grid(16))
        for row in report.to_rows():
            _emit(args, f"{row[0]:<26} {row[1]:>22} {row[2]:>22}")
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphoton",
        description="Simulate two-photon interferometry: entangled-pair fringes, "
        "local decoherence, and CHSH tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required: bool):
        p.add_argument("--config", required=config_required, help="path to a key = value config file")
        p.add_argument("--out", default=None, help="output directory (default: 'out' or config key)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--quiet", action="store_true", help="suppress informational output")

    p_run = sub.add_parser("run", help="run a named preset and write scan + verdicts")
    add_common(p_run, config_required=True)
    p_run.set_defaults(fn=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep a phase and write the per-point CSV")
    add_common(p_sweep, config_required=True)
    p_sweep.set_defaults(fn=cmd_sweep)

    p_bell = sub.add_parser("bell", help="evaluate the CHSH statistic")
    add_common(p_bell, config_required=False)
    p_bell.set_defaults(fn=cmd_bell)

    p_check = sub.add_parser("check", help="run the invariant suite")
    add_common(p_check, config_required=False)
    p_check.set_defaults(fn=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
