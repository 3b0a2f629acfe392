"""Command-line front end: ``fockcm run|ensemble|compare-nsm|presets``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import _core
from .config import apply_overrides, format_config, parse_config
from .errors import FockCMError, InvalidConfig, NumericalFault, ParseError
from .experiment import (
    EnsembleSummary,
    ExperimentConfig,
    Selection,
    TrajectoryResult,
    compare_nsm,
    run_ensemble,
    run_trajectory,
)
from .presets import PRESETS, get_preset

log = logging.getLogger("fockcm")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

TRAJECTORY_COLUMNS = ["k", "mean_n", "delta_n", "p_k", "cum_log_success", "tau_k"]
SUMMARY_COLUMNS = ["seed", "converged", "converged_n", "final_delta_n", "cum_log_success"]


def fmt(value) -> str:
    """Shortest round-trip text for numbers; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_rows(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def write_trajectory(path: Path, result: TrajectoryResult, with_outcome: bool = False) -> None:
    header = TRAJECTORY_COLUMNS + (["outcome"] if with_outcome else [])
    rows = (
        [r.k, r.mean_n, r.delta_n, r.p_k, r.cum_log_success, r.tau_k] + ([r.outcome] if with_outcome else [])
        for r in result.records
    )
    _write_rows(path, header, rows)


def write_pn(path: Path, probabilities: np.ndarray) -> None:
    _write_rows(path, ["n", "p"], ((n, p) for n, p in enumerate(probabilities)))


def write_summary(path: Path, summary: EnsembleSummary) -> None:
    rows = zip(
        summary.seeds,
        summary.converged,
        summary.converged_n,
        summary.final_delta_n,
        summary.cum_log_success,
    )
    _write_rows(path, SUMMARY_COLUMNS, rows)


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    base = get_preset(args.preset) if args.preset else ExperimentConfig()
    if args.config:
        path = Path(args.config)
        text = path.read_text(encoding="utf-8")
        base = parse_config(text, base=base, source=str(path))
    if args.set:
        base = apply_overrides(base, args.set)
    if args.seed is not None:
        base = apply_overrides(base, [f"seed={args.seed}"])
    return base


def _prepare_out(args: argparse.Namespace, config: ExperimentConfig) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = f"preset: {args.preset}" if args.preset else None
    (out / "config.txt").write_text(format_config(config, header), encoding="utf-8")
    return out


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args)
    out = _prepare_out(args, config)
    result = run_trajectory(config)
    write_trajectory(out / "trajectory.csv", result, config.selection is Selection.BORN_SAMPLED)
    write_pn(out / "final_pn.csv", result.final_pn)
    if result.failed:
        print(f"numerical fault: {result.fault}", file=sys.stderr)
        return EXIT_NUMERICAL
    last = result.records[-1]
    state = f"converged to n={result.converged_n}" if result.converged else "not converged"
    print(f"{len(result.records)} atoms: <n>={last.mean_n:.4f} dn={last.delta_n:.4f} {state}")
    return EXIT_OK


def cmd_ensemble(args: argparse.Namespace) -> int:
    config = load_config(args)
    out = _prepare_out(args, config)
    summary = run_ensemble(config, args.seeds, workers=args.workers)
    write_summary(out / "summary.csv", summary)
    _write_rows(
        out / "median_delta_n.csv",
        ["k", "median_delta_n"],
        ((k + 1, v) for k, v in enumerate(summary.median_delta_n)),
    )
    faults = [(s, f) for s, f in zip(summary.seeds, summary.faults) if f]
    if faults:
        with open(out / "faults.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["seed", "fault"])
            writer.writerows(faults)
    hist = ", ".join(f"n={n}: {c}" for n, c in summary.converged_n_histogram().items()) or "none"
    print(f"{summary.n_converged}/{len(summary.seeds)} seeds converged ({hist}); {len(faults)} faults")
    return EXIT_OK


def cmd_compare_nsm(args: argparse.Namespace) -> int:
    config = load_config(args)
    out = _prepare_out(args, config)
    cm, nsm = compare_nsm(config)
    write_trajectory(out / "trajectory_cm.csv", cm, config.selection is Selection.BORN_SAMPLED)
    write_trajectory(out / "trajectory_nsm.csv", nsm)
    write_pn(out / "final_pn_cm.csv", cm.final_pn)
    write_pn(out / "final_pn_nsm.csv", nsm.final_pn)
    steps = max(len(cm.records), len(nsm.records))

    def col(result, k, attr):
        return getattr(result.records[k], attr) if k < len(result.records) else None

    rows = (
        [
            k + 1,
            col(cm, k, "tau_k") if k < len(cm.records) else col(nsm, k, "tau_k"),
            col(cm, k, "mean_n"),
            col(cm, k, "delta_n"),
            col(nsm, k, "mean_n"),
            col(nsm, k, "delta_n"),
        ]
        for k in range(steps)
    )
    _write_rows(out / "compare.csv", ["k", "tau_k", "cm_mean_n", "cm_delta_n", "nsm_mean_n", "nsm_delta_n"], rows)
    status = EXIT_OK
    for label, res in (("cm", cm), ("nsm", nsm)):
        if res.failed:
            print(f"{label}: numerical fault: {res.fault}", file=sys.stderr)
            status = EXIT_NUMERICAL
        else:
            print(f"{label}: <n>={res.records[-1].mean_n:.4f} dn={res.records[-1].delta_n:.4f}")
    return status


def cmd_presets(args: argparse.Namespace) -> int:
    if args.dump:
        sys.stdout.write(format_config(get_preset(args.dump), f"preset: {args.dump}"))
        return EXIT_OK
    for name, preset in PRESETS.items():
        cfg = preset.build()
        print(f"{name:11s} {preset.description}")
        print(f"{'':11s} tau_mean={cfg.tau_mean:.6g} spread={cfg.spread:.6g} atoms={cfg.n_atoms}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fockcm", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", help="key = value configuration file")
        p.add_argument("--preset", metavar="NAME", choices=sorted(PRESETS), help="start from a named preset")
        p.add_argument("--out", metavar="DIR", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, metavar="N", help="override the base seed")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one field")

    p_run = sub.add_parser("run", help="single trajectory")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_ens = sub.add_parser("ensemble", help="multi-seed ensemble")
    common(p_ens)
    p_ens.add_argument("--seeds", type=int, default=20, metavar="N")
    p_ens.add_argument("--workers", type=int, default=1, metavar="N")
    p_ens.set_defaults(func=cmd_ensemble)

    p_cmp = sub.add_parser("compare-nsm", help="conditional vs non-selective measurement on one timing stream")
    common(p_cmp)
    p_cmp.set_defaults(func=cmd_compare_nsm)

    p_pre = sub.add_parser("presets", help="list presets")
    p_pre.add_argument("--dump", metavar="NAME", choices=sorted(PRESETS), help="print a preset as a config file")
    p_pre.set_defaults(func=cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    log.debug("kernel backend: %s", _core.BACKEND)
    try:
        return args.func(args)
    except (ParseError, InvalidConfig) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFault as exc:
        print(f"numerical fault: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FockCMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
