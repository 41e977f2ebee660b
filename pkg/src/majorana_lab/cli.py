"""Command-line entry point: ``verify``, ``simulate``, ``sweep`` and ``partition``.

Exit codes: 0 success, 1 failed verification or crash, 2 bad input,
3 simulation stopped by blow-up.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .clifford import STANDARD
from .config import ConfigError, parse_config
from .diagnostics import cauchy_table, greedy_partition, pullback
from .persistence import RunManifest, format_float, read_series, save_checkpoint, write_series
from .runner import run_simulation
from .sweep import frontier, run_sweep, write_table
from .verify import FAULTS, run_all

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_BLOWUP = 3

log = logging.getLogger("majorana_lab")


def _float_list(text: str):
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _write_json(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- commands


def cmd_verify(args) -> int:
    rep = FAULTS[args.inject_fault]() if args.inject_fault else STANDARD
    report = run_all(rep, flow=not args.skip_flow)
    report["version"] = __version__
    if args.inject_fault:
        report["injected_fault"] = args.inject_fault
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _snapshot_name(t: float) -> str:
    return f"snapshot_t{t:.6f}.mdl"


def simulate(cfg, out: Path, integrator: str = "strang") -> tuple[RunManifest, object]:
    out.mkdir(parents=True, exist_ok=True)
    start = time.time()
    result = run_simulation(cfg, integrator=integrator)
    written = []
    cfg_path = out / "config.json"
    cfg_path.write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
    written.append(cfg_path)
    written.append(write_series(result.records, out / "series.csv"))
    times = sorted(result.snapshots)
    for t in times:
        written.append(save_checkpoint(result.snapshots[t], out / _snapshot_name(t)))
    if times:
        window = cfg.causality_window()
        pulled = [pullback(result.snapshots[t], window) for t in times]
        table = cauchy_table(pulled, result.final.grid, cfg.diagnostics.s)
        cauchy = {"times": times, "s": cfg.diagnostics.s, "tables": {k: v.tolist() for k, v in table.items()}}
        _write_json(cauchy, out / "cauchy.json")
        written.append(out / "cauchy.json")
    written.append(save_checkpoint(result.final, out / "final.mdl"))
    if cfg.diagnostics.beta is not None and len(result.records) >= 2:
        col = _default_column(result.records[0].l4x)
        part = greedy_partition(
            result.times,
            np.array([r.l4x[col] for r in result.records]),
            cfg.diagnostics.beta,
            c0=cfg.diagnostics.c0,
            a_norm=cfg.data.A if cfg.diagnostics.c0 is not None else None,
        )
        _write_json({"column": f"l4x_{col}", **part.to_dict()}, out / "partition.json")
        written.append(out / "partition.json")
    manifest = RunManifest(
        config_hash=cfg.config_hash(),
        code_version=__version__,
        start_walltime=start,
        end_walltime=time.time(),
        outcome=result.outcome,
        blowup_t=result.blowup_t,
    )
    for path in written:
        manifest.add_file(path, out)
    manifest.write(out / "manifest.json")
    return manifest, result


def _default_column(l4x: dict) -> str:
    return "phi_plus" if "phi_plus" in l4x else "psi"


def cmd_simulate(args) -> int:
    cfg = parse_config(args.config)
    manifest, result = simulate(cfg, Path(args.out), args.integrator)
    if result.outcome == "blowup":
        log.error("run stopped: %s", result.detail)
        return EXIT_BLOWUP
    log.info("completed %d records into %s", len(result.records), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = parse_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = run_sweep(cfg, args.a_list, args.eps_list, workers=args.workers)
    write_table(rows, out / "sweep.csv")
    _write_json(frontier(rows), out / "frontier.json")
    for r in rows:
        log.info("A=%s eps=%s %s", format_float(r.A), format_float(r.eps), r.outcome)
    return EXIT_OK


def cmd_partition(args) -> int:
    series = read_series(args.series)
    if "t" not in series:
        raise ValueError(f"{args.series}: no 't' column")
    if args.column:
        col = args.column
    else:
        col = "l4x_phi_plus" if "l4x_phi_plus" in series else "l4x_psi"
    if col not in series:
        raise ValueError(f"{args.series}: no {col!r} column")
    part = greedy_partition(series["t"], series[col], args.beta, c0=args.c0, a_norm=args.a_norm)
    text = json.dumps({"column": col, **part.to_dict()}, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="majorana-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the invariant suites")
    v.add_argument("--report", help="also write the JSON report here")
    v.add_argument("--inject-fault", choices=sorted(FAULTS), help="test hook: corrupt the representation")
    v.add_argument("--skip-flow", action="store_true", help="skip the 32^3 free-flow suite")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="run one configured simulation")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--integrator", choices=["strang", "reference"], default="strang")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="run an (A, eps) grid of simulations")
    w.add_argument("--config", required=True)
    w.add_argument("--a-list", type=_float_list, required=True)
    w.add_argument("--eps-list", type=_float_list, required=True)
    w.add_argument("--out", required=True)
    w.add_argument("--workers", type=int, default=None)
    w.set_defaults(func=cmd_sweep)

    q = sub.add_parser("partition", help="greedy beta/4 partition of a series column")
    q.add_argument("--series", required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--c0", type=float, default=None)
    q.add_argument("--a-norm", type=float, default=None)
    q.add_argument("--column", default=None, help="default: l4x_phi_plus, else l4x_psi")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_partition)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
