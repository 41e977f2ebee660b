"""(A, eps) sweep harness: one independent simulation per cell."""

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .config import SimConfig, config_from_dict, validate
from .persistence import format_float
from .runner import run_simulation

GROWTH_LIMIT = 2.5
ROUNDOFF_REL = 1e-12
COLUMNS = (
    "A",
    "eps",
    "outcome",
    "blowup_t",
    "max_defect_drift",
    "max_growth",
    "max_scalar_density",
    "linear_dev_T",
    "detail",
)


@dataclass
class SweepRow:
    A: float
    eps: float
    outcome: str
    blowup_t: float = math.nan
    max_defect_drift: float = math.nan
    max_growth: float = math.nan
    max_scalar_density: float = math.nan
    linear_dev_T: float = math.nan
    detail: str = ""


def _growth_column(model: str) -> str:
    return "phi_part" if model == "cubic" else "phi"


def summarize_run(result, A, eps) -> SweepRow:
    """Reduce a finished run to one table row.

    Defect drift is ``max_t |d(t) - d(0)|`` over both signs, normalised by
    ``||psi(0)||_{L^2}`` so that exactly Majorana data (``d(0) = 0``) stays
    meaningful. Growth is ``max_t ||phi(t)||_{H^s} / ||phi(0)||_{H^s}``.
    """
    recs = result.records
    row = SweepRow(A, eps, result.outcome, detail=result.detail)
    if result.blowup_t is not None:
        row.blowup_t = result.blowup_t
    if not recs:
        return row
    scale = math.sqrt(recs[0].charge["psi"]) or 1.0
    drift = 0.0
    for key in ("defect_plus", "defect_minus"):
        series = np.array([getattr(r, key)["psi"] for r in recs])
        drift = max(drift, float(np.max(np.abs(series - series[0]))) / scale)
    row.max_defect_drift = drift
    growth = np.array([r.hs_norms[_growth_column(result.config.model)] for r in recs])
    # an exactly Majorana start has a roundoff-sized small part; growth is undefined there
    if growth[0] > ROUNDOFF_REL * recs[0].hs_norms["psi"]:
        row.max_growth = float(np.max(growth) / growth[0])
    row.max_scalar_density = float(max(r.scalar_density for r in recs))
    if result.outcome == "completed":
        row.linear_dev_T = float(recs[-1].linear_dev["psi"])
    return row


def run_cell(cfg_dict: dict, A: float, eps: float) -> SweepRow:
    try:
        cfg = config_from_dict(cfg_dict)
        data = replace(cfg.data, A=float(A), eps=float(eps))
        cfg = validate(replace(cfg, data=data, diagnostics=replace(cfg.diagnostics, pullback_times=[])))
        return summarize_run(run_simulation(cfg), A, eps)
    except Exception as exc:  # per-cell failures are data, not crashes
        return SweepRow(A, eps, "error", detail=f"{type(exc).__name__}: {exc}")


def run_sweep(cfg: SimConfig, a_list, eps_list, workers: int | None = None) -> list[SweepRow]:
    cells = [(float(a), float(e)) for a in a_list for e in eps_list]
    if not cells:
        return []
    raw = cfg.to_dict()
    workers = workers or min(len(cells), os.cpu_count() or 1)
    if workers == 1:
        return [run_cell(raw, a, e) for a, e in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_cell, raw, a, e) for a, e in cells]
        return [f.result() for f in futures]


def frontier(rows: list[SweepRow], growth_limit: float = GROWTH_LIMIT) -> dict:
    """Per ``A``: the largest ``eps`` that completed with growth within the limit.

    Cells with ``eps = 0`` have undefined growth and count as small-data cells
    whenever they complete.
    """
    out = {}
    for A in sorted({r.A for r in rows}):
        ok = [
            r.eps
            for r in rows
            if r.A == A
            and r.outcome == "completed"
            and (math.isnan(r.max_growth) or r.max_growth <= growth_limit)
        ]
        failed = [r.eps for r in rows if r.A == A and r.eps not in ok]
        out[format_float(A)] = {
            "largest_small_eps": max(ok) if ok else None,
            "smallest_failing_eps": min(failed) if failed else None,
        }
    return {"growth_limit": growth_limit, "by_A": out}


def _cell(v):
    if isinstance(v, str):
        return v
    return "" if math.isnan(v) else format_float(v)


def write_table(rows: list[SweepRow], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            d = asdict(r)
            w.writerow([_cell(d[c]) for c in COLUMNS])
    return path
