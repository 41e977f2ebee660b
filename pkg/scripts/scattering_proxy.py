"""Pull-back increments ||w(t+1) - w(t)||_{H^1} for a small-data pair run.

A finite-box proxy only: decreasing increments are consistent with, not
evidence of, scattering.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from majorana_lab.config import parse_config
from majorana_lab.diagnostics import cauchy_table, pullback
from majorana_lab.runner import run_simulation

DEFAULT = Path(__file__).resolve().parents[1] / "configs" / "scattering_proxy.json"


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", default=str(DEFAULT))
    args = p.parse_args(argv)

    cfg = parse_config(args.config)
    res = run_simulation(cfg)
    times = sorted(res.snapshots)
    pulled = [pullback(res.snapshots[t], cfg.causality_window()) for t in times]
    table = cauchy_table(pulled, res.final.grid, cfg.diagnostics.s)
    print("interval    " + "  ".join(f"{name:>9s}" for name in table))
    for i in range(len(times) - 1):
        print(f"[{times[i]:g}, {times[i + 1]:g}]".ljust(12) + "  ".join(f"{tab[i, i + 1]:9.3e}" for tab in table.values()))
    h = res.series("hs_phi")
    print(f"sup ||phi(t)||_H1 / ||phi(0)||_H1 = {np.max(h) / h[0]:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
