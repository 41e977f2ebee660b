"""Sweep (A, eps) and print, per A, the largest eps whose small part stayed bounded."""

import argparse
import json
import sys
from pathlib import Path

from majorana_lab.config import parse_config
from majorana_lab.sweep import GROWTH_LIMIT, frontier, run_sweep, write_table

DEFAULT = Path(__file__).resolve().parents[1] / "configs" / "cubic_small.json"


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--config", default=str(DEFAULT))
    p.add_argument("--a-list", default="0.5,1,2,4")
    p.add_argument("--eps-list", default="0,0.05,0.2,0.8")
    p.add_argument("--growth-limit", type=float, default=GROWTH_LIMIT)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default="sweep_out")
    args = p.parse_args(argv)

    cfg = parse_config(args.config)
    a_list = [float(v) for v in args.a_list.split(",")]
    eps_list = [float(v) for v in args.eps_list.split(",")]
    rows = run_sweep(cfg, a_list, eps_list, workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_table(rows, out / "sweep.csv")
    front = frontier(rows, args.growth_limit)
    (out / "frontier.json").write_text(json.dumps(front, indent=2) + "\n")
    for r in rows:
        print(f"A={r.A:<5g} eps={r.eps:<5g} {r.outcome:9s} growth={r.max_growth:.3f} drift={r.max_defect_drift:.2e}")
    print(json.dumps(front["by_A"], indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
