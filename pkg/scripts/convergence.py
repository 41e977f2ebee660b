"""Observed time-step order of the Strang and Duhamel-oracle integrators on all models."""

import argparse
import csv
import sys

from majorana_lab.config import config_from_dict
from majorana_lab.runner import convergence_study


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--L", type=float, default=16.0)
    p.add_argument("--T", type=float, default=0.4)
    p.add_argument("--dts", default="0.04,0.02,0.01")
    p.add_argument("--width", type=float, default=1.3)
    p.add_argument("--dealias", action="store_true", help="project every step (adds an O(dt) truncation term)")
    p.add_argument("--models", default="cubic,pair,dkg")
    p.add_argument("--csv", help="write per-dt errors here")
    args = p.parse_args(argv)

    dts = [float(d) for d in args.dts.split(",")]
    rows = []
    for model in args.models.split(","):
        cfg = config_from_dict(
            {
                "model": model,
                "grid": {"n": args.n, "L": args.L},
                "dt": min(dts),
                "T": args.T,
                "dealias": args.dealias,
                "data": {"A": 2.0, "eps": 2.0, "seed": 1, "widths": [args.width]},
            }
        )
        out = convergence_study(cfg, dts, ["strang", "reference"])
        for name, res in out.items():
            print(f"{model:6s} {name:9s} slope={res.summary():>6s} errors=" + " ".join(f"{e:.3e}" for e in res.errors))
            rows += [(model, name, dt, e) for dt, e in zip(res.dts, res.errors)]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["model", "integrator", "dt", "rel_error"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
