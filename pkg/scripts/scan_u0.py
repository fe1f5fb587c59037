"""Scan a grid of (X, Y), report which points lie in U0 and the
dual-pathway deviation of the period vector at each of them.

    python3 scripts/scan_u0.py --nx 8 --ny 8 --out scan.csv
"""
import argparse
import csv
import time
from dataclasses import dataclass

import numpy as np

from hilbert_period import periodmap as P
from hilbert_period import walls as W


@dataclass
class ScanConfig:
    x0: float = 0.2
    x1: float = 1.0
    y0: float = 0.1
    y1: float = 3.5
    nx: int = 8
    ny: int = 8
    out: str = "scan_u0.csv"


def main(cfg: ScanConfig) -> None:
    rows = []
    for x in np.linspace(cfg.x0, cfg.x1, cfg.nx):
        for y in np.linspace(cfg.y0, cfg.y1, cfg.ny):
            m = W.ModuliPoint(float(x), float(y))
            if not W.in_U0(m):
                rows.append((x, y, 0, "", "", ""))
                continue
            t0 = time.perf_counter()
            a, b = P.periods_chambers(m), P.periods_fiberwise(m)
            rows.append((x, y, 1, P.relative_deviation(a, b), P.quadric_residual(a), time.perf_counter() - t0))
    with open(cfg.out, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x", "y", "in_u0", "dual_deviation", "quadric_residual", "seconds"])
        wr.writerows(rows)
    inside = [r for r in rows if r[2]]
    print(f"{len(inside)} of {len(rows)} grid points in U0")
    if inside:
        print(f"max dual deviation {max(r[3] for r in inside):.2e}, max quadric residual {max(r[4] for r in inside):.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f, v in ScanConfig.__dataclass_fields__.items():
        ap.add_argument(f"--{f}", type=type(v.default), default=v.default)
    main(ScanConfig(**vars(ap.parse_args())))
