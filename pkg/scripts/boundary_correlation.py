"""Compare the exact boundary of the 5-wall region with Y * Klein = 0.

Walks rays out of a few interior points, locates the exit by bisection
on the exact wall count and prints |Y Klein| / scale there, then the
same ratio on an interior grid.

    python3 scripts/boundary_correlation.py --rays 16
"""
import argparse
import math

import numpy as np

from hilbert_period import invariants as I
from hilbert_period import walls as W


def main(rays: int) -> None:
    seeds = [W.ModuliPoint(0.5, 0.5), W.ModuliPoint(0.7, 1.5), W.ModuliPoint(0.9, 3.0)]
    for m in seeds:
        for a in np.linspace(0, 2 * math.pi, rays, endpoint=False):
            b = I.locate_boundary(m, float(a))
            r = abs(I.branch_divisor_value(b)) / I.divisor_scale(b)
            print(f"from ({m.x:g}, {m.y_param:g}) angle {a:5.2f}: boundary ({b.x:.6f}, {b.y_param:.6f}) ratio {r:.1e}")
    grid = [W.ModuliPoint(x, y) for x in np.linspace(0.1, 1.0, 19) for y in np.linspace(0.05, 4.0, 40)]
    vals = [abs(I.branch_divisor_value(m)) / I.divisor_scale(m) for m in grid if W.in_U0(m)]
    print(f"interior: {len(vals)} points, min ratio {min(vals):.3e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--rays", type=int, default=8)
    main(ap.parse_args().rays)
