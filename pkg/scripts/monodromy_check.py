"""Numeric monodromy of all six loops at several points of U0, compared
with the exact table, with timings and pre-rounding residuals.

    python3 scripts/monodromy_check.py --points 0.5,0.5 0.7,1.1 0.9,2.0
"""
import argparse
import time

from hilbert_period import braid, homlat
from hilbert_period import walls as W


def main(points: list[tuple[float, float]]) -> int:
    failures = 0
    for x, y in points:
        m = W.ModuliPoint(x, y)
        t0 = time.perf_counter()
        for j in range(6):
            got, res = braid.monodromy_numeric(m, j)
            ok = got == homlat.MONODROMY[j]
            failures += not ok
            print(f"({x:g}, {y:g}) j={j} {got.rows()} residual {res:.1e} {'ok' if ok else 'MISMATCH'}")
        print(f"  {time.perf_counter() - t0:.1f} s")
    return failures


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--points", nargs="+", default=["0.5,0.5", "0.7,1.1", "0.9,2.0"])
    a = ap.parse_args()
    raise SystemExit(main([tuple(float(v) for v in p.split(",")) for p in a.points]))
