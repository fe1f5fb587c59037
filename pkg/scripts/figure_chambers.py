"""Write the three chamber views (full, low, high) as SVG files.

    python3 scripts/figure_chambers.py --x 0.5 --y 0.5 --prefix chambers
"""
import argparse

from hilbert_period import walls as W
from hilbert_period.cli import _chamber_polylines, chamber_svg


def main(x: float, y: float, prefix: str) -> None:
    m = W.ModuliPoint(x, y)
    ws = W.walls(m)
    polys = _chamber_polylines(m, n=200)
    for view in ("full", "low", "high"):
        path = f"{prefix}_{view}.svg"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(chamber_svg(m, ws, polys, view))
        print("wrote", path)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--x", type=float, default=0.5)
    ap.add_argument("--y", type=float, default=0.5)
    ap.add_argument("--prefix", default="chambers")
    a = ap.parse_args()
    main(a.x, a.y, a.prefix)
