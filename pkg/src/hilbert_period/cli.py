"""Command-line front end.

    hilbert-period walls --x 0.5 --y 0.5
    hilbert-period chambers --x 0.5 --y 0.5 --svg r.svg
    hilbert-period periods --x 0.5 --y 0.5 --method both
    hilbert-period monodromy --x 0.5 --y 0.5 --j 3
    hilbert-period lattice-check
    hilbert-period verify-maps --samples 100 --seed 0
    hilbert-period scan --grid 0.3,0.9,7,0.2,2.0,10

Exit codes: 0 ok, 2 parameter outside U0, 3 convergence failure,
4 argument error, 5 a verification failed.

JSON and CSV output is byte-deterministic: floats are written with a
fixed 16-digit mantissa, keys in a fixed order, scan rows in grid order.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import algebra, braid, homlat
from . import periodmap as P
from . import walls as W
from .errors import (BranchJump, ComponentAmbiguous, DegeneratePeriods, DomainError, HilbertPeriodError,
                     NoConvergence, NotIntegral, NotInU0, OnWall, StepTooCoarse, TooClose)
from .quad import QuadSpec

SCHEMA = "hilbert-period/1"
THREADS_ENV = "HILBERT_PERIOD_THREADS"

EXIT_OK, EXIT_NOT_U0, EXIT_CONVERGENCE, EXIT_ARGS, EXIT_VERIFY = 0, 2, 3, 4, 5

DUAL_TOL = 1e-6
MAP_TOL = {"T": 1e-9, "T->S": 1e-9, "iota": 1e-9, "iota^2": 1e-12, "T->K": 1e-9, "K(iota)": 1e-10}

CSV_COLUMNS = (
    ["x", "y", "in_u0"] + [f"s{k}" for k in range(1, 6)]
    + [f"xi{k}_{part}" for k in range(1, 5) for part in ("re", "im")]
    + ["quadric_residual", "z1_re", "z1_im", "z2_re", "z2_im", "method", "err_est"]
)


@dataclass
class RunConfig:
    rel_tol: float = QuadSpec.rel_tol
    abs_tol: float = QuadSpec.abs_tol
    max_level: int = QuadSpec.max_level
    max_subdiv: int = QuadSpec.max_subdiv
    min_level: int = QuadSpec.min_level
    format: str = "json"
    output: str | None = None
    workers: int = 1
    x_range: tuple[float, float] = (0.3, 0.9)
    y_range: tuple[float, float] = (0.2, 2.0)
    counts: tuple[int, int] = (7, 10)
    seed: int = 0

    def __post_init__(self):
        self.x_range = tuple(float(v) for v in self.x_range)
        self.y_range = tuple(float(v) for v in self.y_range)
        self.counts = tuple(int(v) for v in self.counts)
        if self.format not in ("json", "csv", "svg"):
            raise ValueError(f"format must be json, csv or svg, got {self.format!r}")
        if len(self.counts) != 2 or min(self.counts) < 1:
            raise ValueError("grid counts must be two integers >= 1")
        if len(self.x_range) != 2 or len(self.y_range) != 2:
            raise ValueError("ranges need two values")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        self.spec()

    def spec(self) -> QuadSpec:
        return QuadSpec(self.rel_tol, self.abs_tol, self.max_level, self.max_subdiv, self.min_level)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        raw = json.loads(text)
        known = {f.name for f in fields(cls)}
        extra = set(raw) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**raw)

    def grid(self) -> list[tuple[float, float]]:
        """Row-major grid: x varies slowest."""
        xs = np.linspace(*self.x_range, self.counts[0])
        ys = np.linspace(*self.y_range, self.counts[1])
        return [(float(x), float(y)) for x in xs for y in ys]


# -- deterministic emitters ------------------------------------------------------


def fnum(v: float) -> str:
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return format(v + 0.0, ".15e")


def to_json(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        return fnum(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, complex):
        return to_json([obj.real, obj.imag], indent)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, complex)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _doc(command: str, **body) -> dict:
    return {"schema": SCHEMA, "command": command, **body}


# -- subcommands -----------------------------------------------------------------


def _point(args) -> W.ModuliPoint:
    return W.ModuliPoint(args.x, args.y)


def cmd_walls(args, cfg: RunConfig):
    m = _point(args)
    try:
        ws = W.walls(m)
    except NotInU0 as e:
        return _doc("walls", x=m.x, y=m.y_param, in_u0=False, reason=str(e)), EXIT_NOT_U0, str(e)
    return _doc("walls", x=m.x, y=m.y_param, in_u0=True, walls=list(ws.s), min_gap=ws.min_gap), EXIT_OK, None


def _chamber_polylines(m: W.ModuliPoint, n: int = 64) -> dict:
    out = {}
    for ch in W.chambers(m):
        # cosine spacing resolves the square-root behaviour at the walls
        t = 0.5 - 0.5 * np.cos(np.linspace(0.0, math.pi, n))
        ys = ch.y_lo + (ch.y_hi - ch.y_lo) * t
        lo, hi = zip(*(ch.u_bounds(float(y)) for y in ys))
        out[ch.label] = {"y": ys.tolist(), "u_lo": list(lo), "u_hi": list(hi)}
    return out


def cmd_chambers(args, cfg: RunConfig):
    m = _point(args)
    ws = W.walls(m)
    polys = _chamber_polylines(m)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(chamber_svg(m, ws, polys, args.view))
    return _doc("chambers", x=m.x, y=m.y_param, walls=list(ws.s), chambers=polys), EXIT_OK, None


_FILL = {"R1": "#e41a1c", "R2": "#377eb8", "R3": "#4daf4a", "R4": "#984ea3"}


def chamber_svg(m: W.ModuliPoint, ws: W.WallSet, polys: dict, view: str = "full") -> str:
    """u-y picture: the parabola u = P(y), the curves u = +-sqrt(2 y^5),
    the walls, and R1..R4 shaded."""
    s = ws.s
    y0, y1 = {"full": (0.0, 1.1 * s[4]), "low": (0.0, 1.05 * s[2]), "high": (0.95 * s[2], 1.02 * s[4])}[view]
    ys = np.linspace(y0, y1, 400)
    a, _, p = W._branch_tuple(ys, m)
    umax = float(max(np.max(np.abs(a)), np.max(np.abs(p))))
    w, h, mg = 640.0, 480.0, 40.0

    def px(y, u):
        return mg + (y - y0) / (y1 - y0) * (w - 2 * mg), h / 2 - u / umax * (h / 2 - mg)

    def path(yv, uv):
        return " ".join(f"{x:.3f},{v:.3f}" for x, v in (px(yy, uu) for yy, uu in zip(yv, uv)))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" viewBox="0 0 {w:.0f} {h:.0f}">',
           '<rect width="100%" height="100%" fill="white"/>']
    for lab, c in polys.items():
        yv, lo, hi = (np.array(c[k]) for k in ("y", "u_lo", "u_hi"))
        keep = (yv >= y0) & (yv <= y1)
        if keep.sum() < 2:
            continue
        ring = path(yv[keep], lo[keep]) + " " + path(yv[keep][::-1], hi[keep][::-1])
        out.append(f'<polygon points="{ring}" fill="{_FILL[lab]}" fill-opacity="0.35" stroke="none"/>')
    out.append(f'<polyline points="{path(ys, p)}" fill="none" stroke="black" stroke-width="1.5"/>')
    out.append(f'<polyline points="{path(ys, a)}" fill="none" stroke="gray" stroke-width="1.5"/>')
    out.append(f'<polyline points="{path(ys, -a)}" fill="none" stroke="gray" stroke-width="1.5"/>')
    for k, sk in enumerate(s, start=1):
        if y0 <= sk <= y1:
            x, _ = px(sk, 0.0)
            out.append(f'<line x1="{x:.3f}" y1="{mg:.0f}" x2="{x:.3f}" y2="{h - mg:.0f}" stroke="#999" stroke-dasharray="4 3"/>')
            out.append(f'<text x="{x + 2:.3f}" y="{h - mg + 14:.0f}" font-size="11">s{k}</text>')
    for i, lab in enumerate(polys):
        out.append(f'<rect x="{w - 90:.0f}" y="{12 + 16 * i}" width="10" height="10" fill="{_FILL[lab]}" fill-opacity="0.5"/>')
        out.append(f'<text x="{w - 75:.0f}" y="{21 + 16 * i}" font-size="11">{lab}</text>')
    out.append(f'<text x="{mg:.0f}" y="20" font-size="12">X = {m.x:g}, Y = {m.y_param:g}: u = P(y) (black), u = &#177;sqrt(2y^5) (gray)</text>')
    out.append("</svg>\n")
    return "\n".join(out)


def _period_block(pv: P.PeriodVector) -> dict:
    blk = {"xi": list(pv.xi), "err_est": pv.err_est, "quadric_residual": P.quadric_residual(pv),
           "positivity": P.positivity(pv)}
    try:
        hp = P.to_hilbert(pv)
        blk.update(z1=hp.z1, z2=hp.z2, conjugated=P.normalize_component(pv).conjugated)
    except (DegeneratePeriods, ComponentAmbiguous) as e:
        blk.update(z1=None, z2=None, hilbert_error=str(e))
    return blk


def compute_periods(m: W.ModuliPoint, method: str, spec: QuadSpec, workers: int = 1) -> P.PeriodVector:
    fn = P.periods_chambers if method == "chamber" else P.periods_fiberwise
    return fn(m, spec, workers)


def cmd_periods(args, cfg: RunConfig):
    m = _point(args)
    W.walls(m)
    methods = ["chamber", "fiberwise"] if args.method == "both" else [args.method]
    pvs = {k: compute_periods(m, k, cfg.spec(), cfg.workers) for k in methods}
    body = {"x": m.x, "y": m.y_param, "method": args.method}
    body.update({k: _period_block(v) for k, v in pvs.items()})
    code = EXIT_OK
    msg = None
    if args.method == "both":
        a, b = pvs["chamber"].as_array(), pvs["fiberwise"].as_array()
        dev = P.relative_deviation(pvs["chamber"], pvs["fiberwise"])
        comp = (np.abs(a - b) / np.linalg.norm(a)).tolist()
        ok = dev <= DUAL_TOL
        body.update(relative_deviation=dev, componentwise_deviation=comp, tolerance=DUAL_TOL,
                    status="PASS" if ok else "FAIL")
        if not ok:
            code, msg = EXIT_VERIFY, f"pathways disagree: relative deviation {dev:.3e}"
    return _doc("periods", **body), code, msg


def cmd_monodromy(args, cfg: RunConfig):
    m = _point(args)
    ws = W.walls(m)
    js = range(6) if args.j is None else [args.j]
    table = homlat.monodromy_table()
    rows = []
    ok = True
    for j in js:
        got, res = braid.monodromy_numeric(m, j, args.steps)
        want = table[j]
        match = got == want
        ok &= match
        rows.append({"j": j, "matrix": [list(r) for r in got.rows()], "expected": [list(r) for r in want.rows()],
                     "residual": res, "status": "PASS" if match else "FAIL"})
    body = _doc("monodromy", x=m.x, y=m.y_param, walls=list(ws.s), loops=rows)
    return body, (EXIT_OK if ok else EXIT_VERIFY), (None if ok else "numeric monodromy disagrees with the table")


def cmd_lattice_check(args, cfg: RunConfig):
    checks = homlat.run_all_checks()
    ok = all(c.ok for c in checks)
    rows = [{"name": c.name, "status": "PASS" if c.ok else "FAIL", "detail": c.detail} for c in checks]
    return _doc("lattice-check", checks=rows), (EXIT_OK if ok else EXIT_VERIFY), (None if ok else "exact check failed")


def cmd_verify_maps(args, cfg: RunConfig):
    seed = cfg.seed if args.seed is None else args.seed
    worst = algebra.battery(args.samples, seed)
    rows = {k: {"worst": v, "tolerance": MAP_TOL[k], "status": "PASS" if v <= MAP_TOL[k] else "FAIL"}
            for k, v in worst.items()}
    ok = all(r["status"] == "PASS" for r in rows.values())
    body = _doc("verify-maps", samples=args.samples, seed=seed, checks=rows)
    return body, (EXIT_OK if ok else EXIT_VERIFY), (None if ok else "map residual above tolerance")


def scan_row(task) -> list[str]:
    """One CSV row; every failure mode is encoded in the row itself."""
    x, y, method, spec = task
    row = {c: "" for c in CSV_COLUMNS}
    row.update(x=fnum(x), y=fnum(y), in_u0="0", method=method)
    try:
        m = W.ModuliPoint(x, y)
        ws = W.walls(m)
    except (NotInU0, DomainError):
        return [row[c] for c in CSV_COLUMNS]
    row["in_u0"] = "1"
    row.update({f"s{k}": fnum(v) for k, v in enumerate(ws.s, start=1)})
    try:
        pv = compute_periods(m, method, spec)
    except HilbertPeriodError as e:
        row["method"] = f"{method}:{type(e).__name__}"
        return [row[c] for c in CSV_COLUMNS]
    for k, v in enumerate(pv.xi, start=1):
        row[f"xi{k}_re"], row[f"xi{k}_im"] = fnum(v.real), fnum(v.imag)
    row["quadric_residual"] = fnum(P.quadric_residual(pv))
    row["err_est"] = fnum(pv.err_est)
    try:
        hp = P.to_hilbert(pv)
        row.update(z1_re=fnum(hp.z1.real), z1_im=fnum(hp.z1.imag), z2_re=fnum(hp.z2.real), z2_im=fnum(hp.z2.imag))
    except (DegeneratePeriods, ComponentAmbiguous):
        pass
    return [row[c] for c in CSV_COLUMNS]


def run_scan(cfg: RunConfig, method: str = "chamber") -> str:
    tasks = [(x, y, method, cfg.spec()) for x, y in cfg.grid()]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            rows = list(ex.map(scan_row, tasks, chunksize=max(1, len(tasks) // (4 * cfg.workers))))
    else:
        rows = [scan_row(t) for t in tasks]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_COLUMNS)
    wr.writerows(rows)
    return buf.getvalue()


def cmd_scan(args, cfg: RunConfig):
    if args.grid:
        x0, x1, nx, y0, y1, ny = args.grid
        cfg.x_range, cfg.y_range, cfg.counts = (x0, x1), (y0, y1), (int(nx), int(ny))
        cfg.__post_init__()
    return run_scan(cfg, args.method), EXIT_OK, None


# -- argument parsing ------------------------------------------------------------


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def _grid(text: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("grid is X0,X1,NX,Y0,Y1,NY")
    vals = tuple(float(p) for p in parts)
    if vals[2] != int(vals[2]) or vals[5] != int(vals[5]):
        raise argparse.ArgumentTypeError("grid counts must be integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    # accepted both before and after the subcommand
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--output", "-o", help="write the result here instead of stdout")
    common.add_argument("--workers", type=int, help=f"parallelism (overridden by ${THREADS_ENV})")
    ap = _Parser(prog="hilbert-period", description="Periods of K(X, Y) and the map to H x H.", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    def with_point(p):
        p.add_argument("--x", type=float, required=True)
        p.add_argument("--y", type=float, required=True)
        return p

    with_point(sub.add_parser("walls", help="wall roots and the U0 verdict"))
    p = with_point(sub.add_parser("chambers", help="chamber boundary polylines, optionally as SVG"))
    p.add_argument("--svg", help="also write an SVG figure to this path")
    p.add_argument("--view", choices=("full", "low", "high"), default="full")
    p = with_point(sub.add_parser("periods", help="period vector, quadric residual, (z1, z2)"))
    p.add_argument("--method", choices=("chamber", "fiberwise", "both"), default="chamber")
    p = with_point(sub.add_parser("monodromy", help="numeric monodromy matrices against the table"))
    p.add_argument("--j", type=int, choices=range(6))
    p.add_argument("--steps", type=int, default=256)
    sub.add_parser("lattice-check", help="all exact integer verifications")
    p = sub.add_parser("verify-maps", help="residual battery for the birational maps")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int)
    p = sub.add_parser("scan", help="CSV of periods over a grid, in grid order")
    p.add_argument("--grid", type=_grid, help="X0,X1,NX,Y0,Y1,NY")
    p.add_argument("--method", choices=("chamber", "fiberwise"), default="chamber")
    return ap


COMMANDS = {
    "walls": cmd_walls,
    "chambers": cmd_chambers,
    "periods": cmd_periods,
    "monodromy": cmd_monodromy,
    "lattice-check": cmd_lattice_check,
    "verify-maps": cmd_verify_maps,
    "scan": cmd_scan,
}


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = RunConfig.from_json(fh.read())
    if getattr(args, "output", None):
        cfg.output = args.output
    if getattr(args, "workers", None) is not None:
        cfg.workers = args.workers
    env = os.environ.get(THREADS_ENV)
    if env:
        cfg.workers = int(env)
    if args.command == "scan":
        cfg.format = "csv"
    cfg.__post_init__()
    return cfg


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
    except _ArgError as e:
        print(f"hilbert-period: error: {e}", file=stderr)
        return EXIT_ARGS
    except (ValueError, OSError) as e:
        print(f"hilbert-period: bad configuration: {e}", file=stderr)
        return EXIT_ARGS
    try:
        result, code, msg = COMMANDS[args.command](args, cfg)
    except (NotInU0, OnWall) as e:
        print(f"hilbert-period: {e}", file=stderr)
        return EXIT_NOT_U0
    except (NoConvergence, BranchJump, StepTooCoarse, TooClose, NotIntegral) as e:
        print(f"hilbert-period: convergence failure: {e}", file=stderr)
        return EXIT_CONVERGENCE
    except DomainError as e:
        print(f"hilbert-period: {e}", file=stderr)
        return EXIT_ARGS
    text = result if isinstance(result, str) else to_json(result) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if msg:
        print(f"hilbert-period: {msg}", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
