"""Monodromy of the fibre periods by continuation along loops in the y-plane.

Along a path the three branch points alpha(y), beta(y), p(y) are explicit,
so the period lattice at each step is known in closed form (efiber.
lattice_basis).  A tracked period is continued by taking, at the next
step, the lattice vector closest to its current value; a step is accepted
only when the previous value has near-integer coordinates in the new
basis, otherwise it is bisected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import efiber as E
from . import walls as W
from .errors import DomainError, NotIntegral, StepTooCoarse, TooClose
from .homlat import IntMat2

ALIGN_TOL = 0.05
JUMP_TOL = 0.2
MAX_DEPTH = 24
STEP_FRAC = 0.5
MIN_GAP_FLOOR = 1e-8


@dataclass(frozen=True)
class Loop:
    """Closed polyline in the y-plane based at ``base``."""

    points: np.ndarray
    target: int | None
    base: complex

    def reversed(self) -> "Loop":
        return Loop(self.points[::-1].copy(), self.target, self.base)

    def then(self, other: "Loop") -> "Loop":
        """This loop followed by ``other`` (same base point)."""
        if self.base != other.base:
            raise DomainError("loops must share the base point")
        return Loop(np.concatenate([self.points, other.points[1:]]), None, self.base)

    def winding(self, z: complex) -> int:
        d = self.points - z
        ang = np.angle(d[1:] / d[:-1])
        return int(round(float(ang.sum()) / (2 * math.pi)))


def _lin(z0: complex, z1: complex, n: int) -> list[complex]:
    return [z0 + (z1 - z0) * k / n for k in range(1, n + 1)]


def loop_for(j: int, ws: W.WallSet, steps: int = 256, base: float | None = None) -> Loop:
    """Loop r_j: a corridor at height +-r/2 (above for j <= 2, below for
    j >= 3, so the other cuts are never met), one positive circle of radius
    r = min_gap / 3 around the target, and back along the corridor."""
    if not 0 <= j <= 5:
        raise DomainError(f"wall index must be 0..5, got {j}")
    if ws.min_gap < MIN_GAP_FLOOR * ws.s[-1]:
        raise TooClose(f"walls too close (min gap {ws.min_gap:.3e})")
    pts = ws.points
    b = 0.5 * (pts[2] + pts[3]) if base is None else float(base)
    t = pts[j]
    r = ws.min_gap / 3
    sgn = 1.0 if j <= 2 else -1.0
    side = 1.0 if t < b else -1.0
    h = 0.5 * r * sgn
    entry = t + r * np.exp(1j * np.angle(side + 0.5j * sgn))
    leg = max(steps // 4, 4)
    out = [complex(b)] + _lin(b, b + 1j * h, leg) + _lin(b + 1j * h, entry, leg)
    th0 = np.angle(entry - t)
    circ = [t + r * np.exp(1j * (th0 + 2 * math.pi * k / steps)) for k in range(1, steps + 1)]
    path = out + circ + out[::-1][1:]
    loop = Loop(np.array(path, dtype=complex), j, complex(b))
    _verify_loop(loop, ws, j)
    return loop


def _verify_loop(loop: Loop, ws: W.WallSet, j: int) -> None:
    pts = ws.points
    for k, w in enumerate(pts):
        want = 1 if k == j else 0
        if loop.winding(w) != want:
            raise DomainError(f"loop for s{j} winds {loop.winding(w)} times around point {k}")
    if cuts_met(loop, ws) - {j}:
        raise DomainError(f"loop for s{j} meets cuts {sorted(cuts_met(loop, ws) - {j})}")


def cuts_met(loop: Loop, ws: W.WallSet) -> set[int]:
    """Indices of cut lines (down for 0..2, up for 3..5) the loop crosses."""
    z = loop.points
    met = set()
    for k, w in enumerate(ws.points):
        x0, x1 = z[:-1].real - w, z[1:].real - w
        hit = (x0 * x1 < 0) | ((x0 == 0) ^ (x1 == 0))
        if not hit.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            tt = np.where(x1 != x0, x0 / (x0 - x1), 0.0)
        yy = z[:-1].imag + tt * (z[1:].imag - z[:-1].imag)
        on = yy[hit] < 0 if k <= 2 else yy[hit] > 0
        if on.any():
            met.add(k)
    return met


def _coords(v: np.ndarray, w1: complex, w2: complex) -> np.ndarray:
    a = np.array([[w1.real, w2.real], [w1.imag, w2.imag]])
    return np.linalg.solve(a, np.stack([v.real, v.imag]))


def _align(prev: np.ndarray, w1: complex, w2: complex):
    co = _coords(prev, w1, w2)
    r = np.round(co)
    new = r[0] * w1 + r[1] * w2
    dev = float(np.max(np.abs(co - r)))
    jump = float(np.max(np.abs(new - prev) / np.abs(prev)))
    return new, dev, jump


def track(m: W.ModuliPoint, path: np.ndarray, start: np.ndarray, singular=None,
          max_depth: int = MAX_DEPTH):
    """Continue the lattice vectors ``start`` along ``path``.

    A step is accepted when the previous values have near-integer
    coordinates in the new basis, the values move by less than JUMP_TOL,
    and the step is shorter than STEP_FRAC times the distance to the
    nearest singular fibre (so no wall can be skipped inside one step).
    Returns (values at the end, number of lattice evaluations)."""
    path = np.asarray(path, dtype=complex)
    sing = np.array(W.walls(m).points if singular is None else singular, dtype=complex)
    lat1, lat2 = E.lattice_basis(path, m)
    dist = np.min(np.abs(path[:, None] - sing[None, :]), axis=1)
    cur = np.asarray(start, dtype=complex)
    # the start values must be lattice vectors at the first point
    cur, dev, _ = _align(cur, complex(lat1[0]), complex(lat2[0]))
    if dev > 1e-6:
        raise DomainError("start values are not periods at the first path point")
    evals = len(path)
    for i in range(1, len(path)):
        short = abs(path[i] - path[i - 1]) <= STEP_FRAC * min(dist[i], dist[i - 1])
        if short:
            new, dev, jump = _align(cur, complex(lat1[i]), complex(lat2[i]))
            if dev <= ALIGN_TOL and jump <= JUMP_TOL:
                cur = new
                continue
        cur, n = _refine(m, path[i - 1], path[i], cur, sing, max_depth)
        evals += n
    return cur, evals


def _refine(m, z0: complex, z1: complex, cur: np.ndarray, sing: np.ndarray, depth: int):
    """Bisect [z0, z1] until every sub-step is accepted."""
    evals = 0
    todo = [(z1, 0)]
    here = z0
    d_here = float(np.min(np.abs(here - sing)))
    while todo:
        tgt, d = todo[-1]
        d_tgt = float(np.min(np.abs(tgt - sing)))
        ok = abs(tgt - here) <= STEP_FRAC * min(d_here, d_tgt)
        if ok:
            w1, w2 = E.lattice_basis(tgt, m)
            evals += 1
            new, dev, jump = _align(cur, complex(w1), complex(w2))
            ok = dev <= ALIGN_TOL and jump <= JUMP_TOL
        if ok:
            cur, here, d_here = new, tgt, d_tgt
            todo.pop()
            continue
        if d >= depth:
            raise StepTooCoarse(f"period continuation failed near y = {tgt:.6g}")
        todo.append((0.5 * (here + tgt), d + 1))
    return cur, evals


def continue_periods(m: W.ModuliPoint, loop: Loop, steps: int | None = None,
                     start: E.FiberPeriods | None = None) -> tuple[E.FiberPeriods, E.FiberPeriods]:
    """Periods of (gamma1, gamma2) at the base point and after the loop.

    ``steps`` optionally resamples every polyline edge into that many
    pieces; the loops from loop_for are already finely sampled."""
    if start is None:
        start = E.periods_at_base(m, b=float(loop.base.real))
    path = loop.points
    if steps:
        seg = [path[:1]] + [np.linspace(a, b, steps + 1)[1:] for a, b in zip(path[:-1], path[1:])]
        path = np.concatenate(seg)
    end, _ = track(m, path, np.array([start.pi1, start.pi2]))
    return start, E.FiberPeriods(complex(end[0]), complex(end[1]), loop.base)


def recover_matrix(start: E.FiberPeriods, end: E.FiberPeriods, tol: float = 1e-6) -> IntMat2:
    """Integer M with (end.pi1, end.pi2)^t = M (start.pi1, start.pi2)^t."""
    if abs((start.pi2 / start.pi1).imag) <= 1e-12:
        raise DomainError("start periods are R-linearly dependent")
    co = _coords(np.array([end.pi1, end.pi2]), start.pi1, start.pi2).T
    r = np.round(co)
    res = float(np.max(np.abs(co - r)))
    scale = max(abs(start.pi1), abs(start.pi2))
    if res > tol * scale / min(abs(start.pi1), abs(start.pi2)) or not np.all(np.isfinite(co)):
        raise NotIntegral(f"monodromy coordinates are {res:.3e} away from integers")
    out = IntMat2.of(r.astype(int).tolist())
    if out.det != 1:
        raise NotIntegral(f"recovered matrix has det {out.det}")
    return out


def recover_with_residual(start: E.FiberPeriods, end: E.FiberPeriods) -> tuple[IntMat2, float]:
    co = _coords(np.array([end.pi1, end.pi2]), start.pi1, start.pi2).T
    return recover_matrix(start, end), float(np.max(np.abs(co - np.round(co))))


def monodromy_numeric(m: W.ModuliPoint, j: int, steps: int = 256) -> tuple[IntMat2, float]:
    ws = W.walls(m)
    s, e = continue_periods(m, loop_for(j, ws, steps))
    return recover_with_residual(s, e)
