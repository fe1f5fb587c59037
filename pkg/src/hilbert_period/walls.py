"""Walls, branch functions and chambers of the fibre family E(y).

For a real parameter (X, Y) the fibre over y > 0 is the elliptic curve

    v^2 = (u - alpha(y)) (u - beta(y)) (u - p(y)),
    alpha = y^2 sqrt(2y),  beta = -alpha,  p = 5y^2 - 10Xy + Y.

Two branch values collide exactly at the positive roots of the quintic
D(y) = 2y^5 - p(y)^2; these roots are the walls s1 < ... < s5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BranchPoint, DomainError, NotInU0, OnWall, TableMismatch

GAP_FLOOR = 1e-9
"""Relative separation below which two walls are treated as collided."""

LABELS = ("alpha", "beta", "p")

# Increasing order (w1, w2, w3) of the branch values on each gap
# (s_k, s_{k+1}), with s_0 = 0 and s_6 = infinity.
GAP_ORDER = (
    ("beta", "alpha", "p"),
    ("beta", "p", "alpha"),
    ("p", "beta", "alpha"),
    ("beta", "p", "alpha"),
    ("beta", "alpha", "p"),
    ("beta", "p", "alpha"),
)


@dataclass(frozen=True)
class ModuliPoint:
    """A real parameter pair (X, Y) of the family."""

    x: float
    y_param: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y_param)):
            raise DomainError(f"non-finite parameter ({self.x}, {self.y_param})")
        if self.x == 0 and self.y_param == 0:
            raise DomainError("(X, Y) = (0, 0) is excluded")


@dataclass(frozen=True)
class RealPoly:
    """Real polynomial with coefficients in ascending degree."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(float(v) for v in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "RealPoly":
        if self.degree == 0:
            return RealPoly((0.0,))
        return RealPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def abs_bound(self, t: float) -> float:
        """Sum of |c_k| |t|^k, the natural scale of an evaluation at t."""
        return sum(abs(c) * abs(t) ** k for k, c in enumerate(self.coeffs))

    def cauchy_bound(self) -> float:
        lead = self.coeffs[-1]
        return 1.0 + max(abs(c / lead) for c in self.coeffs[:-1]) if self.degree else 0.0

    def real_roots(self, lo: float | None = None, hi: float | None = None) -> list[float]:
        """Simple real roots in [lo, hi], isolated on the monotone pieces
        between consecutive real critical points."""
        if self.degree <= 0:
            return []
        if lo is None or hi is None:
            r = self.cauchy_bound()
            lo, hi = -r if lo is None else lo, r if hi is None else hi
        if self.degree == 1:
            root = -self.coeffs[0] / self.coeffs[1]
            return [root] if lo <= root <= hi else []
        crit = self.derivative().real_roots(lo, hi)
        knots = [lo] + [c for c in crit if lo < c < hi] + [hi]
        roots: list[float] = []
        for a, b in zip(knots[:-1], knots[1:]):
            fa, fb = self(a), self(b)
            if fa == 0.0:
                if not roots or roots[-1] != a:
                    roots.append(a)
                continue
            if fa * fb < 0:
                roots.append(_polish(self, a, b, fa))
        if self(hi) == 0.0 and (not roots or roots[-1] != hi):
            roots.append(hi)
        return roots


def _polish(poly: RealPoly, a: float, b: float, fa: float) -> float:
    """Bracketed bisection followed by safeguarded Newton steps."""
    dpoly = poly.derivative()
    for _ in range(60):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = poly(m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
        if b - a <= 1e-6 * max(abs(a), abs(b), 1e-300):
            break
    t = 0.5 * (a + b)
    for _ in range(50):
        ft = poly(t)
        if ft == 0.0:
            return t
        if (ft < 0) == (fa < 0):
            a, fa = t, ft
        else:
            b = t
        d = dpoly(t)
        step = ft / d if d != 0 else 0.0
        nt = t - step
        if not (a < nt < b):
            nt = 0.5 * (a + b)
        if nt == t or abs(nt - t) <= 4 * np.finfo(float).eps * abs(t):
            return nt
        t = nt
    return t


@dataclass(frozen=True)
class WallSet:
    s: tuple[float, float, float, float, float]
    min_gap: float

    @property
    def points(self) -> tuple[float, ...]:
        """(0, s1, ..., s5): the finite singular fibres on the real axis."""
        return (0.0,) + self.s

    def gap_index(self, y: float) -> int:
        """k such that s_k < y < s_{k+1} (s_0 = 0, s_6 = inf)."""
        return sum(1 for w in self.s if w < y)


@dataclass(frozen=True)
class BranchTriple:
    alpha: float
    beta: float
    p: float
    y_at: float

    def value(self, label: str) -> float:
        return getattr(self, label)


@dataclass(frozen=True)
class Ordering:
    w1: str
    w2: str
    w3: str
    interval_index: int

    def labels(self) -> tuple[str, str, str]:
        return (self.w1, self.w2, self.w3)


@dataclass(frozen=True)
class Chamber:
    """Region {y_lo <= y <= y_hi, w_i(y) <= u <= w_j(y)}.

    ``u_lo_fn``/``u_hi_fn`` name the ordered branch positions ("w1", "w2",
    "w3"); which of alpha, beta, p they are depends on the gap (GAP_ORDER).
    """

    label: str
    y_lo: float
    y_hi: float
    u_lo_fn: str
    u_hi_fn: str
    walls: WallSet
    m: ModuliPoint

    def panels(self) -> list[tuple[float, float, str, str]]:
        """Split the y-range at interior walls; each panel carries the
        concrete (lower, upper) branch labels valid on it."""
        pts = self.walls.points + (math.inf,)
        cuts = [self.y_lo] + [w for w in self.walls.s if self.y_lo < w < self.y_hi] + [self.y_hi]
        out = []
        for a, b in zip(cuts[:-1], cuts[1:]):
            k = next(i for i in range(6) if pts[i] <= a < pts[i + 1])
            order = GAP_ORDER[k]
            out.append((a, b, order[int(self.u_lo_fn[1]) - 1], order[int(self.u_hi_fn[1]) - 1]))
        return out

    def u_bounds(self, y: float) -> tuple[float, float]:
        if not self.y_lo <= y <= self.y_hi:
            raise DomainError(f"y={y} outside chamber {self.label}")
        if y == 0.0:
            t = BranchTriple(0.0, 0.0, self.m.y_param, 0.0)
            vals = sorted((t.alpha, t.beta, t.p))
        else:
            vals = sorted(_branch_tuple(y, self.m))
        return vals[int(self.u_lo_fn[1]) - 1], vals[int(self.u_hi_fn[1]) - 1]


def wall_quintic(m: ModuliPoint) -> RealPoly:
    """D(y) = 2y^5 - (5y^2 - 10Xy + Y)^2, ascending coefficients."""
    x, yp = m.x, m.y_param
    return RealPoly((-yp * yp, 20 * x * yp, -(100 * x * x + 10 * yp), 100 * x, -25.0, 2.0))


def walls(m: ModuliPoint, tol: float = 1e-12, gap_floor: float = GAP_FLOOR) -> WallSet:
    """The five positive walls of ``m``; raises NotInU0 unless all five
    exist and are pairwise separated (and separated from 0)."""
    d = wall_quintic(m)
    if m.y_param == 0:
        raise NotInU0("wall at y=0 (Y = 0)")
    roots = d.real_roots()
    pos = [r for r in roots if r > 0]
    if len(roots) != 5 or len(pos) != 5:
        raise NotInU0(f"{len(pos)} positive real walls found (need 5)")
    s = tuple(sorted(pos))
    scale = max(abs(c) for c in d.coeffs) * max(1.0, s[-1] ** 5)
    for r in s:
        if abs(d(r)) > tol * scale:
            raise NotInU0(f"wall residual {abs(d(r)):.3e} too large at y={r}")
    gaps = np.diff((0.0,) + s)
    min_gap = float(gaps.min())
    if min_gap <= gap_floor * s[-1]:
        raise NotInU0(f"walls collide (min gap {min_gap:.3e})")
    return WallSet(s, min_gap)  # type: ignore[arg-type]


def in_U0(m: ModuliPoint) -> bool:
    try:
        walls(m)
    except NotInU0:
        return False
    return True


def _branch_tuple(y, m: ModuliPoint):
    a = y * y * np.sqrt(2 * y)
    return a, -a, 5 * y * y - 10 * m.x * y + m.y_param


def branch_values(y: float, m: ModuliPoint) -> BranchTriple:
    if not y > 0:
        raise DomainError(f"branch values need y > 0, got {y}")
    a, b, p = _branch_tuple(float(y), m)
    return BranchTriple(float(a), float(b), float(p), float(y))


def ordering_at(y: float, ws: WallSet, m: ModuliPoint, tol: float = 1e-12) -> Ordering:
    scale = ws.s[-1]
    for j, w in enumerate(ws.s, start=1):
        if abs(y - w) <= tol * scale:
            raise OnWall(f"y={y} is on wall s{j}")
    t = branch_values(y, m)
    labels = tuple(sorted(LABELS, key=t.value))
    k = ws.gap_index(y)
    if labels != GAP_ORDER[k]:
        raise TableMismatch(f"ordering {labels} on gap {k} disagrees with {GAP_ORDER[k]}")
    return Ordering(*labels, interval_index=k)


def chambers(m: ModuliPoint) -> list[Chamber]:
    ws = walls(m)
    s1, s2, s3, s4, s5 = ws.s
    return [
        Chamber("R1", 0.0, s2, "w1", "w2", ws, m),
        Chamber("R2", s1, s4, "w2", "w3", ws, m),
        Chamber("R3", s2, s3, "w1", "w2", ws, m),
        Chamber("R4", s4, s5, "w2", "w3", ws, m),
    ]


# Phase of F on (-inf, w1), (w1, w2), (w2, w3), (w3, inf).
GAP_PHASE = (-1j, -1.0, 1j, 1.0)


def F_real(u, y: float, m: ModuliPoint, tol: float = 1e-14):
    """Boundary value on the real u-line of the branch of
    sqrt((u-alpha)(u-beta)(u-p)) that is single valued on Im u > 0.

    Each factor sqrt(u - w + i0) is sqrt|u - w| when u > w and
    i sqrt|u - w| when u < w, so the phase is i^(number of w above u).
    """
    a, b, p = _branch_tuple(float(y), m)
    u = np.asarray(u, dtype=float)
    scale = max(abs(a), abs(p), 1.0)
    mag = np.ones_like(u)
    n_above = np.zeros(u.shape, dtype=int)
    for w in (a, b, p):
        d = u - w
        if np.any(np.abs(d) <= tol * scale):
            raise BranchPoint(f"u within tolerance of branch value {w}")
        mag = mag * np.sqrt(np.abs(d))
        n_above += d < 0
    out = mag * (1j ** n_above)
    return out[()] if out.ndim == 0 else out


def inverse_F_gap(gap: int, w1, w2, w3, d_lo, d_hi):
    """1/F on the interior of gap 1 = (w1, w2) or gap 2 = (w2, w3), from the
    distances d_lo, d_hi to the gap's two endpoints (cancellation free)."""
    if gap == 1:
        mag = d_lo * d_hi * ((w3 - w2) + d_hi)
    elif gap == 2:
        mag = ((w2 - w1) + d_lo) * d_lo * d_hi
    else:
        raise DomainError(f"gap must be 1 or 2, got {gap}")
    return 1.0 / (GAP_PHASE[gap] * np.sqrt(mag))
