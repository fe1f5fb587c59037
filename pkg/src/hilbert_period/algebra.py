"""The three surface models and the maps between them.

S:  z0^2 = x0^3 - 4 y0^2 (4 y0 - 5A) x0^2 + 20 B y0^3 x0 + C y0^4
T:  z1^2 = x1 (x1^2 + (20 A y1^2 - 20 B y1 + C) x1 + 16 y1^5)
K:  v^2  = (u^2 - 2 y^5) (u - (5 A y^2 - 10 B y + C))

(A : B : C) is a point of the weighted plane P(1 : 3 : 5).  T carries the
involution iota, and K is the quotient T / iota.  All checks are numeric:
residuals are normalised by the largest monomial in the equation.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExceptionalLocus

EXC_FLOOR = 1e-6


@dataclass(frozen=True)
class WeightedPoint135:
    a: complex
    b: complex
    c: complex
    normalized: bool = False

    def __post_init__(self):
        if self.a == 0 and self.b == 0 and self.c == 0:
            raise DomainError("(0, 0, 0) is not a point of P(1:3:5)")

    def scaled(self, lam: complex) -> "WeightedPoint135":
        return WeightedPoint135(lam * self.a, lam ** 3 * self.b, lam ** 5 * self.c)

    def normalize(self) -> "WeightedPoint135":
        """Representative with a = 1 (requires a != 0)."""
        if self.a == 0:
            raise DomainError("cannot normalise a point with a = 0")
        p = self.scaled(1 / self.a)
        return WeightedPoint135(1.0, p.b, p.c, True)


@dataclass(frozen=True)
class SurfacePointS:
    x0: complex
    y0: complex
    z0: complex


@dataclass(frozen=True)
class SurfacePointT:
    x1: complex
    y1: complex
    z1: complex


@dataclass(frozen=True)
class SurfacePointK:
    y: complex
    u: complex
    v: complex


def parabola(w: WeightedPoint135, y):
    return 5 * w.a * y * y - 10 * w.b * y + w.c


def _monomials(model: str, w: WeightedPoint135, pt):
    """(lhs - rhs, list of monomials) of the defining equation."""
    A, B, C = w.a, w.b, w.c
    if model == "S":
        x, y, z = pt.x0, pt.y0, pt.z0
        mons = [z * z, x ** 3, -16 * y ** 3 * x * x, 20 * A * y * y * x * x, 20 * B * y ** 3 * x, C * y ** 4]
        return mons[0] - sum(mons[1:]), mons
    if model == "T":
        x, y, z = pt.x1, pt.y1, pt.z1
        mons = [z * z, x ** 3, 20 * A * y * y * x * x, -20 * B * y * x * x, C * x * x, 16 * y ** 5 * x]
        return mons[0] - sum(mons[1:]), mons
    if model == "K":
        y, u, v = pt.y, pt.u, pt.v
        mons = [v * v, u ** 3, -5 * A * y * y * u * u, 10 * B * y * u * u, -C * u * u,
                -2 * y ** 5 * u, 10 * A * y ** 7, -20 * B * y ** 6, 2 * C * y ** 5]
        return mons[0] - sum(mons[1:]), mons
    raise DomainError(f"unknown model {model!r}")


def residual(model: str, w: WeightedPoint135, pt) -> complex:
    """Left minus right side of the model's defining equation."""
    return complex(_monomials(model, w, pt)[0])


def relative_residual(model: str, w: WeightedPoint135, pt) -> float:
    r, mons = _monomials(model, w, pt)
    scale = max(abs(m) for m in mons)
    return abs(r) / scale if scale else abs(r)


def lift_point_T(w: WeightedPoint135, x1: complex, y1: complex) -> complex:
    """z1 on T over (x1, y1), principal square root."""
    rhs = x1 * (x1 * x1 + (20 * w.a * y1 * y1 - 20 * w.b * y1 + w.c) * x1 + 16 * y1 ** 5)
    return cmath.sqrt(rhs)


def map_T_to_S(pt: SurfacePointT) -> SurfacePointS:
    x1, y1, z1 = pt.x1, pt.y1, pt.z1
    if y1 == 0:
        raise ExceptionalLocus("T -> S is undefined on y1 = 0")
    return SurfacePointS(x1 / (16 * y1), -x1 / (16 * y1 * y1), x1 * z1 / (256 * y1 ** 4))


def iota(pt: SurfacePointT) -> SurfacePointT:
    """(x1, y1, z1) -> (16 y1^5 / x1, y1, -16 y1^5 z1 / x1^2)."""
    x1, y1, z1 = pt.x1, pt.y1, pt.z1
    if x1 == 0:
        raise ExceptionalLocus("iota is undefined on x1 = 0")
    q = 16 * y1 ** 5
    return SurfacePointT(q / x1, y1, -q * z1 / (x1 * x1))


def invariants_T(pt: SurfacePointT) -> tuple[complex, complex]:
    """(u1, v1) = (x1 + 16 y1^5 / x1, (x1^2 - 16 y1^5) / z1), fixed by iota."""
    x1, y1, z1 = pt.x1, pt.y1, pt.z1
    if x1 == 0:
        raise ExceptionalLocus("u1 is undefined on x1 = 0")
    if z1 == 0:
        raise ExceptionalLocus("v1 is undefined on z1 = 0")
    q = 16 * y1 ** 5
    return x1 + q / x1, (x1 * x1 - q) / z1


def map_T_to_K(pt: SurfacePointT, w: WeightedPoint135) -> SurfacePointK:
    """Quotient map: u = -u1, y = 2 y1, v = -i v1 (u - P(y))."""
    u1, v1 = invariants_T(pt)
    y = 2 * pt.y1
    u = -u1
    d = u - parabola(w, y)
    if d == 0:
        raise ExceptionalLocus("image lies on the parabola u = P(y)")
    return SurfacePointK(y, u, -1j * v1 * d)


def rescale_T(w: WeightedPoint135, pt: SurfacePointT, mu: complex):
    """Weighted action of mu on (A, B, C; x1, y1, z1): the equation is
    homogeneous of weight 30 under weights (2, 6, 10; 10, 4, 15)."""
    return (WeightedPoint135(mu ** 2 * w.a, mu ** 6 * w.b, mu ** 10 * w.c),
            SurfacePointT(mu ** 10 * pt.x1, mu ** 4 * pt.y1, mu ** 15 * pt.z1))


def rescale_S(pt: SurfacePointS, mu: complex) -> SurfacePointS:
    """Companion weights (6, 2, 9) on (x0, y0, z0); total weight 18."""
    return SurfacePointS(mu ** 6 * pt.x0, mu ** 2 * pt.y0, mu ** 9 * pt.z0)


def rescale_K(pt: SurfacePointK, mu: complex) -> SurfacePointK:
    """Companion weights (4, 10, 15) on (y, u, v); total weight 30."""
    return SurfacePointK(mu ** 4 * pt.y, mu ** 10 * pt.u, mu ** 15 * pt.v)


def _cbox(rng: np.random.Generator, n: int, r: float) -> np.ndarray:
    return rng.uniform(-r, r, n) + 1j * rng.uniform(-r, r, n)


def random_weighted(rng: np.random.Generator, r: float = 2.0) -> WeightedPoint135:
    a, b, c = _cbox(rng, 3, r)
    return WeightedPoint135(complex(a), complex(b), complex(c))


def random_T_points(w: WeightedPoint135, n: int, rng: np.random.Generator, r: float = 2.0,
                    floor: float = EXC_FLOOR) -> list[SurfacePointT]:
    """n on-surface points of T, kept away from the exceptional loci."""
    out: list[SurfacePointT] = []
    while len(out) < n:
        x1, y1 = (complex(v) for v in _cbox(rng, 2, r))
        z1 = lift_point_T(w, x1, y1)
        pt = SurfacePointT(x1, y1, z1)
        if min(abs(x1), abs(y1), abs(z1)) < floor:
            continue
        if abs(-(x1 + 16 * y1 ** 5 / x1) - parabola(w, 2 * y1)) < floor:
            continue
        out.append(pt)
    return out


def battery(n: int = 100, seed: int = 0) -> dict[str, float]:
    """Worst relative residuals of the three maps on n random points."""
    rng = np.random.default_rng(seed)
    w = random_weighted(rng)
    pts = random_T_points(w, n, rng)
    worst = {"T": 0.0, "T->S": 0.0, "iota": 0.0, "iota^2": 0.0, "T->K": 0.0, "K(iota)": 0.0}
    for p in pts:
        worst["T"] = max(worst["T"], relative_residual("T", w, p))
        worst["T->S"] = max(worst["T->S"], relative_residual("S", w, map_T_to_S(p)))
        q = iota(p)
        worst["iota"] = max(worst["iota"], relative_residual("T", w, q))
        qq = iota(q)
        worst["iota^2"] = max(worst["iota^2"], max(abs(qq.x1 - p.x1) / abs(p.x1), abs(qq.z1 - p.z1) / abs(p.z1)))
        k, kq = map_T_to_K(p, w), map_T_to_K(q, w)
        worst["T->K"] = max(worst["T->K"], relative_residual("K", w, k))
        worst["K(iota)"] = max(worst["K(iota)"], max(abs(k.u - kq.u) / abs(k.u), abs(k.v - kq.v) / abs(k.v)))
    return worst
