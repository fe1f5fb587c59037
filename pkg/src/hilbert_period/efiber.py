"""Elliptic half-periods of the fibres E(y).

On the real line the fibre integrals of du/F split into four gap
integrals between the sorted branch values w1 < w2 < w3.  Their moduli
are complete elliptic integrals, written here with Carlson's R_F:

    int_{w1}^{w2} = 2 R_F(w3-w2, w3-w1, 0)     int_{w2}^{w3} = 2 R_F(w2-w1, w3-w1, 0)
    int_{w3}^{oo} = 2 R_F(0, w3-w1, w3-w2)     int_{-oo}^{w1} = 2 R_F(0, w3-w1, w2-w1)

and their phases follow from the boundary value of F (walls.GAP_PHASE).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import walls as W
from .errors import Degenerate, DomainError, OnWall
from .quad import QuadSpec, integrate_de, integrate_semi_inf

_RF_TOL = 1e-16
_RF_Q = (3 * _RF_TOL) ** (-1.0 / 6.0)


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F(x, y, z) by the duplication theorem.

    Accepts scalars or broadcastable numpy arrays, real or complex.  Real
    nonnegative input stays real.  Principal square roots are used, which
    is the correct branch for arguments off the negative real axis.
    """
    x, y, z = np.broadcast_arrays(*(np.asarray(v) for v in (x, y, z)))
    cplx = any(np.iscomplexobj(v) for v in (x, y, z)) or any(np.any(v < 0) for v in (x, y, z))
    dt = complex if cplx else float
    x, y, z = (np.array(v, dtype=dt) for v in (x, y, z))
    zeros = (x == 0).astype(int) + (y == 0).astype(int) + (z == 0).astype(int)
    if np.any(zeros >= 2):
        raise Degenerate("R_F needs at most one zero argument")
    a0 = (x + y + z) / 3
    q = _RF_Q * np.maximum(np.maximum(np.abs(a0 - x), np.abs(a0 - y)), np.abs(a0 - z))
    a = a0.copy()
    x0, y0 = x.copy(), y.copy()
    f = 1.0
    for _ in range(60):
        done = q * f < np.abs(a)
        if np.all(done):
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = np.where(done, x, (x + lam) / 4)
        y = np.where(done, y, (y + lam) / 4)
        z = np.where(done, z, (z + lam) / 4)
        a = np.where(done, a, (a + lam) / 4)
        # each entry keeps its own power of four
        f = np.where(done, f, f / 4)
    X = (a0 - x0) * f / a
    Y = (a0 - y0) * f / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    out = (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / np.sqrt(a)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class CycleVec:
    """Integer combination n1*gamma1 + n2*gamma2 of fibre 1-cycles."""

    n1: int
    n2: int

    def pairing(self, other: "CycleVec") -> int:
        """Intersection number, normalised by (gamma1 . gamma2) = 1."""
        return self.n1 * other.n2 - self.n2 * other.n1

    def __add__(self, other):
        return CycleVec(self.n1 + other.n1, self.n2 + other.n2)

    def __sub__(self, other):
        return CycleVec(self.n1 - other.n1, self.n2 - other.n2)

    def __neg__(self):
        return CycleVec(-self.n1, -self.n2)

    def __rmul__(self, k: int):
        return CycleVec(k * self.n1, k * self.n2)

    def as_tuple(self) -> tuple[int, int]:
        return (self.n1, self.n2)


GAMMA1 = CycleVec(1, 0)
GAMMA2 = CycleVec(0, 1)


@dataclass(frozen=True)
class FiberPeriods:
    pi1: complex
    pi2: complex
    y_at: complex

    @property
    def tau(self) -> complex:
        return self.pi2 / self.pi1


# Half periods on each gap (s_k, s_{k+1}), k = 0..5, as sums of oriented
# integrals of du/F between branch labels ("inf" = +infinity).
HALF_PERIOD_PATHS = (
    ((("alpha", "p"), ("p", "inf")), (("alpha", "beta"),)),
    ((("p", "beta"),), (("alpha", "p"), ("p", "beta"))),
    ((("beta", "p"),), (("alpha", "beta"),)),
    ((("p", "beta"),), (("alpha", "p"), ("p", "beta"))),
    ((("alpha", "p"), ("p", "inf")), (("p", "inf"),)),
    ((("p", "beta"),), (("alpha", "p"), ("p", "beta"))),
)


def _sorted_roots(y, m: W.ModuliPoint):
    al, be, pp = W._branch_tuple(np.asarray(y, dtype=float), m)
    st = np.sort(np.stack(np.broadcast_arrays(al, be, pp)), axis=0)
    return al, be, pp, st[0], st[1], st[2]


def gap_moduli(w1, w2, w3):
    """|int du/F| over (-inf,w1), (w1,w2), (w2,w3), (w3,inf) for w1<w2<w3."""
    w1, w2, w3 = (np.asarray(v, dtype=float) for v in (w1, w2, w3))
    d21, d31, d32 = w2 - w1, w3 - w1, w3 - w2
    return (
        2 * carlson_rf(0.0, d31, d21),
        2 * carlson_rf(d32, d31, 0.0),
        2 * carlson_rf(d21, d31, 0.0),
        2 * carlson_rf(0.0, d31, d32),
    )


def gap_integrals(y, m: W.ModuliPoint, method: str = "carlson", spec: QuadSpec = QuadSpec(rel_tol=1e-13)):
    """The four phase-carrying integrals of du/F along the real u-line,
    gap by gap.  Their sum vanishes (close the contour in Im u > 0)."""
    if method == "carlson":
        _, _, _, w1, w2, w3 = _sorted_roots(y, m)
        mods = gap_moduli(w1, w2, w3)
        return tuple(mods[k] / W.GAP_PHASE[k] for k in range(4))
    if method == "quad":
        if np.ndim(y):
            raise DomainError("quadrature path takes a scalar y")
        _, _, _, w1, w2, w3 = (float(v) for v in _sorted_roots(y, m))
        return _gap_integrals_quad(w1, w2, w3, spec)
    raise DomainError(f"unknown method {method!r}")


def _gap_integrals_quad(w1, w2, w3, spec):
    d21, d31, d32 = w2 - w1, w3 - w1, w3 - w2
    # every factor of the cubic is rebuilt from exact endpoint distances
    i0 = integrate_semi_inf(lambda x, d: 1 / np.sqrt(d * (d21 + d) * (d31 + d)), w1, spec,
                            endpoint_aware=True, scale=d31).value.real
    i1 = integrate_de(lambda x, dl, dr: 1 / np.sqrt(dl * dr * (d32 + dr)), w1, w2, spec,
                      endpoint_aware=True).value.real
    i2 = integrate_de(lambda x, dl, dr: 1 / np.sqrt((d21 + dl) * dl * dr), w2, w3, spec,
                      endpoint_aware=True).value.real
    i3 = integrate_semi_inf(lambda x, d: 1 / np.sqrt(d * (d32 + d) * (d31 + d)), w3, spec,
                            endpoint_aware=True, scale=d31).value.real
    return tuple(v / W.GAP_PHASE[k] for k, v in enumerate((i0, i1, i2, i3)))


def _oriented(gaps, pos, lo: str, hi: str):
    """int_lo^hi du/F from the gap integrals; pos maps label -> 1..3."""
    i = pos[lo]
    j = 4 if hi == "inf" else pos[hi]
    if i == j:
        return 0.0
    a, b = min(i, j), max(i, j)
    s = sum(gaps[k] for k in range(a, b))
    return s if i < j else -s


def _label_positions(k: int) -> dict[str, int]:
    return {lab: i + 1 for i, lab in enumerate(W.GAP_ORDER[k])}


def half_periods_on_gap(k: int, y, m: W.ModuliPoint, method: str = "carlson", spec: QuadSpec = QuadSpec(rel_tol=1e-13)):
    """(half gamma1, half gamma2) periods at fibres y, all in wall gap k."""
    gaps = gap_integrals(y, m, method, spec)
    pos = _label_positions(k)
    g1, g2 = HALF_PERIOD_PATHS[k]
    h1 = sum(_oriented(gaps, pos, lo, hi) for lo, hi in g1)
    h2 = sum(_oriented(gaps, pos, lo, hi) for lo, hi in g2)
    return h1, h2


def half_period(y: float, cycle, m: W.ModuliPoint, spec: QuadSpec = QuadSpec(rel_tol=1e-13),
                method: str = "carlson", ws: W.WallSet | None = None) -> complex:
    """Half of the period of ``cycle`` (GAMMA1, GAMMA2 or any CycleVec) over
    the fibre at y, following the row of HALF_PERIOD_PATHS for y's gap."""
    ws = W.walls(m) if ws is None else ws
    W.ordering_at(y, ws, m)  # raises OnWall / TableMismatch
    k = ws.gap_index(y)
    h1, h2 = half_periods_on_gap(k, float(y), m, method, spec)
    c = cycle if isinstance(cycle, CycleVec) else CycleVec(*cycle)
    return complex(c.n1 * h1 + c.n2 * h2)


def periods_at_base(m: W.ModuliPoint, spec: QuadSpec = QuadSpec(rel_tol=1e-13), b: float | None = None,
                    method: str = "carlson") -> FiberPeriods:
    """Full periods of gamma1, gamma2 at the base point b in (s2, s3)."""
    ws = W.walls(m)
    s2, s3 = ws.s[1], ws.s[2]
    b = 0.5 * (s2 + s3) if b is None else float(b)
    if not s2 < b < s3:
        raise DomainError(f"base point {b} not in (s2, s3)")
    return FiberPeriods(
        2 * half_period(b, GAMMA1, m, spec, method, ws),
        2 * half_period(b, GAMMA2, m, spec, method, ws),
        b,
    )


def segment_period(e1, e2, e3):
    """Twice the integral of du/sqrt((u-e1)(u-e2)(u-e3)) from e1 to e2, for
    complex roots: 4 K(k) / sqrt(e3 - e1) with k = (e2-e1)/(e3-e1),
    2K = 2 R_F(0, 1-k, 1).  Principal branches; the result is a period of
    the fibre, fixed only up to sign and lattice choices."""
    e1, e2, e3 = (np.asarray(v, dtype=complex) for v in (e1, e2, e3))
    k = (e2 - e1) / (e3 - e1)
    return 4 * carlson_rf(0.0, 1 - k, 1.0) / np.sqrt(e3 - e1)


def lattice_basis(y, m: W.ModuliPoint):
    """A Z-basis of the period lattice at complex y: the doubled segment
    integrals beta->p and alpha->beta."""
    y = np.asarray(y, dtype=complex)
    a = y * y * np.sqrt(2 * y)
    b, p = -a, 5 * y * y - 10 * m.x * y + m.y_param
    return segment_period(b, p, a), segment_period(a, b, p)


def collision_limit(y_wall: float, m: W.ModuliPoint) -> float:
    """pi / sqrt|collided - third|: limit of the integral across a gap as
    its two endpoints merge at a wall."""
    al, be, pp = W._branch_tuple(float(y_wall), m)
    vals = sorted((al, be, pp))
    # the two closest values are the collided pair
    d01, d12 = vals[1] - vals[0], vals[2] - vals[1]
    collided, third = (0.5 * (vals[0] + vals[1]), vals[2]) if d01 < d12 else (0.5 * (vals[1] + vals[2]), vals[0])
    return math.pi / math.sqrt(abs(collided - third))
