"""Periods of the transcendental cycles and the map to H x H.

Two independent routes give xi = (xi_1, ..., xi_4):

* chambers: 2-D integrals of du dy / F over R1..R4,
      xi = (2R2 + 2R4, 2R2, 6R1 + 2R3, -2R1);
* fiberwise: 1-D y-integrals of fibre half periods along the six arcs
  of the L-cycles, combined by the dual-basis expressions of homlat.

The periods satisfy xi A xi^t = 0 and xi A conj(xi)^t > 0 with
A = U + [[2, 1], [1, -2]].
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import efiber as E
from . import walls as W
from .errors import ComponentAmbiguous, DegeneratePeriods
from .quad import ZERO, QuadResult, QuadSpec, integrate_chamber, integrate_de, integrate_semi_inf

GRAM_A = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 2, 1], [0, 0, 1, -2]])
SQRT5 = math.sqrt(5.0)
SIGMA = ((1 - SQRT5) / 2, (1 + SQRT5) / 2)

# Base interval and fibre cycle of each L-cycle; None = +infinity.
L_ARCS = (
    (5, None, E.CycleVec(1, -1)),
    (4, 5, E.CycleVec(1, -1)),
    (3, None, E.CycleVec(1, 0)),
    (2, 3, E.CycleVec(1, 0)),
    (1, 4, E.CycleVec(1, -1)),
    (0, None, E.CycleVec(0, 1)),
)

# Delta_j as integer combinations of L_1..L_6.
_D4 = (1, 1, -1, -1, 1, 1)
DELTA_IN_L = (
    (1, 1, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 0),
    tuple(-3 * c - (1 if k == 3 else 0) for k, c in enumerate(_D4)),
    _D4,
)

# the y-tail beyond this multiple of s5 is below 1e-15 relative
_TAIL_CUT = 1e64


@dataclass(frozen=True)
class PeriodVector:
    xi: tuple[complex, complex, complex, complex]
    method: str
    err_est: float = 0.0
    conjugated: bool = False

    def as_array(self) -> np.ndarray:
        return np.array(self.xi, dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class HilbertPoint:
    z1: complex
    z2: complex


def periods_chambers(m: W.ModuliPoint, spec: QuadSpec = QuadSpec(), workers: int = 1) -> PeriodVector:
    chs = W.chambers(m)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            res = list(ex.map(lambda c: integrate_chamber(c, m, spec), chs))
    else:
        res = [integrate_chamber(c, m, spec) for c in chs]
    r1, r2, r3, r4 = (r.value for r in res)
    e1, e2, e3, e4 = (r.err_est for r in res)
    xi = (2 * r2 + 2 * r4, 2 * r2, 6 * r1 + 2 * r3, -2 * r1)
    err = 2 * (e2 + e4) + 2 * e2 + 6 * e1 + 2 * e3 + 2 * e1
    return PeriodVector(tuple(complex(v) for v in xi), "chamber", float(err))


def _panel_integrand(k: int, cyc: E.CycleVec, m: W.ModuliPoint, fallback: float):
    def f(y, *_):
        y = np.asarray(y, dtype=float)
        _, _, _, w1, w2, w3 = E._sorted_roots(y, m)
        bad = ~((w2 > w1) & (w3 > w2)) | (y > _TAIL_CUT * fallback)
        ys = np.where(bad, fallback, y)
        with np.errstate(all="ignore"):
            h1, h2 = E.half_periods_on_gap(k, ys, m)
            # full period: the one place half periods are doubled
            out = 2 * (cyc.n1 * h1 + cyc.n2 * h2)
        return np.where(bad | ~np.isfinite(out), 0.0, out)

    return f


def l_integral(j: int, m: W.ModuliPoint, spec: QuadSpec = QuadSpec(), ws: W.WallSet | None = None) -> QuadResult:
    """int over L_j of omega = int over the arc of the full period of the
    arc's fibre cycle (1-based j, as in L_1..L_6)."""
    ws = W.walls(m) if ws is None else ws
    lo, hi, cyc = L_ARCS[j - 1]
    pts = ws.points
    stop = 5 if hi is None else hi
    total = ZERO
    for k in range(lo, stop):
        mid = 0.5 * (pts[k] + pts[k + 1])
        total = total + integrate_de(_panel_integrand(k, cyc, m, mid), pts[k], pts[k + 1], spec,
                                     endpoint_aware=True)
    if hi is None:
        s5 = pts[5]
        total = total + integrate_semi_inf(_panel_integrand(5, cyc, m, 2 * s5), s5, spec,
                                           endpoint_aware=True, scale=s5)
    return total


def periods_fiberwise(m: W.ModuliPoint, spec: QuadSpec = QuadSpec(), workers: int = 1) -> PeriodVector:
    ws = W.walls(m)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            ls = list(ex.map(lambda j: l_integral(j, m, spec, ws), range(1, 7)))
    else:
        ls = [l_integral(j, m, spec, ws) for j in range(1, 7)]
    vals = np.array([r.value for r in ls])
    errs = np.array([r.err_est for r in ls])
    coeffs = np.array(DELTA_IN_L, dtype=float)
    xi = coeffs @ vals
    err = float(np.max(np.abs(coeffs) @ errs))
    return PeriodVector(tuple(complex(v) for v in xi), "fiberwise", err)


def quadric_form(pv: PeriodVector) -> complex:
    x = pv.as_array()
    return complex(x @ GRAM_A @ x)


def quadric_residual(pv: PeriodVector) -> float:
    """|xi A xi^t| / |xi|^2, invariant under xi -> lambda xi."""
    n2 = pv.norm() ** 2
    return abs(quadric_form(pv)) / n2 if n2 else 0.0


def positivity(pv: PeriodVector) -> float:
    """xi A conj(xi)^t, a real number (A is real symmetric)."""
    x = pv.as_array()
    return float((x @ GRAM_A @ x.conj()).real)


def _raw_hilbert(xi, tol: float = 1e-12) -> tuple[complex, complex]:
    x1, x2, x3, x4 = xi
    if abs(x2) <= tol * float(np.linalg.norm(xi)):
        raise DegeneratePeriods("xi_2 vanishes; the developing map is undefined")
    return -(x3 + SIGMA[0] * x4) / x2, -(x3 + SIGMA[1] * x4) / x2


def to_hilbert(pv: PeriodVector, normalize: bool = True) -> HilbertPoint:
    """(z1, z2) = -(xi3 + sigma xi4) / xi2 for the two conjugate sigma."""
    if normalize:
        pv = normalize_component(pv)
    z1, z2 = _raw_hilbert(pv.xi)
    return HilbertPoint(complex(z1), complex(z2))


def component(pv: PeriodVector) -> str:
    """'+' if both Im z > 0, '-' if both < 0; raises on mixed signs."""
    z1, z2 = _raw_hilbert(pv.xi)
    if z1.imag > 0 and z2.imag > 0:
        return "+"
    if z1.imag < 0 and z2.imag < 0:
        return "-"
    raise ComponentAmbiguous(f"Im z1 = {z1.imag:.3e}, Im z2 = {z2.imag:.3e} have mixed signs")


def normalize_component(pv: PeriodVector) -> PeriodVector:
    if component(pv) == "+":
        return pv
    return replace(pv, xi=tuple(complex(v).conjugate() for v in pv.xi), conjugated=not pv.conjugated)


def relative_deviation(a: PeriodVector, b: PeriodVector) -> float:
    x, y = a.as_array(), b.as_array()
    return float(np.linalg.norm(x - y) / np.linalg.norm(x))
