"""Double-exponential quadrature with exact endpoint distances.

Every rule here hands the integrand the distance to the nearby endpoint
computed from the complement 1 - |tanh(pi/2 sinh t)|, never from a
subtraction, so inverse-square-root endpoint singularities are resolved
down to ~1e-300 of the interval width.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BranchJump, DomainError, NoConvergence

_EPS = np.finfo(float).eps
_T_MAX = 6.0  # complement stays above ~1e-300
_T_MAX_EXP = 6.5


@dataclass(frozen=True)
class QuadSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_level: int = 10
    max_subdiv: int = 16
    min_level: int = 3

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not 0 <= self.min_level <= self.max_level <= 12:
            raise ValueError("need 0 <= min_level <= max_level <= 12")


@dataclass
class QuadResult:
    value: complex
    err_est: float
    evals: int
    converged: bool

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.err_est + other.err_est,
            self.evals + other.evals,
            self.converged and other.converged,
        )

    def scaled(self, k: complex) -> "QuadResult":
        return QuadResult(k * self.value, abs(k) * self.err_est, self.evals, self.converged)


ZERO = QuadResult(0j, 0.0, 0, True)


@lru_cache(maxsize=None)
def _ts_nodes(level: int, t_max: float = _T_MAX):
    """Tanh-sinh nodes first used at ``level`` on [-1, 1].

    Returns (cl, cr, w): cl = 1 + xi and cr = 1 - xi, both exact, and the
    weight dxi/dt.  The midpoint t = 0 belongs to level 0 only.
    """
    h = 2.0 ** -level
    if level == 0:
        t = np.arange(0.0, t_max + 1e-12, 1.0)
    else:
        t = np.arange(h, t_max + 1e-12, 2 * h)
    s = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2 * s)
    c = 2 * e / (1 + e)  # 1 - tanh(s) without cancellation
    w = 0.5 * math.pi * np.cosh(t) * 4 * e / (1 + e) ** 2
    keep = c > 0
    c, w, t = c[keep], w[keep], t[keep]
    mirror = t > 0
    cl = np.concatenate([2 - c, c[mirror]])
    cr = np.concatenate([c, 2 - c[mirror]])
    ww = np.concatenate([w, w[mirror]])
    for arr in (cl, cr, ww):
        arr.setflags(write=False)
    return cl, cr, ww


@lru_cache(maxsize=None)
def _es_level(level: int, t_max: float = _T_MAX_EXP):
    """New exp-sinh nodes on (0, inf): x = exp(pi/2 sinh t), weight dx/dt."""
    h = 2.0 ** -level
    if level == 0:
        t = np.arange(-math.floor(t_max), t_max + 1e-12, 1.0)
    else:
        j = np.arange(-(int(t_max / h) + 1), int(t_max / h) + 2)
        t = (2 * j + 1) * h
        t = t[np.abs(t) <= t_max]
    s = 0.5 * math.pi * np.sinh(t)
    x = np.exp(s)
    w = 0.5 * math.pi * np.cosh(t) * x
    keep = (x > 0) & np.isfinite(w)
    return x[keep], w[keep]


def _tol(spec: QuadSpec, value) -> float:
    return max(spec.rel_tol * abs(value), spec.abs_tol)


def integrate_de(
    f: Callable,
    a: float,
    b: float,
    spec: QuadSpec = QuadSpec(),
    *,
    endpoint_aware: bool = False,
    strict: bool = True,
) -> QuadResult:
    """Tanh-sinh quadrature of ``f`` over [a, b].

    ``f`` is evaluated on numpy arrays.  With ``endpoint_aware`` it is called
    as ``f(x, x - a, b - x)`` where both distances are exact, which is how
    integrands with singular endpoints should be written.  The error
    estimate is the difference between successive levels, floored by the
    accumulated rounding of the sum.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    half = 0.5 * (b - a)
    total = 0.0
    prev = None
    abs_sum = 0.0
    evals = 0
    err = math.inf
    for level in range(spec.max_level + 1):
        h = 2.0 ** -level
        cl, cr, ww = _ts_nodes(level)
        dl, dr = half * cl, half * cr
        x = np.where(cl <= 1.0, a + dl, b - dr)
        if endpoint_aware:
            vals = np.asarray(f(x, dl, dr))
        else:
            ok = (x > a) & (x < b)
            x, ww = x[ok], ww[ok]
            vals = np.asarray(f(x))
        evals += x.size
        terms = ww * vals
        if not np.all(np.isfinite(terms)):
            raise NoConvergence("integrand is not finite at a quadrature node")
        level_sum = half * np.sum(terms)
        abs_sum = 0.5 * abs_sum + h * half * np.sum(np.abs(terms))
        total = level_sum * h if level == 0 else 0.5 * total + h * level_sum
        if prev is not None:
            err = max(abs(total - prev), 16 * _EPS * abs_sum)
            if level >= spec.min_level and err <= _tol(spec, total):
                return QuadResult(complex(total), float(err), evals, True)
        prev = total
    if strict:
        raise NoConvergence(f"tanh-sinh did not converge on [{a}, {b}] (err {err:.3e})")
    return QuadResult(complex(total), float(err), evals, False)


def integrate_semi_inf(
    f: Callable,
    a: float,
    spec: QuadSpec = QuadSpec(),
    *,
    endpoint_aware: bool = False,
    scale: float = 1.0,
    strict: bool = True,
) -> QuadResult:
    """Exp-sinh quadrature over [a, inf) for integrands decaying faster
    than 1/x.  With ``endpoint_aware`` the call is ``f(x, x - a)``."""
    total = 0.0
    prev = None
    abs_sum = 0.0
    evals = 0
    err = math.inf
    for level in range(spec.max_level + 1):
        h = 2.0 ** -level
        d, w = _es_level(level)
        d = scale * d
        w = scale * w
        x = a + d
        with np.errstate(over="ignore"):
            vals = np.asarray(f(x, d) if endpoint_aware else f(x))
        evals += x.size
        terms = w * vals
        terms = np.where(np.isfinite(x), terms, 0.0)
        if not np.all(np.isfinite(terms)):
            raise NoConvergence("integrand is not finite at a quadrature node")
        level_sum = np.sum(terms)
        abs_sum = 0.5 * abs_sum + h * np.sum(np.abs(terms))
        total = level_sum * h if level == 0 else 0.5 * total + h * level_sum
        if prev is not None:
            err = max(abs(total - prev), 16 * _EPS * abs_sum)
            if level >= spec.min_level and err <= _tol(spec, total):
                return QuadResult(complex(total), float(err), evals, True)
        prev = total
    if strict:
        raise NoConvergence(f"exp-sinh did not converge on [{a}, inf) (err {err:.3e})")
    return QuadResult(complex(total), float(err), evals, False)


# -- chamber integrals ---------------------------------------------------------


def inner_gap_integrals(gap: int, lo, hi, third, rel_tol: float = 1e-12, max_level: int = 10):
    """Vectorised integral of du/F across one gap, for arrays of fibres.

    ``lo < hi`` are the gap's endpoints and ``third`` is the remaining
    branch value (above the gap for gap 1, below it for gap 2).  Written in
    the normalised variable u = lo + (hi - lo)(1 + xi)/2 the width cancels,
    so collapsing gaps (wall endpoints) stay finite.

    Returns (values, err_est, evals).
    """
    lo, hi, third = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (lo, hi, third)))
    width = np.maximum(hi - lo, 0.0)
    hw = 0.5 * width
    if gap == 1:
        base = np.maximum(third - hi, 0.0)  # factor w3 - u = (w3 - w2) + hw * cr
        phase = -1.0
    elif gap == 2:
        base = np.maximum(lo - third, 0.0)  # factor u - w1 = (w2 - w1) + hw * cl
        phase = 1j
    else:
        raise DomainError("gap must be 1 or 2")
    total = np.zeros(lo.shape)
    prev = None
    err = np.full(lo.shape, np.inf)
    evals = 0
    for level in range(max_level + 1):
        h = 2.0 ** -level
        cl, cr, wn = _ts_nodes(level)
        if gap == 1:
            other = base[..., None] + hw[..., None] * cr
        else:
            other = base[..., None] + hw[..., None] * cl
        with np.errstate(divide="ignore"):
            vals = wn / np.sqrt(cl * cr * other)
        # exact collisions only occur at outer nodes of negligible weight
        vals = np.where(np.isfinite(vals), vals, 0.0)
        evals += cl.size * lo.size
        level_sum = vals.sum(axis=-1)
        total = level_sum * h if level == 0 else 0.5 * total + h * level_sum
        if prev is not None:
            err = np.maximum(np.abs(total - prev), 16 * _EPS * np.abs(total))
            if level >= 3 and np.all(err <= rel_tol * np.abs(total)):
                break
        prev = total
    return total / phase, err, evals


def integrate_chamber(ch, m, spec: QuadSpec = QuadSpec(), *, inner_max_level: int | None = None) -> QuadResult:
    """Iterated integral of du dy / F over a chamber.

    The outer y-integral is split at the walls inside the chamber's
    y-range; on each panel the lower/upper branch labels are fixed.
    """
    from .walls import _branch_tuple

    inner_level = spec.max_level if inner_max_level is None else inner_max_level
    inner_tol = max(spec.rel_tol * 1e-2, 1e-14)
    err_spec = QuadSpec(rel_tol=1e-2, abs_tol=1e-300, max_level=min(spec.max_level, 6), min_level=2)
    gap = 1 if ch.u_lo_fn == "w1" else 2
    result = ZERO
    for a, b, lo_lab, hi_lab in ch.panels():
        if b <= a:
            continue
        third_lab = ({"alpha", "beta", "p"} - {lo_lab, hi_lab}).pop()

        def inner(y, lo_lab=lo_lab, hi_lab=hi_lab, third_lab=third_lab):
            al, be, pp = _branch_tuple(y, m)
            v = {"alpha": al, "beta": be, "p": pp}
            return inner_gap_integrals(gap, v[lo_lab], v[hi_lab], v[third_lab], inner_tol, inner_level)

        r = integrate_de(lambda y, dl, dr: inner(y)[0], a, b, spec, endpoint_aware=True)
        # inner errors, propagated through the same outer rule
        e = integrate_de(lambda y, dl, dr: inner(y)[1], a, b, err_spec, endpoint_aware=True, strict=False)
        r.err_est += abs(e.value)
        result = result + r
    return result


# -- contour integrals ---------------------------------------------------------


def integrate_contour(
    f: Callable,
    path: Sequence[complex],
    spec: QuadSpec = QuadSpec(),
    *,
    sign_ambiguous: bool = False,
    max_chain: int = 1 << 16,
) -> QuadResult:
    """Integral of f(u) du along a polyline.

    With ``sign_ambiguous`` the callable returns values only up to sign
    (e.g. a principal square root); signs are then continued along the
    path from the value at the first vertex.  Continuity is enforced on a
    chain of samples that is refined until consecutive samples differ by
    less than half their size; failure to get there raises BranchJump.
    """
    path = [complex(z) for z in path]
    if len(path) < 2:
        return ZERO
    ref = complex(np.asarray(f(np.array([path[0]])))[0]) if sign_ambiguous else None
    total = ZERO
    for z0, z1 in zip(path[:-1], path[1:]):
        if z0 == z1:
            continue
        dz = z1 - z0
        if not sign_ambiguous:
            def g(t, dz=dz, z0=z0):
                return np.asarray(f(z0 + dz * t)) * dz

            total = total + integrate_de(g, 0.0, 1.0, spec)
            continue
        seg, ref = _contour_segment_tracked(f, z0, dz, spec, ref, max_chain)
        total = total + seg
    return total


def _contour_segment_tracked(f, z0, dz, spec, ref, max_chain):
    # quadrature nodes of the finest level reached decide the chain density
    n = 64
    while True:
        res = None
        ok = True
        try:
            res = _tracked_once(f, z0, dz, spec, ref, n)
        except _Jump:
            ok = False
        if ok:
            return res
        n *= 2
        if n > max_chain:
            raise BranchJump("branch continuity could not be maintained along segment")


class _Jump(Exception):
    pass


def _tracked_once(f, z0, dz, spec, ref, n_chain):
    cache: dict[str, complex] = {}

    def aligned(t):
        t = np.asarray(t, dtype=float)
        grid = np.linspace(0.0, 1.0, n_chain + 1)
        allt = np.unique(np.concatenate([grid, t]))
        vals = np.asarray(f(z0 + dz * allt), dtype=complex)
        big = float(np.max(np.abs(vals[np.isfinite(vals)]), initial=0.0))
        prev = ref
        out = np.empty_like(vals)
        for i, v in enumerate(vals):
            if abs(v + prev) < abs(v - prev):
                v = -v
            # near a zero of f relative changes are meaningless
            size = max(abs(prev), abs(v))
            if size > 1e-3 * big and abs(v - prev) > 0.5 * size:
                raise _Jump()
            out[i] = v
            prev = v
        cache["end"] = complex(out[-1])
        idx = np.searchsorted(allt, t)
        return out[idx]

    res = integrate_de(lambda t, *_: aligned(t) * dz, 0.0, 1.0, spec, endpoint_aware=True)
    end = cache.get("end")
    if end is None:
        end = complex(np.asarray(f(np.array([z0 + dz])))[0])
    return res, end
