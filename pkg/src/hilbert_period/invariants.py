"""Klein's icosahedral polynomial, the branch divisor, Humbert's equation.

The branch divisor of the developing map in the (X, Y) plane is
Y * Klein(X, Y) = 0.  Along it two walls collide (Klein) or a wall reaches
y = 0 (Y), so it is exactly the boundary of the 5-wall region.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from .algebra import WeightedPoint135
from .errors import CuspPoint, DomainError
from .walls import ModuliPoint


def klein(m: ModuliPoint) -> float:
    """-1728 X^5 + 64 (5X^2 - Y)^2 + 720 X^3 Y - 80 X Y^2 + Y^3 (nested)."""
    x, y = m.x, m.y_param
    return ((((-1728.0 * x + 1600.0) * x + 720.0 * y) * x - 640.0 * y) * x - 80.0 * y * y) * x + (64.0 + y) * y * y


def klein_monomials(m: ModuliPoint) -> tuple[float, ...]:
    x, y = m.x, m.y_param
    return (-1728 * x ** 5, 1600 * x ** 4, 720 * x ** 3 * y, -640 * x ** 2 * y, -80 * x * y ** 2, 64 * y ** 2, y ** 3)


def klein_naive(m: ModuliPoint) -> float:
    """Direct transcription of the displayed form, for cross-checking."""
    x, y = m.x, m.y_param
    return -1728 * x ** 5 + 64 * (5 * x ** 2 - y) ** 2 + 720 * x ** 3 * y - 80 * x * y ** 2 + y ** 3


def branch_divisor_value(m: ModuliPoint) -> float:
    return m.y_param * klein(m)


def divisor_scale(m: ModuliPoint) -> float:
    """Weighted size of Y * Klein: with X, Y of weights 3, 5 the product is
    homogeneous of weight 20, so the natural scale is |(1, X, Y)|^20 in the
    weighted max-norm."""
    return max(1.0, abs(m.x) ** (1 / 3), abs(m.y_param) ** (1 / 5)) ** 20


@dataclass(frozen=True)
class LambdaTriple:
    l1: complex
    l2: complex
    l3: complex

    def is_generic(self) -> bool:
        v = (self.l1, self.l2, self.l3)
        return len(set(v)) == 3 and not any(t in (0, 1) for t in v)


def humbert_residual(t: LambdaTriple) -> complex:
    """LHS - RHS of Humbert's modular equation of discriminant 5."""
    l1, l2, l3 = t.l1, t.l2, t.l3
    a = l1 * l1 * l3 - l2 * l2 + l3 * l3 * (1 - l1) + l2 * l2 * l3
    b = l1 * l2 * l3 * (l1 - l2)
    c = l1 * l1 * (l2 + 1) * l3 - l2 * l2 * (l1 + l3) + (1 - l1) * l2 * l3 * l3 + l1 * (l2 - l3)
    return 4 * a * b - c * c


def humbert_residual_naive(t: LambdaTriple) -> complex:
    l1, l2, l3 = t.l1, t.l2, t.l3
    return (4 * (l1 ** 2 * l3 - l2 ** 2 + l3 ** 2 * (1 - l1) + l2 ** 2 * l3) * (l1 ** 2 * l2 * l3 - l1 * l2 ** 2 * l3)
            - (l1 ** 2 * (l2 + 1) * l3 - l2 ** 2 * (l1 + l3) + (1 - l1) * l2 * l3 ** 2 + l1 * (l2 - l3)) ** 2)


def xy_from_weighted(w: WeightedPoint135, imag_tol: float = 1e-12) -> ModuliPoint:
    """Affine coordinates X = B / A^3, Y = C / A^5 of a real moduli point."""
    if w.a == 0:
        raise DomainError("A = 0 lies outside the affine chart")
    x, y = w.b / w.a ** 3, w.c / w.a ** 5
    x, y = complex(x), complex(y)
    if x == 0 and y == 0:
        raise CuspPoint("(A : B : C) = (1 : 0 : 0) is the cusp")
    if abs(x.imag) > imag_tol * max(1.0, abs(x)) or abs(y.imag) > imag_tol * max(1.0, abs(y)):
        raise DomainError("point has non-real affine coordinates")
    return ModuliPoint(x.real, y.real)


def _sturm_changes(seq: list[list[Fraction]], at_inf: bool) -> int:
    signs = []
    for q in seq:
        v = q[0] if at_inf else q[-1]
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _polyrem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    while len(a) >= len(b):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def positive_wall_count(x: float, y: float) -> int:
    """Number of distinct positive real roots of 2 t^5 - (5 t^2 - 10 x t + y)^2.

    Exact Sturm count over the rationals: near Y = 0 two walls separate
    like Y^(3/2), far below what floating-point root finding resolves."""
    X, Y = Fraction(x), Fraction(y)
    p = [Fraction(2), Fraction(-25), 100 * X, -(100 * X * X + 10 * Y), 20 * X * Y, -Y * Y]
    while p and p[-1] == 0:  # roots at t = 0 are not positive
        p.pop()
    if len(p) < 2:
        return 0
    seq = [p, [c * (len(p) - 1 - i) for i, c in enumerate(p[:-1])]]
    while len(seq[-1]) > 1:
        r = _polyrem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return _sturm_changes(seq, False) - _sturm_changes(seq, True)


def locate_boundary(m: ModuliPoint, direction: float, max_t: float = 16.0, iters: int = 200) -> ModuliPoint:
    """Bisection along the ray from an inside point m at angle ``direction``
    for the first exit from the 5-wall region."""
    if positive_wall_count(m.x, m.y_param) != 5:
        raise DomainError("ray must start inside the 5-wall region")
    dx, dy = math.cos(direction), math.sin(direction)
    lo, hi = 0.0, 1e-3
    while positive_wall_count(m.x + hi * dx, m.y_param + hi * dy) == 5:
        lo, hi = hi, 2 * hi
        if hi > max_t:
            raise DomainError("no boundary found along the ray")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if positive_wall_count(m.x + mid * dx, m.y_param + mid * dy) == 5:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    return ModuliPoint(m.x + t * dx, m.y_param + t * dy)


def boundary_distance(m: ModuliPoint, n_dir: int = 32) -> float:
    """Smallest ray distance to the boundary over n_dir directions."""
    best = math.inf
    for a in np.linspace(0.0, 2 * math.pi, n_dir, endpoint=False):
        try:
            b = locate_boundary(m, float(a), iters=60)
        except DomainError:
            continue
        best = min(best, math.hypot(b.x - m.x, b.y_param - m.y_param))
    return best
