import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from hilbert_period import invariants as I
from hilbert_period.algebra import WeightedPoint135
from hilbert_period.errors import CuspPoint, DomainError
from hilbert_period.walls import ModuliPoint, in_U0

coord = st.floats(-4.0, 4.0)


@given(coord, coord)
def test_klein_nested_equals_naive(x, y):
    assume(x or y)
    m = ModuliPoint(x, y)
    scale = sum(abs(t) for t in I.klein_monomials(m))
    assert abs(I.klein(m) - I.klein_naive(m)) <= 1e-13 * scale


def test_klein_monomials_match_symbolic_expansion():
    X, Y = sp.symbols("X Y")
    expr = sp.expand(-1728 * X ** 5 + 64 * (5 * X ** 2 - Y) ** 2 + 720 * X ** 3 * Y - 80 * X * Y ** 2 + Y ** 3)
    m = ModuliPoint(0.7, 1.3)
    assert float(expr.subs({X: 0.7, Y: 1.3})) == pytest.approx(sum(I.klein_monomials(m)), rel=1e-14)
    assert len(expr.as_ordered_terms()) == len(I.klein_monomials(m))


def test_discriminant_of_wall_quintic():
    # the branch divisor is the discriminant locus of the wall quintic
    X, Y, y = sp.symbols("X Y y")
    disc = sp.discriminant(2 * y ** 5 - (5 * y ** 2 - 10 * X * y + Y) ** 2, y)
    klein = -1728 * X ** 5 + 64 * (5 * X ** 2 - Y) ** 2 + 720 * X ** 3 * Y - 80 * X * Y ** 2 + Y ** 3
    assert sp.expand(disc - 50000 * Y ** 5 * klein) == 0


def test_klein_at_a_point():
    assert I.klein(ModuliPoint(1.0, 0.0)) == -128.0


def test_humbert_nested_equals_naive():
    rng = np.random.default_rng(1)
    for _ in range(50):
        l1, l2, l3 = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = I.LambdaTriple(l1, l2, l3)
        a, b = I.humbert_residual(t), I.humbert_residual_naive(t)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def test_humbert_symbolic():
    l1, l2, l3 = sp.symbols("l1 l2 l3")
    t = I.LambdaTriple(l1, l2, l3)
    assert sp.expand(I.humbert_residual(t) - I.humbert_residual_naive(t)) == 0
    at_zero = sp.factor(I.humbert_residual(I.LambdaTriple(l1, l2, 0)))
    assert sp.expand(at_zero + l1 ** 2 * l2 ** 2 * (1 - l2) ** 2) == 0


def test_lambda_triple_genericity():
    assert I.LambdaTriple(2, 3, 4).is_generic()
    assert not I.LambdaTriple(2, 2, 4).is_generic()
    assert not I.LambdaTriple(0, 3, 4).is_generic()


@given(st.floats(0.5, 2.0), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.2, 3.0))
def test_affine_chart_is_weighted_invariant(a, b, c, lam):
    assume(abs(b) > 1e-3 or abs(c) > 1e-3)
    w = WeightedPoint135(a, b, c)
    m1, m2 = I.xy_from_weighted(w), I.xy_from_weighted(w.scaled(lam))
    assert m2.x == pytest.approx(m1.x, rel=1e-12, abs=1e-14)
    assert m2.y_param == pytest.approx(m1.y_param, rel=1e-12, abs=1e-14)


def test_chart_errors():
    with pytest.raises(DomainError):
        I.xy_from_weighted(WeightedPoint135(0, 1, 1))
    with pytest.raises(CuspPoint):
        I.xy_from_weighted(WeightedPoint135(1, 0, 0))
    with pytest.raises(DomainError):
        I.xy_from_weighted(WeightedPoint135(1, 1j, 0))


def test_exact_count_resolves_near_zero_pair():
    # two walls 1e-13 apart near y = 7.7e-6: invisible to float roots
    assert I.positive_wall_count(0.392, 3e-5) == 5
    assert I.positive_wall_count(2.0, 1.0) == 3


def test_divisor_scale_is_weighted():
    assert I.divisor_scale(ModuliPoint(0.5, 0.5)) == 1.0
    assert I.divisor_scale(ModuliPoint(8.0, 0.0)) == pytest.approx(2.0 ** 20)
    assert I.divisor_scale(ModuliPoint(0.0, 32.0)) == pytest.approx(2.0 ** 20)


@pytest.mark.parametrize("angle", np.linspace(0, 2 * math.pi, 8, endpoint=False))
def test_boundary_points_lie_on_the_divisor(angle):
    b = I.locate_boundary(ModuliPoint(0.6, 0.8), float(angle))
    assert abs(I.branch_divisor_value(b)) <= 1e-9 * I.divisor_scale(b)


def test_boundary_needs_inside_start():
    with pytest.raises(DomainError):
        I.locate_boundary(ModuliPoint(2.0, 1.0), 0.0)


@given(st.floats(0.15, 0.95), st.floats(0.1, 3.6))
def test_divisor_nonzero_inside(x, y):
    m = ModuliPoint(x, y)
    assume(in_U0(m))
    assert I.branch_divisor_value(m) != 0
