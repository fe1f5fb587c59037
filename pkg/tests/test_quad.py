import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbert_period import walls as W
from hilbert_period.efiber import carlson_rf
from hilbert_period.errors import DomainError, NoConvergence
from hilbert_period.quad import (QuadSpec, inner_gap_integrals, integrate_chamber, integrate_contour, integrate_de,
                                 integrate_semi_inf)

TIGHT = QuadSpec(rel_tol=1e-13)


def test_inverse_sqrt_endpoint():
    r = integrate_de(lambda t, dl, dr: 1 / np.sqrt(dl), 0.0, 1.0, TIGHT, endpoint_aware=True)
    assert r.value.real == pytest.approx(2.0, rel=1e-12)
    assert r.converged


def test_arcsine_density():
    r = integrate_de(lambda u, dl, dr: 1 / np.sqrt(dl * dr), -1.0, 1.0, TIGHT, endpoint_aware=True)
    assert r.value.real == pytest.approx(math.pi, rel=1e-12)


def test_semi_infinite():
    r = integrate_semi_inf(lambda x: 1 / (1 + x * x), 0.0, TIGHT)
    assert r.value.real == pytest.approx(math.pi / 2, rel=1e-12)
    r = integrate_semi_inf(lambda x, d: 1 / (np.sqrt(d) * (1 + x)), 0.0, TIGHT, endpoint_aware=True)
    assert r.value.real == pytest.approx(math.pi, rel=1e-12)


@given(st.floats(0.3, 3.0))
def test_power_law_endpoint(a):
    r = integrate_de(lambda t, dl, dr: dl ** (a - 1), 0.0, 1.0, TIGHT, endpoint_aware=True)
    assert r.value.real == pytest.approx(1 / a, rel=1e-11)


@given(st.floats(-3.0, 3.0), st.floats(0.01, 5.0))
def test_interval_shift_and_scale(a, w):
    r = integrate_de(lambda x, dl, dr: 1 / np.sqrt(dl * dr), a, a + w, TIGHT, endpoint_aware=True)
    assert r.value.real == pytest.approx(math.pi, rel=1e-12)


def test_bad_interval():
    with pytest.raises(DomainError):
        integrate_de(lambda x: x, 1.0, 0.0)


def test_nonconvergence_is_reported():
    spec = QuadSpec(rel_tol=1e-15, abs_tol=1e-300, max_level=2, min_level=0)
    with pytest.raises(NoConvergence):
        integrate_de(lambda x: np.sin(200 * x), 0.0, 1.0, spec)
    r = integrate_de(lambda x: np.sin(200 * x), 0.0, 1.0, spec, strict=False)
    assert not r.converged


def test_inner_gap_collapses_to_limit():
    # width -> 0: int du / sqrt((u-lo)(hi-u)(c-u)) -> pi / sqrt(c - lo)
    v, _, _ = inner_gap_integrals(1, np.array([0.0]), np.array([1e-12]), np.array([4.0]))
    assert abs(v[0]) == pytest.approx(math.pi / 2, rel=1e-10)


def test_inner_gap_against_mpmath():
    v, _, _ = inner_gap_integrals(2, np.array([1.0]), np.array([3.0]), np.array([-2.0]))
    # closed form over (w2, w3) with roots (-2, 1, 3): 2 R_F(w2 - w1, w3 - w1, 0)
    assert abs(v[0]) == pytest.approx(float(2 * mpmath.elliprf(3, 5, 0)), rel=1e-12)


def test_chamber_against_mpmath(base_point):
    ch = W.chambers(base_point)[2]
    got = integrate_chamber(ch, base_point, TIGHT)

    # R3 lies over the gap (w1, w2): inner integral 2 R_F(w3 - w2, w3 - w1, 0)
    def inner(y):
        a = y * y * mpmath.sqrt(2 * y)
        w1, w2, w3 = sorted((a, -a, 5 * y * y - 10 * base_point.x * y + base_point.y_param))
        return 2 * mpmath.elliprf(w3 - w2, w3 - w1, 0)

    with mpmath.workdps(30):
        ref = mpmath.quad(inner, [ch.y_lo, ch.y_hi])
    assert abs(got.value) == pytest.approx(float(ref), rel=1e-9)
    assert got.err_est < 1e-8 * abs(got.value)


def test_contour_closed_loop():
    r = integrate_contour(lambda u: 1 / u, [1, 1j, -1, -1j, 1])
    assert r.value == pytest.approx(2j * math.pi, rel=1e-12)
    r = integrate_contour(lambda u: u * u, [1, 2j, -1, 1])
    assert abs(r.value) < 1e-13


def test_contour_tracks_square_root_sign():
    # a loop around the roots 0 and 1 of (u-1) u (u+1) gives twice the
    # real-line integral, which is 4 R_F(0, 1, 2)
    f = lambda u: 1 / np.sqrt((u - 1) * u * (u + 1) + 0j)  # noqa: E731
    r = integrate_contour(f, [-0.5 - 0.5j, 2 - 0.5j, 2 + 0.5j, -0.5 + 0.5j, -0.5 - 0.5j], sign_ambiguous=True)
    assert abs(r.value) == pytest.approx(4 * carlson_rf(0.0, 1.0, 2.0), rel=1e-10)
