import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hilbert_period import efiber as E
from hilbert_period import walls as W
from hilbert_period.errors import Degenerate, DomainError

pos = st.floats(1e-3, 1e3)


def test_rf_special_values():
    assert E.carlson_rf(0.0, 1.0, 1.0) == pytest.approx(math.pi / 2, rel=1e-14)
    assert E.carlson_rf(1.0, 1.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(Degenerate):
        E.carlson_rf(0.0, 0.0, 1.0)


@given(pos, pos, pos)
def test_rf_matches_mpmath(x, y, z):
    assert E.carlson_rf(x, y, z) == pytest.approx(float(mpmath.elliprf(x, y, z)), rel=1e-14)


@given(pos, pos, pos, st.floats(1e-2, 1e2))
def test_rf_symmetric_and_homogeneous(x, y, z, lam):
    v = E.carlson_rf(x, y, z)
    assert E.carlson_rf(z, x, y) == pytest.approx(v, rel=1e-14)
    assert E.carlson_rf(lam * x, lam * y, lam * z) == pytest.approx(v / math.sqrt(lam), rel=1e-13)


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10), st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_rf_complex_matches_mpmath(a, b):
    assume(abs(a.imag) > 1e-3 or a.real > 0)
    assume(abs(b.imag) > 1e-3 or b.real > 0)
    got = E.carlson_rf(a, b, 1.0)
    assert complex(got) == pytest.approx(complex(mpmath.elliprf(a, b, 1.0)), rel=1e-12)


def test_rf_vectorised():
    x = np.array([0.0, 1.0, 2.0])
    out = E.carlson_rf(x, 1.0, 1.0)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(1.0)


def test_cycle_pairing():
    assert E.GAMMA1.pairing(E.GAMMA2) == 1
    assert E.GAMMA2.pairing(E.GAMMA1) == -1
    c = 3 * E.GAMMA1 - E.GAMMA2
    assert c.as_tuple() == (3, -1)
    assert c.pairing(c) == 0


def _fibres(m, per_gap=2):
    ws = W.walls(m)
    pts = ws.points + (3 * ws.s[-1],)
    for k in range(6):
        lo, hi = pts[k], pts[k + 1]
        for t in np.linspace(0.2, 0.8, per_gap):
            yield k, lo + t * (hi - lo)


def test_gap_integrals_quadrature_vs_carlson(base_point):
    for _, y in _fibres(base_point):
        a = E.gap_integrals(y, base_point)
        b = E.gap_integrals(y, base_point, method="quad")
        for u, v in zip(a, b):
            assert complex(v) == pytest.approx(complex(u), rel=1e-11)


def test_gap_integrals_vanish_around_the_line(u0_points):
    for m in u0_points[:5]:
        for _, y in _fibres(m, 1):
            g = E.gap_integrals(y, m, method="quad")
            assert abs(sum(g)) <= 1e-9 * max(abs(v) for v in g)


def test_periods_at_base_are_independent(u0_points):
    for m in u0_points:
        fp = E.periods_at_base(m)
        assert abs(fp.tau.imag) > 1e-3


def test_base_point_must_lie_in_middle_gap(base_point):
    ws = W.walls(base_point)
    with pytest.raises(DomainError):
        E.periods_at_base(base_point, b=ws.s[3] + 0.1)


def test_half_periods_are_lattice_vectors(base_point):
    for k, y in _fibres(base_point):
        h1, h2 = E.half_periods_on_gap(k, y, base_point)
        w1, w2 = E.lattice_basis(complex(y), base_point)
        a = np.array([[w1.real, w2.real], [w1.imag, w2.imag]])
        for v in (2 * h1, 2 * h2):
            co = np.linalg.solve(a, [complex(v).real, complex(v).imag])
            assert np.max(np.abs(co - np.round(co))) < 1e-8


def test_segment_period_real_case():
    # doubled integral over [e1, e2] of du / sqrt|(u-e1)(u-e2)(u-e3)|
    e1, e2, e3 = -1.0, 0.5, 2.0
    ref = 2 * float(2 * mpmath.elliprf(e3 - e2, e3 - e1, 0))
    assert abs(complex(E.segment_period(e1, e2, e3))) == pytest.approx(ref, rel=1e-12)


def test_gap_integral_tends_to_collision_limit(base_point):
    ws = W.walls(base_point)
    s3 = ws.s[2]
    lim = E.collision_limit(s3, base_point)
    vals = []
    for eps in (1e-6, 1e-8):
        g = E.gap_integrals(s3 * (1 - eps), base_point)
        vals.append(min(abs(g[1]), abs(g[2]), key=lambda v: abs(v - lim)))
    assert abs(vals[1] - lim) < abs(vals[0] - lim) or abs(vals[1] - lim) < 1e-6 * lim
    assert vals[1] == pytest.approx(lim, rel=1e-3)
