from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbert_period import periodmap as P
from hilbert_period import walls as W
from hilbert_period.errors import ComponentAmbiguous, DegeneratePeriods


@pytest.fixture(scope="module")
def both(base_point):
    return P.periods_chambers(base_point), P.periods_fiberwise(base_point)


def test_pathways_agree(both):
    a, b = both
    assert P.relative_deviation(a, b) <= 1e-10


def test_error_estimates_are_honest(both):
    a, b = both
    dev = np.linalg.norm(a.as_array() - b.as_array())
    assert dev <= 10 * (a.err_est + b.err_est)


def test_riemann_relations(both):
    for pv in both:
        assert P.quadric_residual(pv) <= 1e-10
        assert P.positivity(pv) > 0


def test_delta2_has_two_expressions(base_point):
    ws = W.walls(base_point)
    l1, l4, l5 = (P.l_integral(j, base_point, ws=ws).value for j in (1, 4, 5))
    assert abs(l1 - (l5 - l4)) <= 1e-10 * abs(l1)


def test_hilbert_point_in_upper_half_planes(both):
    for pv in both:
        z = P.to_hilbert(pv)
        assert z.z1.imag > 0 and z.z2.imag > 0
        ratio = pv.xi[0] / pv.xi[1]
        assert abs(z.z1 * z.z2 + ratio) <= 1e-9 * abs(ratio)


def test_conjugation_switches_component(both):
    pv = both[0]
    conj = replace(pv, xi=tuple(complex(v).conjugate() for v in pv.xi))
    assert P.component(pv) == "+"
    assert P.component(conj) == "-"
    norm = P.normalize_component(conj)
    assert norm.conjugated
    assert P.to_hilbert(norm) == P.to_hilbert(pv)


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_hilbert_map_is_projective(lam):
    xi = (3 + 1j, -2j, 1 - 1j, 0.5j)
    pv = P.PeriodVector(xi, "test")
    scaled = P.PeriodVector(tuple(lam * v for v in xi), "test")
    a, b = P._raw_hilbert(pv.xi), P._raw_hilbert(scaled.xi)
    assert a[0] == pytest.approx(b[0], rel=1e-12) and a[1] == pytest.approx(b[1], rel=1e-12)


def test_degenerate_and_mixed_vectors():
    with pytest.raises(DegeneratePeriods):
        P.to_hilbert(P.PeriodVector((1, 0, 1, 1), "test"))
    # z1 = -(xi3 + sigma1 xi4) / xi2 and z2 on opposite sides
    with pytest.raises(ComponentAmbiguous):
        P.component(P.PeriodVector((0, 1, -1j, 2j), "test"))


def test_quadric_form_matches_gram():
    xi = np.array([1 + 2j, -1j, 0.5, 2 - 1j])
    pv = P.PeriodVector(tuple(xi), "test")
    want = 2 * xi[0] * xi[1] + 2 * xi[2] ** 2 + 2 * xi[2] * xi[3] - 2 * xi[3] ** 2
    assert P.quadric_form(pv) == pytest.approx(want)


def test_parallel_chambers_identical(base_point):
    a = P.periods_chambers(base_point)
    b = P.periods_chambers(base_point, workers=4)
    assert a.xi == b.xi
