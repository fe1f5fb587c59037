import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbert_period import braid as B
from hilbert_period import efiber as E
from hilbert_period import walls as W
from hilbert_period.errors import DomainError, NotIntegral
from hilbert_period.homlat import MONODROMY, IntMat2


def test_loops_wind_once_around_their_wall(base_point):
    ws = W.walls(base_point)
    for j in range(6):
        lp = B.loop_for(j, ws)
        assert [lp.winding(p) for p in ws.points] == [int(k == j) for k in range(6)]
        assert B.cuts_met(lp, ws) <= {j}
        assert lp.points[0] == lp.points[-1] == lp.base


def test_bad_loop_index(base_point):
    with pytest.raises(DomainError):
        B.loop_for(6, W.walls(base_point))


def test_numeric_monodromy_matches_table(base_point):
    for j in range(6):
        got, res = B.monodromy_numeric(base_point, j)
        assert got == MONODROMY[j], j
        assert res <= 1e-6


def test_reversed_loop_gives_inverse(base_point):
    ws = W.walls(base_point)
    lp = B.loop_for(3, ws).reversed()
    s, e = B.continue_periods(base_point, lp)
    assert B.recover_matrix(s, e) == MONODROMY[3].inv()


def test_composite_loop_multiplies_in_order(base_point):
    ws = W.walls(base_point)
    lp = B.loop_for(1, ws).then(B.loop_for(2, ws))
    s, e = B.continue_periods(base_point, lp)
    assert B.recover_matrix(s, e) == MONODROMY[1] @ MONODROMY[2]


def test_tracking_rejects_non_periods(base_point):
    path = np.array([0.3 + 0.05j, 0.31 + 0.05j])
    with pytest.raises(DomainError):
        B.track(base_point, path, np.array([1.234 + 0.5j, 2.0 + 0j]))


@st.composite
def sl2z(draw):
    out = IntMat2(1, 0, 0, 1)
    for k in draw(st.lists(st.integers(-3, 3), max_size=3)):
        out = out @ IntMat2(1, k, 0, 1) @ IntMat2(0, -1, 1, 0)
    return out


@given(sl2z())
def test_recover_matrix_round_trip(m):
    s = E.FiberPeriods(1.3 + 0.2j, -0.4 + 2.1j, 0.5)
    v = np.array(m.rows()) @ np.array([s.pi1, s.pi2])
    assert B.recover_matrix(s, E.FiberPeriods(complex(v[0]), complex(v[1]), 0.5)) == m


def test_recover_matrix_rejects_noise():
    s = E.FiberPeriods(1.0 + 0j, 1j, 0.5)
    with pytest.raises(NotIntegral):
        B.recover_matrix(s, E.FiberPeriods(1.3 + 0j, 1j, 0.5))


def test_constant_loop_is_identity(base_point):
    ws = W.walls(base_point)
    b = complex(0.5 * (ws.s[1] + ws.s[2]))
    lp = B.Loop(np.array([b, b + 1e-3j, b]), None, b)
    s, e = B.continue_periods(base_point, lp)
    assert abs(e.pi1 - s.pi1) <= 1e-10 * abs(s.pi1) and abs(e.pi2 - s.pi2) <= 1e-10 * abs(s.pi2)


def test_loop_then_reverse_is_identity(base_point):
    lp = B.loop_for(4, W.walls(base_point))
    s, e = B.continue_periods(base_point, lp.then(lp.reversed()))
    assert abs(e.pi1 - s.pi1) <= 1e-9 * abs(s.pi1) and abs(e.pi2 - s.pi2) <= 1e-9 * abs(s.pi2)


def test_base_point_independence(base_point):
    ws = W.walls(base_point)
    s2, s3 = ws.s[1], ws.s[2]
    for t in (0.3, 0.7):
        b = s2 + t * (s3 - s2)
        s, e = B.continue_periods(base_point, B.loop_for(0, ws, base=b))
        assert B.recover_matrix(s, e) == MONODROMY[0]


def test_recovered_matrices_are_unipotent(base_point):
    eye = IntMat2(1, 0, 0, 1)
    for j in range(6):
        got, _ = B.monodromy_numeric(base_point, j)
        n = IntMat2(got.a - 1, got.b, got.c, got.d - 1)
        assert n @ n == IntMat2(0, 0, 0, 0)
        assert got.trace == 2 and got != eye
