"""The nine acceptance criteria, each at its stated tolerance.

Every test records a one-line PASS/FAIL verdict (shown in the pytest
terminal summary, and printed when this file is run as a script) before
asserting, so a failing criterion is reported rather than hidden.
"""
import io
import math
import time

import numpy as np
import pytest

from hilbert_period import algebra, braid, cli, efiber, homlat, invariants
from hilbert_period import periodmap as P
from hilbert_period import walls as W
from hilbert_period.quad import QuadSpec, integrate_de

from conftest import VERDICTS


def verdict(n: int, ok: bool, text: str) -> None:
    line = f"CRITERION {n} {'PASS' if ok else 'FAIL'}: {text}"
    VERDICTS[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def period_pairs(u0_points):
    out = []
    for m in u0_points:
        t0 = time.perf_counter()
        a = P.periods_chambers(m)
        b = P.periods_fiberwise(m)
        out.append((m, a, b, time.perf_counter() - t0))
    return out


def test_c1_exact_integer_suite():
    t0 = time.perf_counter()
    checks = homlat.run_all_checks()
    relations = homlat.verify_monodromy_relations(strict=False)
    c1c2 = homlat.fixture_intersection("C1", "C2")
    dt = time.perf_counter() - t0
    failed = [c.name for c in checks + relations if not c.ok]
    ok = not failed and len(relations) == 4 and c1c2 == 2 and dt < 1.0
    verdict(1, ok, f"{len(checks)} exact checks, 4 relations, (C1.C2) = {c1c2}, {dt * 1e3:.0f} ms"
            + (f"; failed {failed}" if failed else ""))


def test_c2_quadrature_self_tests():
    t0 = time.perf_counter()
    spec = QuadSpec(rel_tol=1e-13)
    a = integrate_de(lambda t, dl, dr: 1 / np.sqrt(dl), 0.0, 1.0, spec, endpoint_aware=True).value.real
    b = integrate_de(lambda u, dl, dr: 1 / np.sqrt(dl * dr), -1.0, 1.0, spec, endpoint_aware=True).value.real
    c = efiber.carlson_rf(0.0, 1.0, 1.0)
    dt = time.perf_counter() - t0
    errs = (abs(a - 2) / 2, abs(b - math.pi) / math.pi, abs(c - math.pi / 2) / (math.pi / 2))
    verdict(2, max(errs) <= 1e-12 and dt < 1.0, f"relative errors {', '.join(f'{e:.1e}' for e in errs)}, {dt * 1e3:.0f} ms")


def test_c3_dual_pathway_agreement(period_pairs):
    devs = [P.relative_deviation(a, b) for _, a, b, _ in period_pairs]
    slowest = max(t for *_, t in period_pairs)
    ok = len(devs) >= 5 and max(devs) <= 1e-6 and slowest <= 30.0
    verdict(3, ok, f"{len(devs)} scan points, max relative deviation {max(devs):.1e}, slowest {slowest:.2f} s")


def test_c4_riemann_quadric_and_positivity(period_pairs):
    worst_q, worst_z, min_pos, min_im = 0.0, 0.0, math.inf, math.inf
    for _, a, b, _ in period_pairs:
        for pv in (a, b):
            worst_q = max(worst_q, P.quadric_residual(pv))
            min_pos = min(min_pos, P.positivity(pv))
            n = P.normalize_component(pv)
            z = P.to_hilbert(n)
            min_im = min(min_im, z.z1.imag, z.z2.imag)
            r = n.xi[0] / n.xi[1]
            worst_z = max(worst_z, abs(z.z1 * z.z2 + r) / abs(r))
    ok = worst_q <= 1e-8 and min_pos > 0 and min_im > 0 and worst_z <= 1e-7
    verdict(4, ok, f"quadric {worst_q:.1e}, min positivity {min_pos:.3g}, min Im z {min_im:.3g}, "
                   f"z1 z2 identity {worst_z:.1e}")


def test_c5_numeric_monodromy(u0_points):
    pts = u0_points[::4][:3]
    worst, slowest, bad = 0.0, 0.0, []
    for m in pts:
        t0 = time.perf_counter()
        for j in range(6):
            got, res = braid.monodromy_numeric(m, j)
            worst = max(worst, res)
            if got != homlat.MONODROMY[j]:
                bad.append((m.x, m.y_param, j, got.rows()))
        slowest = max(slowest, time.perf_counter() - t0)
    ok = len(pts) >= 3 and not bad and worst <= 1e-6 and slowest <= 120.0
    verdict(5, ok, f"{len(pts)} points x 6 loops, max residual {worst:.1e}, slowest point {slowest:.1f} s"
            + (f"; mismatches {bad}" if bad else ""))


def test_c6_birational_battery():
    worst = algebra.battery(100, seed=0)
    ok = (max(worst["T->S"], worst["iota"], worst["T->K"]) <= 1e-9 and worst["iota^2"] <= 1e-12
          and worst["K(iota)"] <= 1e-10)
    verdict(6, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_c7_branch_divisor_correlation(u0_points):
    boundary = []
    for m in u0_points[:3]:
        for ang in np.linspace(0.0, 2 * math.pi, 4, endpoint=False):
            boundary.append(invariants.locate_boundary(m, float(ang) + 0.3))
    b_ratio = max(abs(invariants.branch_divisor_value(b)) / invariants.divisor_scale(b) for b in boundary)
    interior = [W.ModuliPoint(float(x), float(y)) for x in np.linspace(0.1, 1.0, 10) for y in np.linspace(0.05, 4.0, 10)]
    interior = [m for m in interior if W.in_U0(m)]
    i_ratio = min(abs(invariants.branch_divisor_value(m)) / invariants.divisor_scale(m) for m in interior)
    ok = len(boundary) >= 5 and len(interior) >= 20 and b_ratio <= 1e-6 and i_ratio > 1e-3
    verdict(7, ok, f"{len(boundary)} boundary points max |Y K|/scale {b_ratio:.1e}; "
                   f"{len(interior)} interior points min {i_ratio:.2e}")


def test_c8_fiber_contour_identity(u0_points):
    worst, n = 0.0, 0
    for m in u0_points[:4]:
        ws = W.walls(m)
        pts = ws.points + (2 * ws.s[-1],)
        for k in range(6):
            y = 0.5 * (pts[k] + pts[k + 1])
            # independent quadrature of each gap, not the closed forms
            g = efiber.gap_integrals(y, m, method="quad")
            worst = max(worst, abs(sum(g)) / max(abs(v) for v in g))
            n += 1
    verdict(8, n >= 10 and worst <= 1e-9, f"{n} fibres, max relative phase-weighted sum {worst:.1e}")


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue()


def test_c9_determinism():
    p = [_cli("periods", "--x", "0.7", "--y", "1.1", "--method", "both", "--workers", str(w)) for w in (1, 1, 3)]
    grid = "0.5,0.9,3,0.6,1.6,3"
    s = [_cli("scan", "--grid", grid, "--workers", str(w)) for w in (1, 1, 2)]
    ok = all(c == 0 for c, _ in p + s) and len({o for _, o in p}) == 1 and len({o for _, o in s}) == 1
    verdict(9, ok, f"periods x3 and scan x3 (workers 1, 1, N) byte-identical: {ok}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
