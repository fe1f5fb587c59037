"""Exact integer data of the fibration: monodromy, 2-cycle intersections.

Conventions (fixed once, used everywhere):

* a fibre 1-cycle is a row vector c = (n1, n2) meaning n1*gamma1 + n2*gamma2;
* continuing a cycle once counterclockwise around wall j sends c to c M_j,
  clockwise to c M_j^{-1};
* the cut lines l_0, l_1, l_2 point down from their walls and l_3, l_4, l_5
  point up, so a left-to-right pass below the axis of a downward cut, or a
  right-to-left pass above the axis of an upward cut, is counterclockwise.

With these, going around r_a and then r_b multiplies as M_a M_b, which is
the order in which the relation M1 M2 M4 M3 = [[1, 4], [0, 1]] fixes gamma2.

Nothing in this module uses floating point.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .efiber import CycleVec
from .errors import DualityFailed, NonTransverse, RelationFailed, UnsupportedType


@dataclass(frozen=True)
class IntMat2:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, rows) -> "IntMat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def __matmul__(self, o: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d,
        )

    def __pow__(self, n: int) -> "IntMat2":
        base = self if n >= 0 else self.inv()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out @ base
        return out

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def inv(self) -> "IntMat2":
        if self.det not in (1, -1):
            raise ValueError("matrix is not invertible over the integers")
        s = self.det
        return IntMat2(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def act(self, v: CycleVec) -> CycleVec:
        """Row action v -> v M."""
        return CycleVec(v.n1 * self.a + v.n2 * self.c, v.n1 * self.b + v.n2 * self.d)


IDENTITY = IntMat2(1, 0, 0, 1)

_IB = re.compile(r"^I_?(\d+)$")


def kodaira_normal_form(fiber_type: str) -> IntMat2:
    """Normal form of the local monodromy: I_b -> [[1,0],[b,1]], III* -> [[0,1],[-1,0]]."""
    t = fiber_type.strip()
    if t == "III*":
        return IntMat2(0, 1, -1, 0)
    mt = _IB.match(t)
    if mt:
        return IntMat2(1, 0, int(mt.group(1)), 1)
    raise UnsupportedType(f"no normal form stored for fibre type {fiber_type!r}")


# Local monodromy around 0, s1..s5 and infinity.
MONODROMY: Mapping[object, IntMat2] = {
    0: IntMat2(1, -5, 0, 1),
    1: IntMat2(3, -2, 2, -1),
    2: IntMat2(1, 0, 2, 1),
    3: IntMat2(1, 0, 2, 1),
    4: IntMat2(3, -2, 2, -1),
    5: IntMat2(3, -2, 2, -1),
    "inf": IntMat2(3, 5, -2, -3),
}

FIBER_TYPE = {0: "I5", 1: "I2", 2: "I2", 3: "I2", 4: "I2", 5: "I2", "inf": "III*"}


def monodromy_table() -> dict:
    return dict(MONODROMY)


def find_conjugator(m: IntMat2, n: IntMat2, bound: int = 4) -> IntMat2 | None:
    """Some P in SL(2, Z) with entries in [-bound, bound] and P m P^-1 = n."""
    rng = range(-bound, bound + 1)
    for a, b, c, d in product(rng, repeat=4):
        if a * d - b * c != 1:
            continue
        p = IntMat2(a, b, c, d)
        if p @ m == n @ p:
            return p
    return None


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def _word(ms: Iterable[tuple[int, int]]) -> IntMat2:
    out = IDENTITY
    for j, e in ms:
        out = out @ (MONODROMY[j] ** e)
    return out


# (name, word as (index, exponent) pairs, expected product)
RELATIONS = (
    ("M1 M2 M4 M3", ((1, 1), (2, 1), (4, 1), (3, 1)), IntMat2(1, 4, 0, 1)),
    ("M1 M2 M5 M3", ((1, 1), (2, 1), (5, 1), (3, 1)), IntMat2(1, 4, 0, 1)),
    ("M2^-1 M3", ((2, -1), (3, 1)), IDENTITY),
    ("M0 M1 M2 M0^-1 M3^-1", ((0, 1), (1, 1), (2, 1), (0, -1), (3, -1)), IntMat2(3, -2, 2, -1)),
)


def verify_monodromy_relations(strict: bool = True) -> list[Check]:
    out = []
    for name, word, want in RELATIONS:
        got = _word(word)
        out.append(Check(name, got == want, f"{got.rows()}"))
        if strict and got != want:
            raise RelationFailed(f"{name} = {got.rows()}, expected {want.rows()}")
    return out


def monodromy_class_checks() -> list[Check]:
    """Unimodularity and the Kodaira class of every local monodromy."""
    out = []
    for j, mj in MONODROMY.items():
        out.append(Check(f"det M_{j}", mj.det == 1, str(mj.det)))
        nf = kodaira_normal_form(FIBER_TYPE[j])
        p = find_conjugator(mj, nf)
        out.append(Check(f"M_{j} ~ {FIBER_TYPE[j]}", p is not None, "" if p is None else str(p.rows())))
    return out


# -- intersection tables -------------------------------------------------------

CC = np.array([[0, 2, 0, 0], [2, 0, 0, 0], [0, 0, -4, -6], [0, 0, -6, -4]])
LC = np.array([[0, 1, 0, 0], [1, -1, 0, 0], [1, 1, 1, -1], [0, 0, -2, -3], [0, 1, -2, -3], [0, 0, 2, 0]])
LD = np.array([[0, 1, 0, 0], [1, -1, 0, 0], [1, 1, -2, -1], [0, 0, -1, -3], [0, 1, -1, -3], [0, 0, -2, 0]])
DD = np.array([[0, 2, 0, 0], [2, 0, 0, 0], [0, 0, 4, 2], [0, 0, 2, -4]])

# D_k as combinations of C_1..C_4 (rows).
D_IN_C = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 1], [0, 0, 0, 1]])

_D4 = (1, 1, -1, -1, 1, 1)
# Delta_j as combinations of L_1..L_6 (rows).
DELTA_IN_L = np.array([
    (1, 1, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 0),
    tuple(-3 * c - (1 if k == 3 else 0) for k, c in enumerate(_D4)),
    _D4,
])
DELTA2_ALT = np.array((0, 0, 0, -1, 1, 0))  # L5 - L4

GRAM_A = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 2, 1], [0, 0, 1, -2]])


def intersection_tables() -> dict[str, np.ndarray]:
    return {"CC": CC.copy(), "LC": LC.copy(), "LD": LD.copy(), "DD": DD.copy()}


def derived_LD() -> np.ndarray:
    return LC @ D_IN_C.T


def derived_DD() -> np.ndarray:
    return D_IN_C @ CC @ D_IN_C.T


def lattice_checks() -> list[Check]:
    out = [
        Check("(D.D) from (C.C)", bool(np.array_equal(derived_DD(), DD))),
        Check("(D.D) = 2A", bool(np.array_equal(DD, 2 * GRAM_A))),
        Check("(L.D) from (L.C)", bool(np.array_equal(derived_LD(), LD))),
        Check("(C.C) symmetric", bool(np.array_equal(CC, CC.T))),
    ]
    return out


def dual_basis_check(strict: bool = True) -> list[Check]:
    pair = DELTA_IN_L @ LD
    out = [Check("(Delta.D) = identity", bool(np.array_equal(pair, np.eye(4, dtype=int))), str(pair.tolist()))]
    alt = DELTA2_ALT @ LD
    out.append(Check("Delta2 = L1 = L5 - L4 on D", bool(np.array_equal(alt, pair[1])), str(alt.tolist())))
    if strict and not all(c.ok for c in out):
        raise DualityFailed("; ".join(f"{c.name}: {c.detail}" for c in out if not c.ok))
    return out


_SYMBOL = re.compile(r"^(C|L|D|Delta)(\d)$")


@dataclass(frozen=True)
class TwoCycleExpr:
    """Integer combination of the named 2-cycles C_k, L_k, D_k, Delta_k."""

    coeffs: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, **kw: int) -> "TwoCycleExpr":
        return cls(tuple(sorted((k, v) for k, v in kw.items() if v)))

    def __post_init__(self):
        for name, _ in self.coeffs:
            mt = _SYMBOL.match(name)
            top = 6 if mt and mt.group(1) == "L" else 4
            if not mt or not 1 <= int(mt.group(2)) <= top:
                raise ValueError(f"unknown 2-cycle {name!r}")

    def __add__(self, o: "TwoCycleExpr") -> "TwoCycleExpr":
        d = dict(self.coeffs)
        for k, v in o.coeffs:
            d[k] = d.get(k, 0) + v
        return TwoCycleExpr.of(**d)

    def __rmul__(self, n: int) -> "TwoCycleExpr":
        return TwoCycleExpr.of(**{k: n * v for k, v in self.coeffs})

    def __sub__(self, o: "TwoCycleExpr") -> "TwoCycleExpr":
        return self + (-1) * o

    def pairing_with_D(self) -> np.ndarray:
        """((self . D_k))_{k=1..4} by bilinear expansion over the tables."""
        row = np.zeros(4, dtype=int)
        for name, v in self.coeffs:
            kind, i = _SYMBOL.match(name).groups()
            i = int(i) - 1
            if kind == "C":
                r = CC[i] @ D_IN_C.T
            elif kind == "D":
                r = DD[i]
            elif kind == "L":
                r = LD[i]
            else:
                r = DELTA_IN_L[i] @ LD
            row = row + v * r
        return row


# -- base arcs, cut lines and tube intersections --------------------------------

Pt = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class CutLineConfig:
    """Positions of 0, s1..s5 on the real axis and the direction of each cut."""

    points: tuple[Fraction, ...]
    directions: tuple[str, ...] = ("down", "down", "down", "up", "up", "up")

    def __post_init__(self):
        if len(self.points) != len(self.directions):
            raise ValueError("one direction per cut")
        if any(d not in ("up", "down") for d in self.directions):
            raise ValueError("directions are 'up' or 'down'")
        if list(self.points) != sorted(set(self.points)):
            raise ValueError("cut positions must be strictly increasing")


def _frac(v) -> Fraction:
    return Fraction(str(v)) if isinstance(v, float) else Fraction(v)


def _cross(o: Pt, a: Pt, b: Pt) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class BaseArc:
    """A polyline in the y-plane with the cut crossings it makes, in order."""

    vertices: tuple[Pt, ...]
    config: CutLineConfig
    crossings: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def build(cls, vertices: Sequence, config: CutLineConfig) -> "BaseArc":
        vs = tuple((_frac(x), _frac(y)) for x, y in vertices)
        return cls(vs, config, tuple((j, s) for j, s, _, _ in cut_events(vs, config)))

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("a base arc needs at least two vertices")
        found = tuple((j, s) for j, s, _, _ in cut_events(self.vertices, self.config))
        if self.crossings and tuple(map(tuple, self.crossings)) != found:
            raise NonTransverse(f"annotated crossings {self.crossings} disagree with geometry {found}")
        object.__setattr__(self, "crossings", found)

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]


def cut_events(vs: Sequence[Pt], cfg: CutLineConfig) -> list[tuple[int, int, int, Fraction]]:
    """(cut index, sign, segment index, parameter) for every cut crossing."""
    ev = []
    for k, (p, q) in enumerate(zip(vs[:-1], vs[1:])):
        for j, (x0, dirn) in enumerate(zip(cfg.points, cfg.directions)):
            lo, hi = min(p[0], q[0]), max(p[0], q[0])
            if (p[0], p[1]) == (x0, 0) or (q[0], q[1]) == (x0, 0):
                raise NonTransverse(f"arc passes through the wall at {x0}")
            if p[0] == q[0]:
                if p[0] == x0 and (min(p[1], q[1]) <= 0 <= max(p[1], q[1]) or
                                   (dirn == "down" and min(p[1], q[1]) < 0) or
                                   (dirn == "up" and max(p[1], q[1]) > 0)):
                    raise NonTransverse(f"segment runs along cut {j}")
                continue
            if not lo <= x0 <= hi:
                continue
            t = (x0 - p[0]) / (q[0] - p[0])
            yy = p[1] + t * (q[1] - p[1])
            on_cut = yy < 0 if dirn == "down" else yy > 0
            if yy == 0:
                raise NonTransverse(f"segment passes through the wall at {x0}")
            if not on_cut:
                continue
            if t in (0, 1):
                raise NonTransverse(f"vertex lies on cut {j}")
            rightward = q[0] > p[0]
            ccw = rightward if dirn == "down" else not rightward
            ev.append((j, 1 if ccw else -1, k, t))
    ev.sort(key=lambda e: (e[2], e[3]))
    return ev


def transport(cycle: CycleVec, crossings: Iterable[tuple[int, int]], table: Mapping = MONODROMY) -> CycleVec:
    """Continue a fibre cycle across the listed cuts: c -> c M_j^{sign}."""
    for j, s in crossings:
        cycle = (table[j] ** s).act(cycle)
    return cycle


def _cycle_at(arc: BaseArc, cyc: CycleVec, seg: int, t: Fraction) -> CycleVec:
    before = [(j, s) for j, s, k, tt in cut_events(arc.vertices, arc.config) if (k, tt) < (seg, t)]
    return transport(cyc, before)


def arc_crossings(a: BaseArc, b: BaseArc) -> list[tuple[int, Fraction, int, Fraction, int]]:
    """Transverse crossings of two polylines away from shared end points:
    (segment of a, parameter, segment of b, parameter, sign (a x b))."""
    shared = {a.vertices[0], a.vertices[-1]} & {b.vertices[0], b.vertices[-1]}
    out = []
    for i, (p, q) in enumerate(zip(a.vertices[:-1], a.vertices[1:])):
        for k, (r, s) in enumerate(zip(b.vertices[:-1], b.vertices[1:])):
            d1, d2 = _cross(p, q, r), _cross(p, q, s)
            d3, d4 = _cross(r, s, p), _cross(r, s, q)
            if d1 == d2 == 0:
                if _overlap(p, q, r, s):
                    raise NonTransverse("collinear overlapping segments")
                continue
            if (d1 > 0 and d2 > 0) or (d1 < 0 and d2 < 0) or (d3 > 0 and d4 > 0) or (d3 < 0 and d4 < 0):
                continue
            denom = (q[0] - p[0]) * (s[1] - r[1]) - (q[1] - p[1]) * (s[0] - r[0])
            t = ((r[0] - p[0]) * (s[1] - r[1]) - (r[1] - p[1]) * (s[0] - r[0])) / denom
            u = ((r[0] - p[0]) * (q[1] - p[1]) - (r[1] - p[1]) * (q[0] - p[0])) / denom
            pt = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            if pt in shared:
                continue
            if t in (0, 1) or u in (0, 1):
                raise NonTransverse(f"arcs meet at a vertex {pt}")
            out.append((i, t, k, u, 1 if denom > 0 else -1))
    return out


def _overlap(p, q, r, s) -> bool:
    key = 0 if p[0] != q[0] else 1
    a0, a1 = sorted((p[key], q[key]))
    b0, b1 = sorted((r[key], s[key]))
    return max(a0, b0) < min(a1, b1)


def tube_terms(arc_a: BaseArc, cyc_a: CycleVec, arc_b: BaseArc, cyc_b: CycleVec):
    """Per crossing: (planar sign, cycle of a, cycle of b)."""
    out = []
    for i, t, k, u, sign in arc_crossings(arc_a, arc_b):
        out.append((sign, _cycle_at(arc_a, cyc_a, i, t), _cycle_at(arc_b, cyc_b, k, u)))
    return out


def tube_intersection(arc_a: BaseArc, cyc_a: CycleVec, arc_b: BaseArc, cyc_b: CycleVec) -> int:
    """(T_a . T_b) = sum over base crossings of -(rho_a . rho_b)(gamma_a . gamma_b)."""
    return sum(-sign * ga.pairing(gb) for sign, ga, gb in tube_terms(arc_a, cyc_a, arc_b, cyc_b))


@dataclass(frozen=True)
class TubeCycle:
    name: str
    arc: BaseArc
    cycle: CycleVec

    def __post_init__(self):
        if self.arc.closed and transport(self.cycle, self.arc.crossings) != self.cycle:
            raise ValueError(f"{self.name}: cycle is not invariant under its loop")


FIXTURE_SCHEMA = "hilbert-period/arcs/1"


def load_fixture(text: str | None = None) -> tuple[CutLineConfig, dict[str, TubeCycle]]:
    if text is None:
        text = resources.files(__package__).joinpath("data/arcs.json").read_text()
    doc = json.loads(text)
    if doc.get("schema") != FIXTURE_SCHEMA:
        raise ValueError(f"unsupported fixture schema {doc.get('schema')!r}")
    cfg_doc = doc["config"]
    cfg = CutLineConfig(tuple(Fraction(v) for v in cfg_doc["points"]), tuple(cfg_doc["directions"]))
    tubes = {}
    for name, a in doc["arcs"].items():
        vs = tuple((Fraction(x), Fraction(y)) for x, y in a["vertices"])
        arc = BaseArc(vs, cfg, tuple(tuple(c) for c in a.get("crossings", ())))
        tubes[name] = TubeCycle(name, arc, CycleVec(*a["cycle"]))
    return cfg, tubes


@lru_cache(maxsize=1)
def fixture_tubes() -> dict[str, TubeCycle]:
    return load_fixture()[1]


def fixture_intersection(a: str, b: str) -> int:
    t = fixture_tubes()
    return tube_intersection(t[a].arc, t[a].cycle, t[b].arc, t[b].cycle)


def run_all_checks() -> list[Check]:
    """Every exact identity, as a flat report (never raises)."""
    out = monodromy_class_checks()
    out += verify_monodromy_relations(strict=False)
    out.append(Check("M_inf trace 0 and order 4", MONODROMY["inf"].trace == 0 and MONODROMY["inf"] ** 4 == IDENTITY))
    out += lattice_checks()
    out += dual_basis_check(strict=False)
    try:
        v = fixture_intersection("C1", "C2")
        out.append(Check("(C1.C2) from base arcs", bool(v == CC[0, 1]), str(v)))
    except (NonTransverse, ValueError) as e:
        out.append(Check("(C1.C2) from base arcs", False, str(e)))
    return out
