"""The three worked families of periodic maximal surfaces: Scherk type
(singly periodic, one singular circle), Riemann type (two singular points,
parallel ends) and the doubly periodic family without ends.

Each builder returns a :class:`FamilySpec` holding the Weierstrass data,
closed-form expectations, concrete homology loops, symmetry lifts and the
quotient groups with the case each one should classify to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .domain import DomainSpec, SurfacePoint, WeierstrassData, weierstrass
from .errors import ParamOutOfRange, SymmetryFailed
from .integrator import Arc, Line, PathSpec, immerse, period, residue_numeric
from .lorentz import GroupKind, Isometry, LorentzVec
from .rational import RationalFn


class Family(str, Enum):
    SCHERK = "ScherkType"
    RIEMANN = "RiemannType"
    DOUBLY = "DoublyPeriodic"


FAMILY_ALIASES = {"scherk": Family.SCHERK, "riemann": Family.RIEMANN, "doubly": Family.DOUBLY}


@dataclass
class SymmetryLift:
    name: str
    A: Callable[[SurfacePoint], SurfacePoint]
    expected: Isometry


@dataclass
class QuotientGroup:
    label: str
    generators: Callable[[dict, list], list]  # (verified isometries, lattice) -> generators
    expected_case: GroupKind


@dataclass
class FamilySpec:
    family: Family
    params: dict
    data: WeierstrassData
    expected_translations: list = field(default_factory=list)
    cycles: dict = field(default_factory=dict)
    symmetry_lifts: list = field(default_factory=list)
    groups: list = field(default_factory=list)
    rank: int = 1
    xi0: int = 0
    # closed-form translations are only known up to sign for some families
    translation_sign_free: bool = False


def _poly(*factors) -> np.ndarray:
    """Ascending coefficients of a product of ascending factors."""
    out = np.array([1.0 + 0j])
    for f in factors:
        out = np.convolve(out, np.asarray(f, complex))
    return out


def dumbbell_segment(c1: complex, c2: complex, delta: float, base_w=None) -> PathSpec:
    """Counterclockwise loop hugging the segment [c1, c2] at distance delta."""
    c1, c2 = complex(c1), complex(c2)
    u = (c2 - c1) / abs(c2 - c1)
    n = 1j * u
    an = math.atan2(n.imag, n.real)
    segs = [
        Arc(c2, delta, an - math.pi, an),
        Line(c2 + delta * n, c1 + delta * n),
        Arc(c1, delta, an, an + math.pi),
        Line(c1 - delta * n, c2 - delta * n),
    ]
    segs = _snap(segs)
    return PathSpec(tuple(segs), base_w)


def dumbbell_arc(radius: float, theta1: float, theta2: float, delta: float, base_w=None) -> PathSpec:
    """Loop hugging the arc radius*e^{i t}, t from theta1 to theta2 (> theta1)."""
    c1 = radius * complex(math.cos(theta1), math.sin(theta1))
    c2 = radius * complex(math.cos(theta2), math.sin(theta2))
    segs = [
        Arc(0j, radius + delta, theta1, theta2),
        Arc(c2, delta, theta2, theta2 + math.pi),
        Arc(0j, radius - delta, theta2, theta1),
        Arc(c1, delta, theta1 + math.pi, theta1 + 2 * math.pi),
    ]
    return PathSpec(tuple(_snap(segs)), base_w)


def _snap(segs):
    """Rebuild line segments so that consecutive endpoints agree exactly."""
    out = []
    for i, s in enumerate(segs):
        if isinstance(s, Line):
            prev = segs[i - 1].end
            nxt = segs[(i + 1) % len(segs)].start
            s = Line(prev, nxt)
        out.append(s)
    return out


# family builders -----------------------------------------------------------------


def scherk_type(b: float = 0.5) -> FamilySpec:
    b = float(b)
    if not 0 < b < 1:
        raise ParamOutOfRange("b must lie in (0, 1)")
    dom = DomainSpec("PuncturedClosedDisk", end_z=(b, -b), rank_hint=1)
    q = RationalFn([0, 1], _poly([-b * b, 0, 1], [-1, 0, b * b]))
    data = weierstrass(dom, "z", q, base=SurfacePoint(0j), name="scherk", params={"b": b}, xi0=0)
    v = LorentzVec(math.pi / (2 * b * (b * b + 1)), 0.0, 0.0)
    r = min(0.5 * b, 0.5 * (1 - b), 0.25)
    cycles = {"end_b": PathSpec.circle(b, r), "end_minus_b": PathSpec.circle(-b, r),
              "boundary": PathSpec.circle(0j, 1.0)}
    lifts = [SymmetryLift("A", lambda p: SurfacePoint(-complex(p.z).conjugate()),
                          Isometry(np.diag([1.0, -1.0, 1.0])))]
    groups = [QuotientGroup("<T o R>", lambda iso, lat: [Isometry.translate(lat[0]) @ iso["A"]], GroupKind.R1)]
    return FamilySpec(Family.SCHERK, {"b": b}, data, [v], cycles, lifts, groups, rank=1, xi0=0)


def riemann_type(a: float = 0.5, b: float | None = None) -> FamilySpec:
    a = float(a)
    b = -a if b is None else float(b)
    if not (b < a < 1 and a > 0 and b != 0):
        raise ParamOutOfRange("need b < a < 1, a > 0 and b != 0")
    rhs = RationalFn(_poly([-a, 1], [-b, 1]), _poly([-1, a], [-1, b]))
    dom = DomainSpec("HyperellipticDisk", rhs, end_z=(0j,), rank_hint=1)
    q = RationalFn([1.0], _poly([-1, a], [-1, b]))
    base = SurfacePoint(a + 0j, 0j)
    data = weierstrass(dom, "z", q, -1, base=base, name="riemann", params={"a": a, "b": b}, xi0=0)
    s = np.sqrt(complex(a * b))
    v = LorentzVec.of(np.real(np.array([-math.pi / s, -1j * math.pi / s, 0])))
    w0 = dom.w_at(0j)
    r = 0.5 * min(abs(a), abs(b))
    cycles = {"end": PathSpec.circle(0j, r, base_w=dom.w_at(r + 0j, near=w0))}
    for c in dom.boundary_circles:
        cycles[f"boundary_{c.index}"] = PathSpec.circle(0j, 1.0, turns=c.turns, base_w=c.w_label)
    lifts, groups = [], []
    if abs(a + b) < 1e-14:
        half = v * 0.5
        lifts = [
            SymmetryLift("A0", lambda p: SurfacePoint(-complex(p.z).conjugate(), complex(p.w).conjugate()),
                         Isometry(np.diag([-1.0, 1.0, -1.0]), half)),
            SymmetryLift("A1", lambda p: SurfacePoint(complex(p.z).conjugate(), complex(p.w).conjugate()),
                         Isometry(np.diag([-1.0, 1.0, 1.0]))),
            SymmetryLift("A2", lambda p: SurfacePoint(-complex(p.z), complex(p.w)),
                         Isometry(np.diag([1.0, 1.0, -1.0]), half)),
        ]
        groups = [
            QuotientGroup("<R0>", lambda iso, lat: [iso["A0"]], GroupKind.R0),
            QuotientGroup("<T o R1>", lambda iso, lat: [Isometry.translate(lat[0]) @ iso["A1"]], GroupKind.R1),
            QuotientGroup("<R2>", lambda iso, lat: [iso["A2"]], GroupKind.R2),
        ]
    return FamilySpec(Family.RIEMANN, {"a": a, "b": b}, data, [v], cycles, lifts, groups,
                      rank=1, xi0=0, translation_sign_free=True)


def doubly_periodic(a1: float = 0.5, a2: float = 1 / 3) -> FamilySpec:
    a1, a2 = float(a1), float(a2)
    r1, r2 = abs(a1), abs(a2)
    if not (0 < r1 < 1 and 0 < r2 < 1) or abs(r1 - r2) < 1e-6:
        raise ParamOutOfRange("need a1, a2 in (-1, 1) minus {0} with |a1| != |a2|")
    rhs = RationalFn(_poly([-r1 * r1, 0, 1], [-r2 * r2, 0, 1]), _poly([-1, 0, r1 * r1], [-1, 0, r2 * r2]))
    dom = DomainSpec("HyperellipticDisk", rhs, end_z=(), rank_hint=2)
    q = RationalFn([0, 1], _poly([-1, 0, r1 * r1], [-1, 0, r2 * r2]))
    base = SurfacePoint(a1 + 0j, 0j)
    data = weierstrass(dom, "z", q, -1, base=base, name="doubly", params={"a1": a1, "a2": a2}, xi0=1)
    delta = 0.25 * min(abs(r1 - r2), 1 - max(r1, r2), min(r1, r2))
    g1 = dumbbell_arc(r1, 0.0, math.pi, delta)
    g2 = dumbbell_segment(min(r1, r2), max(r1, r2), delta)
    cycles = {
        "gamma1": PathSpec(g1.segments, dom.w_at(g1.start)),
        "gamma2": PathSpec(g2.segments, dom.w_at(g2.start)),
    }
    for c in dom.boundary_circles:
        cycles[f"boundary_{c.index}"] = PathSpec.circle(0j, 1.0, turns=c.turns, base_w=c.w_label)

    def conj_neg(p):
        return SurfacePoint(complex(p.z).conjugate(), -complex(p.w).conjugate())

    lifts = [
        SymmetryLift("A0", conj_neg, Isometry(np.diag([1.0, -1.0, -1.0]))),
        SymmetryLift("A1", lambda p: SurfacePoint(complex(p.z).conjugate(), complex(p.w).conjugate()),
                     Isometry(np.diag([-1.0, 1.0, 1.0]))),
        # translation -lambda/2 along x2 is filled in once the lattice is known
        SymmetryLift("A2", lambda p: SurfacePoint(-complex(p.z), -complex(p.w)), Isometry(np.diag([1.0, 1.0, -1.0]))),
    ]
    groups = [
        QuotientGroup("<T2 o R0, T1>", lambda iso, lat: [Isometry.translate(lat[1]) @ iso["A0"], Isometry.translate(lat[0])], GroupKind.R0T0),
        QuotientGroup("<T1 o R1, T2>", lambda iso, lat: [Isometry.translate(lat[0]) @ iso["A1"], Isometry.translate(lat[1])], GroupKind.R1T1),
        QuotientGroup("<R2, T2>", lambda iso, lat: [iso["A2"], Isometry.translate(lat[1])], GroupKind.R2T2),
        QuotientGroup("<T2 o R0, R2>", lambda iso, lat: [Isometry.translate(lat[1]) @ iso["A0"], iso["A2"]], GroupKind.R0R2),
    ]
    return FamilySpec(Family.DOUBLY, {"a1": a1, "a2": a2}, data, [], cycles, lifts, groups, rank=2, xi0=1)


def build_family(family, **params) -> FamilySpec:
    fam = FAMILY_ALIASES.get(family, family) if isinstance(family, str) else family
    fam = Family(fam)
    if fam is Family.SCHERK:
        return scherk_type(**params)
    if fam is Family.RIEMANN:
        return riemann_type(**params)
    return doubly_periodic(**params)


# lattices -----------------------------------------------------------------------------


def lattice(spec: FamilySpec, tol: float = 1e-10) -> list[np.ndarray]:
    """Real translation vectors generating the period group, computed from
    the family's homology loops."""
    d = spec.data
    if spec.family is Family.SCHERK:
        return [np.asarray(period(d, spec.cycles["end_b"], tol).real_part)]
    if spec.family is Family.RIEMANN:
        return [np.asarray(period(d, spec.cycles["end"], tol).real_part)]
    return [np.asarray(period(d, spec.cycles["gamma1"], tol).real_part),
            np.asarray(period(d, spec.cycles["gamma2"], tol).real_part)]


def expected_lifts(spec: FamilySpec, lat: list[np.ndarray]) -> list[SymmetryLift]:
    """Symmetry lifts with lattice-dependent translations filled in."""
    out = []
    for s in spec.symmetry_lifts:
        e = s.expected
        if spec.family is Family.DOUBLY and s.name == "A2":
            lam = lat[0][1]
            e = Isometry(e.linear, LorentzVec(0.0, -lam / 2, 0.0))
        out.append(SymmetryLift(s.name, s.A, e))
    return out


def reduce_mod_lattice(x: np.ndarray, lat: list[np.ndarray], span: int = 3) -> float:
    """min over small integer combinations k of |x - sum k_i v_i|."""
    x = np.asarray(x, float)
    best = np.linalg.norm(x)
    rng = range(-span, span + 1)
    if len(lat) == 1:
        for k in rng:
            best = min(best, np.linalg.norm(x - k * lat[0]))
    elif len(lat) == 2:
        for k in rng:
            for m in rng:
                best = min(best, np.linalg.norm(x - k * lat[0] - m * lat[1]))
    return float(best)


def sample_points(spec: FamilySpec, n: int, seed: int = 0, r_max: float = 0.95) -> list[SurfacePoint]:
    """Random interior points away from poles and branch points."""
    rng = np.random.default_rng(seed)
    d = spec.data
    dom = d.domain
    avoid = list(d.singular_z) + list(dom.finite_branch_points)
    pts = []
    while len(pts) < n:
        r = r_max * math.sqrt(rng.uniform(0.01, 1.0))
        z = r * complex(math.cos(t := rng.uniform(0, 2 * math.pi)), math.sin(t))
        if avoid and min(abs(z - a) for a in avoid) < 0.05:
            continue
        if dom.is_hyperelliptic:
            w = dom.w_at(z)
            pts.append(SurfacePoint(z, w if rng.uniform() < 0.5 else -w))
        else:
            pts.append(SurfacePoint(z))
    return pts


def verify_symmetry_lift(data: WeierstrassData, A, expected: Isometry, lat, points,
                         tol: float = 1e-7, quad_tol: float = 1e-11) -> tuple[Isometry, float]:
    """Check X(A(p)) = expected(X(p)) modulo the period lattice.

    Returns the lift whose translation is X(A(base)) (the base point maps
    to the origin), reduced against ``expected``, and the largest deviation.
    """
    base = data.base
    t = np.asarray(immerse(data, base, A(base), quad_tol))
    # choose the lattice representative closest to the expected translation
    t = _nearest_rep(t, np.asarray(expected.translation), lat)
    found = Isometry(expected.linear, LorentzVec.of(t))
    worst = reduce_mod_lattice(t - np.asarray(expected.translation), lat)
    for p in points:
        x = np.asarray(immerse(data, base, p, quad_tol))
        y = np.asarray(immerse(data, base, A(p), quad_tol))
        worst = max(worst, reduce_mod_lattice(y - found(x), lat))
    if worst > tol:
        raise SymmetryFailed(f"symmetry lift deviates by {worst:.3g}", deviation=worst)
    return found, worst


def _nearest_rep(t, target, lat, span=3):
    best, arg = np.inf, t
    combos = [np.zeros(3)]
    if len(lat) == 1:
        combos = [k * lat[0] for k in range(-span, span + 1)]
    elif len(lat) == 2:
        combos = [k * lat[0] + m * lat[1] for k in range(-span, span + 1) for m in range(-span, span + 1)]
    for c in combos:
        d = np.linalg.norm(t - c - target)
        if d < best:
            best, arg = d, t - c
    return arg


def end_translation_numeric(spec: FamilySpec, tol: float = 1e-10) -> np.ndarray:
    """Re(2 pi i Res) at the first listed end (numerical residue)."""
    d = spec.data
    p = d.domain.ends[0]
    r = 0.5 * min([abs(complex(p.z) - q) for q in list(d.singular_z) + list(d.domain.finite_branch_points)
                   if abs(complex(p.z) - q) > 1e-12] + [1.0])
    return np.real(2j * math.pi * residue_numeric(d, p, r, tol))
