"""Census of singular points and ends.

Lightlike circles: degree of g (m_q), zeros of phi3 (n_q), the conelike test
and its orientation.  Spacelike points: common zeros of Phi inside the disk.
Ends: pole orders, multiplicities and rank-one signatures.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .domain import BoundaryCircle, SurfacePoint, WeierstrassData, continue_sheet, sqrt_pick
from .errors import (
    AnnulusContaminated,
    NonSimpleScherkPole,
    NotUnitModulus,
    ResidueImbalance,
    WindingUnstable,
)
from .integrator import residue_analytic
from .rational import INF, RationalFn, _is_inf

TAU_G = 1e-10
BRANCHING_CONVENTIONS = ("multiplicity_minus_one", "as_printed")


# sampling helpers -------------------------------------------------------------


def _circle(data: WeierstrassData, circle_id: int) -> BoundaryCircle:
    circles = data.domain.boundary_circles
    if not 0 <= circle_id < len(circles):
        raise IndexError(f"no boundary circle {circle_id}; there are {len(circles)}")
    return circles[circle_id]


def circle_samples(data: WeierstrassData, circle_id: int, n: int, radius: float = 1.0):
    """n points theta_k = 2 pi turns k / n on the lift of |z| = radius,
    with w continued from the circle's label (None off hyperelliptic)."""
    c = _circle(data, circle_id)
    th = 2 * np.pi * c.turns * np.arange(n) / n
    z = radius * np.exp(1j * th)
    if not data.domain.is_hyperelliptic:
        return th, z, None
    w0 = data.domain.w_at(radius + 0j, near=c.w_label)
    _, track = continue_sheet(data.domain, lambda s: radius * np.exp(2j * np.pi * c.turns * np.asarray(s)), w0,
                              return_track=True)
    ts = np.array([t[0] for t in track])
    tw = np.array([t[1] for t in track], complex)
    s = np.arange(n) / n
    guess = np.interp(s, ts, tw.real) + 1j * np.interp(s, ts, tw.imag)
    w = sqrt_pick(data.domain.curve_rhs(z), guess)
    return th, z, w


def winding_number(f, radius: float = 1.0, center: complex = 0j, turns: int = 1,
                   n0: int = 64, n_max: int = 1 << 17) -> int:
    """Winding of f around 0 along center + radius e^{i theta}; sampling is
    doubled until three consecutive refinements agree on the same integer."""
    n = n0
    history = []
    while n <= n_max:
        th = 2 * np.pi * turns * np.arange(n + 1) / n
        vals = f(center + radius * np.exp(1j * th))
        if np.any(vals == 0) or not np.all(np.isfinite(vals)):
            raise WindingUnstable("f vanishes or blows up on the sampling circle")
        total = np.sum(np.angle(vals[1:] / vals[:-1])) / (2 * np.pi)
        k = round(total)
        close = abs(total - k) < 0.01
        history.append(k if close else None)
        if len(history) >= 3 and history[-1] is not None and history[-3:] == [k, k, k]:
            return int(k)
        n *= 2
    raise WindingUnstable(f"winding did not stabilise (last estimates {history[-3:]})")


# lightlike circles ---------------------------------------------------------------


def degree_on_circle(data: WeierstrassData, circle_id: int) -> int:
    """m_q: degree of g restricted to the lifted boundary circle."""
    c = _circle(data, circle_id)
    th = np.linspace(0, 2 * np.pi, 257)
    gv = data.g(np.exp(1j * th))
    dev = float(np.max(np.abs(np.abs(gv) - 1.0)))
    if not np.isfinite(dev) or dev > TAU_G:
        raise NotUnitModulus(f"|g| deviates from 1 by {dev:.3g} on the boundary circle")
    return winding_number(data.g, 1.0, turns=c.turns)


def _q_roots_near_circle(data: WeierstrassData):
    zeros, poles = data.q.divisor
    on = [(a, m) for a, m in zeros if abs(abs(a) - 1) <= 1e-9]
    off = [abs(abs(a) - 1) for a, _ in zeros + poles if abs(abs(a) - 1) > 1e-9]
    if data.w_power == -1:
        z2, p2 = data.domain.curve_rhs.divisor
        off += [abs(abs(a) - 1) for a, _ in z2 + p2]
    return on, off


def zero_count_on_circle(data: WeierstrassData, circle_id: int) -> int:
    """n_q: zeros of phi3 on the lifted circle, by the argument principle on
    a thin annulus around |z| = 1 that contains no off-circle roots."""
    c = _circle(data, circle_id)
    on, off = _q_roots_near_circle(data)
    gap = min(off) if off else 0.5
    if gap < 1e-6:
        raise AnnulusContaminated(f"a root lies {gap:.3g} from the unit circle")
    rho = 1.0 - min(0.5, gap / 2)
    q = data.q
    outer = winding_number(q, 1.0 / rho, turns=c.turns)
    inner = winding_number(q, rho, turns=c.turns)
    count = outer - inner
    # oracle: root solver
    oracle = c.turns * sum(m for _, m in on)
    if count != oracle:
        raise AnnulusContaminated(f"argument principle gives {count} but the root solver gives {oracle}")
    return count


def conelike_test(data: WeierstrassData, circle_id: int) -> dict:
    """conelike iff m_q = 1 and n_q = 0.  Orientation is read off the mean
    inward derivative of x3: a surface rising away from the circle is
    asymptotic to the top half of the light cone (downward pointing)."""
    m = degree_on_circle(data, circle_id)
    n = zero_count_on_circle(data, circle_id)
    th, z, w = circle_samples(data, circle_id, 512)
    phi3 = data.q(z) * (1.0 / w if data.w_power == -1 else 1.0)
    # d/dr pointing inward: dz = -e^{i theta} dr
    dx3 = np.real(phi3 * (-np.exp(1j * th)))
    mean = float(np.mean(dx3))
    return {"conelike": bool(m == 1 and n == 0),
            "orientation": "Downward" if mean > 0 else "Upward",
            "m_q": m, "n_q": n, "mean_inward_dx3": mean}


def degree_by_roots(data: WeierstrassData) -> int:
    """Deg(g) oracle: zeros minus poles of g in the open disk, counted on
    every sheet.  Equals the sum of m_q by the argument principle."""
    zeros, poles = data.g.divisor
    dom = data.domain

    def mult(a):
        return dom.expected_preimages(a)

    z = sum(m * mult(a) for a, m in zeros if abs(a) < 1)
    p = sum(m * mult(a) for a, m in poles if abs(a) < 1)
    return z - p


# local orders ------------------------------------------------------------------------


def _local_orders(data: WeierstrassData, z0, branch: bool) -> list[int]:
    """Vanishing order (negative for poles) of phi_k in a local parameter at
    a point over z0; at branch points the parameter is t with z - z0 = t^2
    (or 1/z = t^2 at infinity)."""
    if _is_inf(z0):
        comps = [r.form_in_u_chart() for r in data.components]
        rhs = data.domain.curve_rhs.in_u_chart() if data.domain.is_hyperelliptic else None
        c = 0j
    else:
        comps = list(data.components)
        rhs = data.domain.curve_rhs
        c = complex(z0)
    out = []
    for r in comps:
        if r.is_zero():
            out.append(10**6)
            continue
        o = r.order_at(c)
        if data.w_power == -1:
            ow = rhs.order_at(c)  # order of w^2 in the chart coordinate
            if branch:
                out.append(2 * o - ow + 1)
            else:
                out.append(o - ow // 2)
        else:
            out.append(2 * o + 1 if branch else o)
    return out


def spacelike_census(data: WeierstrassData) -> list[dict]:
    """Common zeros of (phi1, phi2, phi3) in the open unit disk."""
    dom = data.domain
    cand = []
    for r in data.components:
        cand.extend(a for a, _ in r.divisor[0] if abs(a) < 1 - 1e-9)
    if dom.is_hyperelliptic:
        cand.extend(b for b in dom.branch_points if not _is_inf(b) and abs(b) < 1)
    uniq: list[complex] = []
    for a in cand:
        if all(abs(a - b) > 1e-8 for b in uniq):
            uniq.append(a)
    out = []
    for a in sorted(uniq, key=lambda x: (x.real, x.imag)):
        branch = dom.is_hyperelliptic and dom.is_branch(a)
        n = min(_local_orders(data, a, branch))
        if n > 0:
            copies = dom.expected_preimages(a)
            out.append({"location": [a.real, a.imag], "n_j": int(n), "preimages": int(copies)})
    return out


# ends -----------------------------------------------------------------------------


@dataclass
class EndInfo:
    location: object
    w: object
    pole_order: int
    omega_pole_order: int
    multiplicity: int
    signature: int | None
    scherk: bool
    real_period: list

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class EndReport:
    ends: list
    W_infinity: int
    rank: int
    translation: list | None = None
    residue_balance: float = 0.0

    def to_dict(self) -> dict:
        return {"ends": [e.to_dict() for e in self.ends], "W_infinity": self.W_infinity,
                "rank": self.rank, "translation": self.translation,
                "residue_balance": self.residue_balance}


def _omega_order(data: WeierstrassData, p: SurfacePoint, branch: bool) -> int:
    om = data.q / data.g
    if p.is_infinite:
        r = om.form_in_u_chart()
        c = 0j
        rhs = data.domain.curve_rhs.in_u_chart() if data.domain.is_hyperelliptic else None
    else:
        r, c, rhs = om, complex(p.z), data.domain.curve_rhs
    o = r.order_at(c)
    if data.w_power == -1:
        ow = rhs.order_at(c)
        return -(2 * o - ow + 1) if branch else -(o - ow // 2)
    return -(2 * o + 1) if branch else -o


def _enc_point(p: SurfacePoint):
    z = "inf" if p.is_infinite else [complex(p.z).real, complex(p.z).imag]
    w = None if p.w is None else ("inf" if _is_inf(p.w) else [complex(p.w).real, complex(p.w).imag])
    return z, w


def end_census(data: WeierstrassData, rank: int | None = None, translation=None) -> EndReport:
    """Pole orders and multiplicities of the ends; for rank one also the
    signatures, taken from the sign of each end's real period against the
    lattice generator (the generator defaults to the shortest end period)."""
    dom = data.domain
    rank = dom.rank_hint if rank is None else rank
    infos = []
    periods = []
    for p in dom.ends:
        branch = dom.is_hyperelliptic and dom.is_branch(p.z)
        orders = _local_orders(data, p.z, branch)
        ordphi = -min(orders)
        if branch:
            per = np.zeros(3)
        else:
            res = residue_analytic(data, p)
            per = np.real(2j * math.pi * res)
        periods.append(per)
        infos.append((p, ordphi, _omega_order(data, p, branch)))
    bal = float(np.max(np.abs(np.sum(periods, axis=0)))) if periods else 0.0
    if bal > 1e-8:
        raise ResidueImbalance(f"real end periods sum to {bal:.3g}")
    v = None
    if rank == 1 and periods:
        if translation is not None:
            v = np.asarray(translation, float)
        else:
            nz = [q for q in periods if np.linalg.norm(q) > 1e-9]
            v = min(nz, key=np.linalg.norm) if nz else None
    ends = []
    for (p, ordphi, oom), per in zip(infos, periods):
        z, w = _enc_point(p)
        sig = None
        if rank == 0:
            mult = ordphi - 1
        elif rank == 1:
            if oom != 1:
                raise NonSimpleScherkPole(f"omega = phi3/g has a pole of order {oom} at {z}")
            if v is None:
                raise ResidueImbalance("rank one but no end carries a period")
            ratio = float(np.dot(per, v) / np.dot(v, v))
            mult = int(round(abs(ratio)))
            if mult < 1 or abs(abs(ratio) - mult) > 1e-6 or np.linalg.norm(per - ratio * v) > 1e-6:
                raise ResidueImbalance(f"end period {per} is not an integer multiple of {v}")
            sig = 1 if ratio > 0 else -1
        else:
            mult = ordphi - 1
        ends.append(EndInfo(z, w, int(ordphi), int(oom), int(mult), sig,
                            bool(rank == 1 and mult == 1), [float(x) for x in per]))
    if rank == 1:
        s = sum(e.signature * e.multiplicity for e in ends)
        if s != 0:
            raise ResidueImbalance(f"sum of signed multiplicities is {s}")
    if rank == 0:
        W = sum(e.multiplicity + 1 for e in ends)
    elif rank == 1:
        W = len(ends)
    else:
        W = 0
    return EndReport(ends, W, rank, None if v is None else [float(x) for x in v], bal)


# full report ------------------------------------------------------------------------


@dataclass
class SingularityReport:
    lightlike: list = field(default_factory=list)
    spacelike: list = field(default_factory=list)
    V_s: int = 0
    V_l: int = 0
    Deg_g: int = 0
    Deg_g_oracle: int = 0
    convention: str = BRANCHING_CONVENTIONS[0]

    @property
    def k1(self) -> int:
        return len(self.lightlike)

    @property
    def k2(self) -> int:
        return len(self.spacelike)

    def to_dict(self) -> dict:
        return {"lightlike": self.lightlike, "spacelike": self.spacelike, "V_s": self.V_s,
                "V_l": self.V_l, "Deg_g": self.Deg_g, "Deg_g_oracle": self.Deg_g_oracle,
                "k1": self.k1, "k2": self.k2, "branching_convention": self.convention}


def singularity_report(data: WeierstrassData, convention: str = BRANCHING_CONVENTIONS[0]) -> SingularityReport:
    if convention not in BRANCHING_CONVENTIONS:
        raise ValueError(f"convention must be one of {BRANCHING_CONVENTIONS}")
    light = []
    for c in data.domain.boundary_circles:
        t = conelike_test(data, c.index)
        m, n = t["m_q"], t["n_q"]
        bn = n // 2 + m - (1 if convention == BRANCHING_CONVENTIONS[0] else 0)
        light.append({"circle": c.index, "m_q": m, "n_q": n, "branching_number": bn,
                      "conelike": t["conelike"], "orientation": t["orientation"]})
    space = spacelike_census(data)
    V_s = sum(s["n_j"] * s["preimages"] for s in space)
    V_l = sum(c["n_q"] for c in light)
    return SingularityReport(light, space, V_s, V_l, sum(c["m_q"] for c in light),
                             degree_by_roots(data), convention)


def report_json(sing: SingularityReport, ends: EndReport) -> str:
    return json.dumps({"singularities": sing.to_dict(), "ends": ends.to_dict()}, indent=2)


__all__ = [
    "circle_samples", "winding_number", "degree_on_circle", "zero_count_on_circle", "conelike_test",
    "degree_by_roots", "spacelike_census", "end_census", "EndReport", "EndInfo", "SingularityReport",
    "singularity_report", "report_json", "INF", "RationalFn",
]
