"""Checks that Weierstrass data on the closed disk (or its double cover)
define an entire maximal immersion of finite type, followed by the
singularity, end and topology reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import SurfacePoint, mirror, phi_pullback_defect
from .errors import MaxSurfError
from .integrator import period
from .lorentz import classify_group, minkowski_inner
from .rational import _is_inf
from .singularities import _local_orders, end_census, singularity_report
from .surface_io import SurfaceModel
from .topology import check_formula, projected_degree


@dataclass
class Check:
    name: str
    passed: bool
    value: float | int | str | None = None
    detail: str = ""

    def to_dict(self):
        v = self.value
        if isinstance(v, (np.floating, np.integer)):
            v = v.item()
        return {"name": self.name, "passed": bool(self.passed), "value": v, "detail": self.detail}


@dataclass
class VerificationReport:
    input: dict = field(default_factory=dict)
    validation: list = field(default_factory=list)
    periods: dict = field(default_factory=dict)
    singularities: dict | None = None
    ends: dict | None = None
    topology: dict | None = None
    group_case: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        ok = all(c.passed for c in self.validation) and not self.errors
        if self.topology is not None:
            ok = ok and self.topology["formula_holds"] and self.topology["rh_holds"]
        ok = ok and all(g.get("matches", True) for g in self.group_case)
        return ok

    def to_dict(self) -> dict:
        return {"input": self.input, "validation": [c.to_dict() for c in self.validation],
                "periods": self.periods, "singularities": self.singularities, "ends": self.ends,
                "topology": self.topology, "group_case": self.group_case,
                "errors": self.errors, "passed": self.passed}


def _samples(model: SurfaceModel, n: int, seed: int, r_lo: float, r_hi: float):
    rng = np.random.default_rng(seed)
    d = model.data
    dom = d.domain
    avoid = list(d.singular_z) + list(dom.finite_branch_points)
    out = []
    while len(out) < n:
        r = rng.uniform(r_lo, r_hi)
        t = rng.uniform(0, 2 * math.pi)
        z = r * complex(math.cos(t), math.sin(t))
        if avoid and min(abs(z - a) for a in avoid) < 1e-3:
            continue
        if dom.is_hyperelliptic:
            w = dom.w_at(z)
            out.append(SurfacePoint(z, w if rng.uniform() < 0.5 else -w))
        else:
            out.append(SurfacePoint(z))
    return out


def check_gauss_map(model: SurfaceModel, n: int = 200, seed: int = 0) -> list[Check]:
    d = model.data
    pts = _samples(model, n, seed, 0.05, 0.999)
    err = 0.0
    inside_max = 0.0
    for p in pts:
        gp = complex(d.g(p.z))
        q = mirror(d.domain, p)
        gq = complex(d.g(q.z)) if not _is_inf(q.z) else d.g.at_infinity()
        err = max(err, abs(gq - 1 / gp.conjugate()) / max(1.0, abs(gq)))
        inside_max = max(inside_max, abs(gp))
    th = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    bdev = float(np.max(np.abs(np.abs(d.g(np.exp(1j * th))) - 1)))
    return [Check("g o J = 1/conj(g)", err < 1e-10, err),
            Check("|g| < 1 inside", inside_max < 1, inside_max),
            Check("|g| = 1 on boundary", bdev < 1e-10, bdev)]


def check_forms(model: SurfaceModel, n: int = 200, seed: int = 1) -> list[Check]:
    d = model.data
    dom = d.domain
    pts = _samples(model, n, seed, 0.8, 0.99)
    defect = max(phi_pullback_defect(d, p) for p in pts)
    # poles inside the closed disk must be ends
    bad = []
    ends = [z for z in dom.end_z if not _is_inf(z)]
    for a in d.singular_z:
        if abs(a) > 1 + 1e-9:
            continue
        if any(abs(a - e) < 1e-9 for e in ends):
            continue
        branch = dom.is_hyperelliptic and dom.is_branch(a)
        if min(_local_orders(d, a, branch)) < 0:
            bad.append(complex(a))
    # common zeros of Phi on the boundary circle
    on = []
    for a, _ in d.components[2].divisor[0]:
        if abs(abs(a) - 1) < 1e-9 and min(_local_orders(d, a, False)) > 0:
            on.append(complex(a))
    return [Check("J*Phi = -conj(Phi)", defect < 1e-8, defect),
            Check("Phi holomorphic away from ends", not bad, len(bad), str(bad) if bad else ""),
            Check("Phi has no zeros on boundary", not on, len(on))]


def lattice_vectors(model: SurfaceModel, tol: float = 1e-10) -> list[np.ndarray]:
    return [np.asarray(period(model.data, model.cycles[n], tol).real_part) for n in model.lattice_cycles]


def check_periods(model: SurfaceModel, tol: float = 1e-10):
    d = model.data
    checks = []
    out = {"boundary": {}, "lattice": {}}
    from .integrator import PathSpec

    worst = 0.0
    for c in d.domain.boundary_circles:
        loop = PathSpec.circle(0j, 1.0, turns=c.turns, base_w=c.w_label)
        pr = period(d, loop, tol)
        out["boundary"][str(c.index)] = pr.to_dict()
        worst = max(worst, float(np.max(np.abs(np.asarray(pr.real_part)))))
    checks.append(Check("boundary real periods vanish", worst < 1e-8, worst))
    lat = []
    for n in model.lattice_cycles:
        pr = period(d, model.cycles[n], tol)
        out["lattice"][n] = pr.to_dict()
        lat.append(np.asarray(pr.real_part))
    rank = int(np.linalg.matrix_rank(np.array(lat), tol=1e-8)) if lat else 0
    checks.append(Check("lattice rank matches declared rank", rank == model.rank, rank))
    spacelike = all(minkowski_inner(v, v) > 1e-12 for v in lat)
    checks.append(Check("translations are spacelike", spacelike, None))
    out["translations"] = [v.tolist() for v in lat]
    return checks, out, lat


def check_rank_conditions(model: SurfaceModel, ends_report) -> list[Check]:
    r = len(ends_report.ends)
    checks = [Check("r(G) < 2 iff ends exist", (model.rank < 2) == (r > 0), r)]
    if model.rank == 0:
        ok = all(e.pole_order >= 2 for e in ends_report.ends)
        checks.append(Check("rank 0: poles of order >= 2 at ends", ok, None))
    elif model.rank == 1:
        ok = all(e.pole_order == 1 for e in ends_report.ends)
        checks.append(Check("rank 1: simple poles at ends", ok, None))
    return checks


def group_cases(model: SurfaceModel, lat, n_points: int = 50, tol: float = 1e-7) -> list[dict]:
    """Verify the family's symmetry lifts and classify its quotient groups."""
    from .families import build_family, expected_lifts, sample_points, verify_symmetry_lift

    fam = model.family
    spec = build_family(fam["name"], **fam.get("params", {}))
    pts = sample_points(spec, n_points, seed=7)
    iso, out = {}, []
    for s in expected_lifts(spec, lat):
        found, dev = verify_symmetry_lift(spec.data, s.A, s.expected, lat, pts, tol)
        iso[s.name] = found
        out.append({"lift": s.name, "deviation": dev, "isometry": found.to_dict()})
    for g in spec.groups:
        gc = classify_group(g.generators(iso, lat), 1e-7)
        out.append({"group": g.label, "case": gc.case.value, "expected": g.expected_case.value,
                    "matches": gc.case is g.expected_case, "parameters": gc.parameters})
    return out


def validate(model: SurfaceModel, *, with_groups: bool = False, tol: float = 1e-10,
             convention: str = "multiplicity_minus_one") -> VerificationReport:
    from .surface_io import surface_to_dict

    rep = VerificationReport(input=surface_to_dict(model))
    try:
        rep.validation += check_gauss_map(model)
        rep.validation += check_forms(model)
        checks, rep.periods, lat = check_periods(model, tol)
        rep.validation += checks
        sing = singularity_report(model.data, convention)
        ends = end_census(model.data, model.rank, lat[0] if model.rank == 1 and lat else None)
        rep.singularities, rep.ends = sing.to_dict(), ends.to_dict()
        rep.validation += check_rank_conditions(model, ends)
        rep.validation.append(Check("Deg(g) by winding equals root count", sing.Deg_g == sing.Deg_g_oracle, sing.Deg_g))
        rep.validation.append(Check("every lightlike singularity is conelike",
                                    all(c["conelike"] for c in sing.lightlike), sing.k1))
        if model.xi0 is not None:
            deg_h = est = None
            if model.rank == 2 and len(lat) == 2:
                est = projected_degree(model.data, lat)
                deg_h = int(round(est))
            nbp = len(model.data.domain.branch_points) if model.data.domain.is_hyperelliptic else None
            topo = check_formula(sing, ends, model.xi0, model.rank, deg_h, est, nbp)
            rep.topology = topo.to_dict()
            rep.validation.append(Check("double genus consistent with branch points", topo.genus_consistent,
                                        topo.double_genus))
        if with_groups and model.family:
            rep.group_case = group_cases(model, lat)
    except MaxSurfError as exc:
        rep.errors.append(f"{type(exc).__name__}: {exc}")
    return rep
