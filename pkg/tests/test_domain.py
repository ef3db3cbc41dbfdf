import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxsurf.domain import (
    DomainSpec, SurfacePoint, continue_sheet, eval_phi, metric_factor, mirror, phi_pullback_defect,
    unit_circle_path, weierstrass,
)
from maxsurf.errors import BranchTooClose, OffCurve, PoleHit
from maxsurf.rational import INF, RationalFn


def hyper(rhs_num, rhs_den=(1.0,)):
    return DomainSpec("HyperellipticDisk", RationalFn(rhs_num, rhs_den))


def test_kind_consistency():
    with pytest.raises(ValueError):
        DomainSpec("HyperellipticDisk")
    with pytest.raises(ValueError):
        DomainSpec("PuncturedClosedDisk", RationalFn([1, 1]))
    with pytest.raises(ValueError):
        hyper([-1, 0, 1])  # branch points at +-1 on the unit circle


def test_branch_points_include_infinity():
    d = hyper([-0.25, 0, 0, 1])  # z^3 - 1/4: three finite roots, odd degree
    assert any(np.isinf(abs(b)) for b in d.branch_points)
    assert len(d.finite_branch_points) == 3


def test_point_checks_curve():
    d = hyper([-0.25, 0, 1])
    p = d.point(0.1)
    assert abs(p.w ** 2 - (0.01 - 0.25)) < 1e-14
    with pytest.raises(OffCurve):
        d.check_point(SurfacePoint(0.1, 1.0))


def test_monodromy_around_single_branch_point():
    d = hyper([-0.25, 0, 1])  # branch points +-1/2
    path = lambda s: 0.5 + 0.2 * np.exp(2j * np.pi * np.asarray(s))
    w0 = d.w_at(0.7)
    assert abs(continue_sheet(d, path, w0) + w0) < 1e-12
    both = lambda s: 0.8 * np.exp(2j * np.pi * np.asarray(s))
    w0 = d.w_at(0.8)
    assert abs(continue_sheet(d, both, w0) - w0) < 1e-12


@settings(max_examples=40, deadline=None)
@given(c=st.complex_numbers(max_magnitude=0.8, allow_nan=False), r=st.floats(0.05, 0.6))
def test_monodromy_is_plus_or_minus_one(c, r):
    d = hyper([1 / 36, 0, -13 / 36, 0, 1], [1, 0, -13 / 36, 0, 1 / 36])
    bps = d.finite_branch_points
    if np.min(np.abs(np.abs(bps - c) - r)) < 0.02:
        return
    path = lambda s: c + r * np.exp(2j * np.pi * np.asarray(s))
    w0 = d.w_at(c + r)
    w1 = continue_sheet(d, path, w0)
    inside = int(np.sum(np.abs(bps - c) < r))
    assert abs(w1 - (-1) ** inside * w0) < 1e-9 * abs(w0)


def test_branch_too_close():
    d = hyper([-0.25, 0, 1])
    with pytest.raises(BranchTooClose):
        continue_sheet(d, lambda s: 0.5 + 0 * s, d.w_at(0.5 + 1e-3, 1))


def test_boundary_circles():
    d = hyper([1 / 36, 0, -13 / 36, 0, 1], [1, 0, -13 / 36, 0, 1 / 36])
    assert [c.turns for c in d.boundary_circles] == [1, 1]
    odd = hyper([-0.25, 1])  # a single branch point inside, and one at infinity
    assert [c.turns for c in odd.boundary_circles] == [2]
    assert len(DomainSpec("PuncturedClosedDisk").boundary_circles) == 1


def test_mirror_is_involution():
    d = hyper([-0.25, 0, 1], [1, 0, -0.25])
    p = d.point(0.3 + 0.2j)
    q = mirror(d, mirror(d, p))
    assert abs(q.z - p.z) < 1e-14 and abs(q.w - p.w) < 1e-14
    assert mirror(DomainSpec("PuncturedClosedDisk"), SurfacePoint(0j)).is_infinite


def test_eval_phi_components_and_pole():
    d = DomainSpec("PuncturedClosedDisk", end_z=(0.5,))
    data = weierstrass(d, "z", RationalFn([1], [-0.5, 1]))
    z = 0.2 + 0.1j
    p3 = 1 / (z - 0.5)
    phi = eval_phi(data, SurfacePoint(z))
    assert np.allclose(phi, [0.5j * (1 / z - z) * p3, -0.5 * (1 / z + z) * p3, p3])
    with pytest.raises(PoleHit):
        eval_phi(data, SurfacePoint(0.5))
    # zero of g is a pole of phi1 and phi2
    with pytest.raises(PoleHit):
        eval_phi(data, SurfacePoint(0j))


def test_eval_phi_at_infinity_uses_u_chart():
    d = DomainSpec("PuncturedClosedDisk", end_z=(0, INF))
    data = weierstrass(d, "z", RationalFn([1], [0, 1]), base=SurfacePoint(0.5))
    # phi3 = dz/z = -du/u: a pole at infinity
    with pytest.raises(PoleHit):
        eval_phi(data, SurfacePoint(INF))


def test_metric_factor_decays_to_the_singular_circle(families):
    for name, spec in families.items():
        data = spec.data
        for theta in (0.3, 1.9, 4.0):
            vals = []
            for r in (0.9, 0.97, 0.99, 0.999, 0.9999):
                z = r * complex(math.cos(theta), math.sin(theta))
                p = data.domain.point(z)
                vals.append(metric_factor(data, p))
            assert all(a > b for a, b in zip(vals, vals[1:])), name
            assert vals[-1] < 1e-6 * vals[0]


def test_pullback_symmetry(families):
    rng = np.random.default_rng(4)
    for spec in families.values():
        data = spec.data
        for _ in range(20):
            z = rng.uniform(0.6, 0.98) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            p = data.domain.point(z)
            assert phi_pullback_defect(data, p) < 1e-8


def test_gauss_map_mirror_identity(families):
    rng = np.random.default_rng(9)
    for spec in families.values():
        g = spec.data.g
        for _ in range(50):
            z = rng.uniform(0.05, 0.99) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            assert abs(g(1 / np.conj(z)) - 1 / np.conj(g(z))) < 1e-10 * max(1, abs(g(1 / np.conj(z))))
            assert abs(g(z)) < 1


def test_unit_circle_path_closes():
    assert abs(unit_circle_path(0.0) - unit_circle_path(1.0)) < 1e-15
