import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxsurf.domain import DomainSpec, SurfacePoint, weierstrass
from maxsurf.errors import EnclosureViolation, NotClosed, PoleOnPath
from maxsurf.integrator import (
    Arc, Line, PathSpec, immerse, integrate_path, period, residue_analytic, residue_numeric, route,
)
from maxsurf.rational import INF, RationalFn


@pytest.fixture
def polynomial_data():
    # g = z, phi3 = dz: phi1 = i/2 (1/z - z), phi2 = -1/2 (1/z + z)
    return weierstrass(DomainSpec("PuncturedClosedDisk"), "z", RationalFn([1.0]))


def _exact(z0, z1):
    # antiderivatives away from z = 0 along paths not winding around it
    F = lambda z: np.array([0.5j * (np.log(z) - z * z / 2), -0.5 * (np.log(z) + z * z / 2), z])
    return F(z1) - F(z0)


def test_line_integral_matches_antiderivative(polynomial_data):
    res = integrate_path(polynomial_data, PathSpec.line(0.2 + 0.1j, 0.7 - 0.3j))
    assert np.max(np.abs(res.value - _exact(0.2 + 0.1j, 0.7 - 0.3j))) < 1e-12
    assert np.all(res.error < 1e-10)


def test_circle_around_zero_of_g(polynomial_data):
    # the simple pole of phi1, phi2 at 0 gives 2 pi i residues (i/2, -1/2)
    pr = period(polynomial_data, PathSpec.circle(0j, 0.5))
    assert np.allclose(pr.value, [2j * math.pi * 0.5j, 2j * math.pi * -0.5, 0], atol=1e-12)
    assert np.allclose(tuple(pr.real_part), (-math.pi, 0, 0), atol=1e-12)


def test_pole_on_path(polynomial_data):
    with pytest.raises(PoleOnPath):
        integrate_path(polynomial_data, PathSpec.line(-0.5, 0.5))


def test_not_closed(polynomial_data):
    with pytest.raises(NotClosed):
        period(polynomial_data, PathSpec.line(0.1, 0.5))


def test_segments_must_chain():
    with pytest.raises(ValueError):
        PathSpec((Line(0, 1), Line(2, 3)))


def test_reversal_negates(polynomial_data):
    path = PathSpec((Line(0.3, 0.5j), Arc(0j, 0.5, math.pi / 2, math.pi)))
    a = integrate_path(polynomial_data, path).value
    b = integrate_path(polynomial_data, path.reversed()).value
    assert np.max(np.abs(a + b)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(r=st.floats(0.05, 0.45), cx=st.floats(-0.03, 0.03), cy=st.floats(-0.03, 0.03))
def test_homotopy_invariance_family1(r, cx, cy, families):
    # loops around the end b = 0.5 of the Scherk-type family, deformed freely
    data = families["scherk"].data
    c = complex(0.5 + cx, cy)
    if abs(c - 0.5) >= r - 0.01 or abs(c) < 0.95 * r or abs(c) + r > 0.999 or abs(c + 0.5) < r:
        return
    pr = period(data, PathSpec.circle(c, r))
    ref = period(data, PathSpec.circle(0.5, 0.1))
    assert np.max(np.abs(pr.value - ref.value)) < 2e-10


def test_residue_numeric_matches_analytic_scherk(families):
    data = families["scherk"].data
    for pole in (0.5, -0.5):
        num = residue_numeric(data, SurfacePoint(complex(pole)), 0.1)
        ana = residue_analytic(data, SurfacePoint(complex(pole)))
        assert np.max(np.abs(num - ana)) < 1e-9


def test_residue_enclosure_violation(families):
    data = families["scherk"].data
    with pytest.raises(EnclosureViolation):
        residue_numeric(data, SurfacePoint(0.5 + 0j), 1.2)


def test_residue_dz_over_z():
    data = weierstrass(DomainSpec("PuncturedClosedDisk", end_z=(0, INF)), "z", RationalFn([1.0], [0, 1]),
                       base=SurfacePoint(0.5))
    for p in (SurfacePoint(0j), SurfacePoint(INF)):
        num = residue_numeric(data, p, 0.3)
        ana = residue_analytic(data, p)
        assert np.max(np.abs(num - ana)) < 1e-9
    assert np.allclose(residue_analytic(data, SurfacePoint(0j)), [0, 0, 1])
    assert np.allclose(residue_analytic(data, SurfacePoint(INF)), [0, 0, -1])


def test_hyperelliptic_residues_at_sheets(families):
    data = families["riemann"].data
    for p in data.domain.ends:
        num = residue_numeric(data, p, 0.1)
        ana = residue_analytic(data, p)
        assert np.max(np.abs(num - ana)) < 1e-9
        assert abs(abs(num[0]) - 1) < 1e-9 and abs(abs(num[1]) - 1) < 1e-9 and abs(num[2]) < 1e-9


def test_route_avoids_poles(families):
    data = families["scherk"].data
    path = route(data, -0.9, 0.9)
    for seg in path.segments:
        for p in (0.5, -0.5):
            assert seg.distance_to(p) > 1e-3
    assert abs(path.start + 0.9) < 1e-14 and abs(path.end - 0.9) < 1e-14


def test_immerse_is_path_independent_mod_lattice(families, lattices):
    spec = families["scherk"]
    data = spec.data
    v = np.asarray(lattices["scherk"][0])
    p = SurfacePoint(0.5 + 0.3j)
    x = np.asarray(immerse(data, data.base, p))
    direct = integrate_path(data, PathSpec.polyline([0, -0.3j, 0.8 - 0.3j, 0.5 + 0.3j])).value.real
    diff = x - direct
    k = round(diff[0] / v[0])
    assert np.max(np.abs(diff - k * v)) < 1e-9


def test_immerse_from_branch_point_base(families):
    # phi ~ dz / sqrt(z - a) near the branch base, so |X| grows like sqrt(dist)
    data = families["riemann"].data
    x = np.asarray(immerse(data, data.base, data.domain.point(0.2 + 0.3j)))
    assert np.all(np.isfinite(x))
    n4 = np.linalg.norm(np.asarray(immerse(data, data.base, data.domain.point(0.5 + 1e-4))))
    n6 = np.linalg.norm(np.asarray(immerse(data, data.base, data.domain.point(0.5 + 1e-6))))
    assert abs(n4 / n6 - 10) < 0.05


def test_hyperelliptic_requires_base_w(families):
    with pytest.raises(ValueError):
        integrate_path(families["riemann"].data, PathSpec.line(0.1j, 0.2j))
