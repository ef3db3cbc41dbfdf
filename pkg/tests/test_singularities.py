import numpy as np
import pytest

from maxsurf.domain import DomainSpec, SurfacePoint, weierstrass
from maxsurf.errors import NotUnitModulus, WindingUnstable
from maxsurf.rational import INF, RationalFn
from maxsurf.singularities import (
    conelike_test, degree_by_roots, degree_on_circle, end_census, singularity_report,
    spacelike_census, winding_number, zero_count_on_circle,
)

DISK = DomainSpec("PuncturedClosedDisk")


def test_winding_number_basic():
    assert winding_number(lambda z: z ** 3) == 3
    assert winding_number(lambda z: 1 / z ** 2) == -2
    assert winding_number(lambda z: z - 0.5, radius=0.4) == 0
    assert winding_number(lambda z: z, turns=2) == 2
    with pytest.raises(WindingUnstable):
        winding_number(lambda z: z - 1.0)


def test_degree_on_circle_requires_unit_modulus():
    data = weierstrass(DISK, RationalFn([0, 2]), RationalFn([1]))
    with pytest.raises(NotUnitModulus):
        degree_on_circle(data, 0)


def test_blaschke_degree():
    g = RationalFn.from_roots(zeros=[0, 0.3]) / RationalFn([1, -0.3])  # z (z - 0.3) / (1 - 0.3 z)
    data = weierstrass(DISK, g, RationalFn([1]))
    assert degree_on_circle(data, 0) == 2 == degree_by_roots(data)
    assert not conelike_test(data, 0)["conelike"]


def test_zero_count_with_z2_plus_1():
    data = weierstrass(DISK, "z", RationalFn([1, 0, 1]))
    assert zero_count_on_circle(data, 0) == 2
    t = conelike_test(data, 0)
    assert t["m_q"] == 1 and t["n_q"] == 2 and not t["conelike"]


def test_g_squared_is_not_conelike():
    data = weierstrass(DISK, RationalFn([0, 0, 1]), RationalFn([1]))
    t = conelike_test(data, 0)
    assert t["m_q"] == 2 and not t["conelike"]


def test_spacelike_census_cancellation():
    # phi3 = z dz gives phi1 = i/2 (1 - z^2) dz, nonzero at 0
    assert spacelike_census(weierstrass(DISK, "z", RationalFn([0, 1]))) == []


def test_spacelike_census_common_zero():
    s = spacelike_census(weierstrass(DISK, "z", RationalFn([0, 0, 1])))
    assert len(s) == 1 and s[0]["n_j"] == 1 and s[0]["location"] == [0.0, 0.0]


def test_catenoid_ends():
    dom = DomainSpec("PuncturedClosedDisk", end_z=(0, INF), rank_hint=0)
    data = weierstrass(dom, "z", RationalFn([1], [0, 1]), base=SurfacePoint(0.5))
    rep = end_census(data, 0)
    assert [e.pole_order for e in rep.ends] == [2, 2]
    assert [e.multiplicity for e in rep.ends] == [1, 1]


def test_dz_over_z_squared_orders():
    # with g = z, phi1 ~ dz / z^3 at 0 and all components are at most simple poles at infinity
    dom = DomainSpec("PuncturedClosedDisk", end_z=(0, INF), rank_hint=0)
    data = weierstrass(dom, "z", RationalFn([1], [0, 0, 1]), base=SurfacePoint(0.5))
    rep = end_census(data, 0)
    assert [e.pole_order for e in rep.ends] == [3, 1]


def test_family_censuses(families):
    expected = {"scherk": (1, ["Downward"]), "riemann": (2, ["Upward", "Downward"]),
                "doubly": (2, ["Upward", "Downward"])}
    for name, spec in families.items():
        rep = singularity_report(spec.data)
        k1, orient = expected[name]
        assert rep.k1 == k1 and rep.k2 == 0
        assert all(c["conelike"] and c["m_q"] == 1 and c["n_q"] == 0 for c in rep.lightlike)
        assert [c["orientation"] for c in rep.lightlike] == orient
        assert rep.Deg_g == rep.Deg_g_oracle == k1


def test_branching_conventions(families):
    data = families["scherk"].data
    a = singularity_report(data, "multiplicity_minus_one").lightlike[0]["branching_number"]
    b = singularity_report(data, "as_printed").lightlike[0]["branching_number"]
    assert (a, b) == (0, 1)
    with pytest.raises(ValueError):
        singularity_report(data, "other")


def test_rank_one_ends(families, lattices):
    for name in ("scherk", "riemann"):
        spec = families[name]
        rep = end_census(spec.data, 1, lattices[name][0])
        assert len(rep.ends) == 2
        assert all(e.multiplicity == 1 and e.pole_order == 1 and e.omega_pole_order == 1 for e in rep.ends)
        assert sorted(e.signature for e in rep.ends) == [-1, 1]
        assert sum(e.signature * e.multiplicity for e in rep.ends) == 0
        assert rep.residue_balance < 1e-12


def test_doubly_periodic_has_no_ends(families):
    assert end_census(families["doubly"].data, 2).ends == []


def test_scherk_end_period_closed_form():
    from maxsurf.families import scherk_type

    for b in (0.2, 0.6, 0.9):
        rep = end_census(scherk_type(b).data, 1)
        per = np.array(rep.ends[0].real_period)
        assert np.allclose(per, [np.pi / (2 * b * (b * b + 1)), 0, 0], atol=1e-12)
