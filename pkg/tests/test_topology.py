import pytest

from maxsurf.errors import OddVl, RankMismatch
from maxsurf.singularities import EndReport, SingularityReport, end_census, singularity_report
from maxsurf.topology import check_formula, projected_degree, riemann_hurwitz_decompose


def _reports(spec, lat):
    sing = singularity_report(spec.data)
    ends = end_census(spec.data, spec.rank, lat[0] if spec.rank == 1 else None)
    return sing, ends


@pytest.mark.parametrize("name,lhs", [("scherk", -1), ("riemann", 0), ("doubly", 2)])
def test_topological_formula(name, lhs, families, lattices):
    spec = families[name]
    sing, ends = _reports(spec, lattices[name])
    deg_h = None
    if spec.rank == 2:
        deg_h = round(projected_degree(spec.data, lattices[name]))
    rep = check_formula(sing, ends, spec.xi0, spec.rank, deg_h)
    assert rep.lhs == rep.rhs == lhs
    assert rep.formula_holds
    assert rep.rh_lhs == rep.rh_rhs == rep.chi
    assert rep.k2 == 0


def test_deg_h_estimate_for_torus(families, lattices):
    est = projected_degree(families["doubly"].data, lattices["doubly"])
    assert abs(est - 1) < 0.05


def test_double_genus_matches_branch_points(families, lattices):
    spec = families["doubly"]
    sing, ends = _reports(spec, lattices["doubly"])
    rep = check_formula(sing, ends, spec.xi0, 2, 1, None, len(spec.data.domain.branch_points))
    assert rep.double_genus == 3 and rep.double_genus_from_branch_points == 3 and rep.genus_consistent


def test_rank_one_deg_h_counts_positive_ends(families, lattices):
    sing, ends = _reports(families["scherk"], lattices["scherk"])
    chi, rhs, B_s, B_l, B_inf, dh = riemann_hurwitz_decompose(sing, ends, 0, 1)
    assert (chi, rhs, dh, B_s, B_l, B_inf) == (2, 2, 1, 0, 0, 0)


def test_odd_vl_rejected():
    sing = SingularityReport(lightlike=[{"n_q": 1}], V_l=1)
    with pytest.raises(OddVl):
        check_formula(sing, EndReport([], 0, 2), 1, 2)


def test_rank_mismatch(families, lattices):
    sing, ends = _reports(families["scherk"], lattices["scherk"])
    with pytest.raises(RankMismatch):
        check_formula(sing, ends, 0, 2)
    with pytest.raises(RankMismatch):
        check_formula(sing, EndReport([], 0, 1), 0, 1)
