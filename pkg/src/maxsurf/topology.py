"""The topological formula k1 - chi = V_s + V_l/2 + Deg(g) - W_inf and its
Riemann-Hurwitz decomposition, evaluated from the censuses as integers."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .domain import WeierstrassData
from .errors import OddVl, RankMismatch
from .singularities import EndReport, SingularityReport


@dataclass
class TopologyReport:
    xi0: int
    k1: int
    k2: int
    r: int
    rank: int
    chi: int
    V_s: int
    V_l: int
    Deg_g: int
    W_infinity: int
    lhs: int
    rhs: int
    formula_holds: bool
    double_genus: int
    rh_lhs: int
    rh_rhs: int
    rh_holds: bool
    B_s: int = 0
    B_l: int = 0
    B_inf: int = 0
    deg_h: int = 0
    deg_h_approximate: bool = False
    deg_h_estimate: float | None = None
    double_genus_from_branch_points: int | None = None
    genus_consistent: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def _check_inputs(sing: SingularityReport, ends: EndReport, rank: int):
    if sing.V_l % 2:
        raise OddVl(f"V_l = {sing.V_l} is odd")
    if rank not in (0, 1, 2):
        raise RankMismatch(f"rank {rank} is not 0, 1 or 2")
    r = len(ends.ends)
    if rank == 2 and r:
        raise RankMismatch("rank two surfaces have no ends")
    if rank < 2 and not r:
        raise RankMismatch("rank below two requires ends")
    if ends.rank != rank:
        raise RankMismatch(f"end census was computed for rank {ends.rank}, not {rank}")


def check_formula(sing: SingularityReport, ends: EndReport, xi0: int, rank: int,
                  deg_h: int | None = None, deg_h_estimate: float | None = None,
                  branch_point_count: int | None = None) -> TopologyReport:
    """Evaluate both sides of the topological formula and of its
    Riemann-Hurwitz decomposition."""
    _check_inputs(sing, ends, rank)
    k1, k2 = sing.k1, sing.k2
    chi = 2 - 2 * xi0
    lhs = k1 - chi
    rhs = sing.V_s + sing.V_l // 2 + sing.Deg_g - ends.W_infinity
    chi_l, chi_r, B_s, B_l, B_inf, dh = riemann_hurwitz_decompose(sing, ends, xi0, rank, deg_h)
    dg = 2 * xi0 + k1 - 1
    from_bp = None
    ok = True
    if branch_point_count is not None:
        if branch_point_count == 0:
            from_bp = 0
        else:
            from_bp = (branch_point_count - 2) // 2
        ok = from_bp == dg
    return TopologyReport(
        xi0=xi0, k1=k1, k2=k2, r=len(ends.ends), rank=rank, chi=chi, V_s=sing.V_s, V_l=sing.V_l,
        Deg_g=sing.Deg_g, W_infinity=ends.W_infinity, lhs=lhs, rhs=rhs, formula_holds=lhs == rhs,
        double_genus=dg, rh_lhs=chi_l, rh_rhs=chi_r, rh_holds=chi_l == chi_r, B_s=B_s, B_l=B_l,
        B_inf=B_inf, deg_h=dh, deg_h_approximate=rank == 2, deg_h_estimate=deg_h_estimate,
        double_genus_from_branch_points=from_bp, genus_consistent=ok)


def riemann_hurwitz_decompose(sing: SingularityReport, ends: EndReport, xi0: int, rank: int,
                              deg_h: int | None = None):
    """(chi, chi_star * Deg(h) - B, B_s, B_l, B_inf, Deg(h)).

    Deg(h) is the sum of multiplicities (rank 0), the sum over positive
    signature ends (rank 1), or must be supplied for rank 2.
    """
    _check_inputs(sing, ends, rank)
    B_s = sing.V_s
    B_l = sing.Deg_g + sing.V_l // 2 - sing.k1
    if rank < 2:
        B_inf = sum(e.multiplicity - 1 for e in ends.ends)
        chi_star = 2
        if rank == 0:
            dh = sum(e.multiplicity for e in ends.ends)
        else:
            dh = sum(e.multiplicity for e in ends.ends if e.signature == 1)
    else:
        B_inf = 0
        chi_star = 0
        dh = 1 if deg_h is None else deg_h
    if deg_h is not None:
        dh = deg_h
    chi = 2 - 2 * xi0
    return chi, chi_star * dh - (B_s + B_l + B_inf), B_s, B_l, B_inf, dh


def projected_degree(data: WeierstrassData, lattice, n_r: int = 96, n_theta: int = 256) -> float:
    """Covering degree of the projection onto the lattice plane, estimated as
    (projected area of the image of the disk) / (area of a lattice cell).

    The area density against dx dy is (|phi3|^2 / 4)(1/|g|^2 - |g|^2),
    summed over both sheets on hyperelliptic domains (|w| does not depend on
    the sheet).  The estimate is approximate near branch points.
    """
    v1, v2 = (np.asarray(v, float) for v in lattice)
    n = np.cross(v1, v2)
    cell = float(np.linalg.norm(n))
    # density above is the area projected to x3 = 0; rescale to the lattice plane
    scale = 1.0 / abs(n[2] / cell) if abs(n[2]) > 1e-12 else np.inf
    x, wts = np.polynomial.legendre.leggauss(n_r)
    # radial breakpoints at singular radii to keep panels smooth
    radii = sorted({0.0, 1.0} | {float(abs(p)) for p in data.domain.finite_branch_points if abs(p) < 1}
                   | {float(abs(p)) for p in data.singular_z if abs(p) < 1})
    th = (np.arange(n_theta) + 0.5) * 2 * np.pi / n_theta
    total = 0.0
    for lo, hi in zip(radii, radii[1:]):
        r = lo + (hi - lo) * (x + 1) / 2
        wr = wts * (hi - lo) / 2
        R, T = np.meshgrid(r, th, indexing="ij")
        z = R * np.exp(1j * T)
        q = np.abs(data.q(z)) ** 2
        if data.w_power == -1:
            q = q / np.abs(data.domain.curve_rhs(z))
        ag2 = np.abs(data.g(z)) ** 2
        dens = q / 4 * (1 / ag2 - ag2)
        total += float(np.sum(dens * R * wr[:, None]) * 2 * np.pi / n_theta)
    sheets = 2 if data.domain.is_hyperelliptic else 1
    return sheets * total * scale / cell
