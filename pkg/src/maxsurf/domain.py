"""Conformal support of a maximal surface: the punctured closed disk or a
hyperelliptic double cover ``w^2 = curve_rhs(z)``, together with the
Weierstrass data (g, phi3) and the forms phi1, phi2, phi3 built from them."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import BranchTooClose, ContinuationAmbiguous, OffCurve, PoleHit
from .rational import INF, RationalFn, _is_inf

TAU_POLE = 1e-7
TAU_CURVE = 1e-9
TAU_BRANCH = 1e-6
TAU_G = 1e-10


class DomainKind(str, Enum):
    PUNCTURED_CLOSED_DISK = "PuncturedClosedDisk"
    HYPERELLIPTIC_DISK = "HyperellipticDisk"


@dataclass(frozen=True)
class SurfacePoint:
    z: complex
    w: complex | None = None

    @property
    def is_infinite(self) -> bool:
        return _is_inf(self.z)

    def __repr__(self):
        return f"SurfacePoint(z={self.z!r}, w={self.w!r})"


@dataclass(frozen=True)
class BoundaryCircle:
    """One lift of |z| = 1.  ``w_label`` is the sheet value at z = 1 and
    ``turns`` is how many times z goes round before the lift closes."""

    index: int
    w_label: complex | None
    turns: int = 1

    def start(self) -> SurfacePoint:
        return SurfacePoint(1.0 + 0j, self.w_label)


def sqrt_pick(r2, w_prev):
    """Square root of r2 nearest to w_prev (vectorised)."""
    r = np.sqrt(np.asarray(r2, complex))
    return np.where(np.abs(r - w_prev) <= np.abs(r + w_prev), r, -r)


@dataclass(frozen=True, eq=False)
class DomainSpec:
    kind: DomainKind
    curve_rhs: RationalFn | None = None
    end_z: tuple = ()
    rank_hint: int = 0
    tau_branch: float = TAU_BRANCH

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if self.is_hyperelliptic and self.curve_rhs is None:
            raise ValueError("hyperelliptic domain needs curve_rhs")
        if not self.is_hyperelliptic and self.curve_rhs is not None:
            raise ValueError("curve_rhs given for a non-hyperelliptic domain")
        object.__setattr__(self, "end_z", tuple(INF if _is_inf(z) else complex(z) for z in self.end_z))
        for b in self.branch_points:
            if not _is_inf(b) and abs(abs(b) - 1.0) < 1e-9:
                raise ValueError(f"branch point {b} lies on the unit circle")
        if self.rank_hint not in (0, 1, 2):
            raise ValueError("rank_hint must be 0, 1 or 2")

    @property
    def is_hyperelliptic(self) -> bool:
        return self.kind is DomainKind.HYPERELLIPTIC_DISK

    @cached_property
    def branch_points(self) -> tuple:
        """Zeros and poles of odd order of curve_rhs (``INF`` included)."""
        if not self.is_hyperelliptic:
            return ()
        zeros, poles = self.curve_rhs.divisor
        pts = [a for a, m in zeros + poles if m % 2]
        if self.curve_rhs.order_at(INF) % 2:
            pts.append(INF)
        return tuple(pts)

    @cached_property
    def finite_branch_points(self) -> np.ndarray:
        return np.array([b for b in self.branch_points if not _is_inf(b)], complex)

    def rhs(self, z):
        return self.curve_rhs(z)

    def w_at(self, z, near=None) -> complex:
        """A square root of curve_rhs(z); the one nearest ``near`` if given."""
        r2 = self.curve_rhs(z) if not _is_inf(z) else self.curve_rhs.at_infinity()
        r = cmath.sqrt(r2)
        if near is not None and abs(-r - near) < abs(r - near):
            r = -r
        return r

    def point(self, z, w=None) -> SurfacePoint:
        """Build a SurfacePoint, choosing the principal root when w is None."""
        if not self.is_hyperelliptic:
            return SurfacePoint(INF if _is_inf(z) else complex(z))
        if w is None:
            w = self.w_at(z)
        p = SurfacePoint(INF if _is_inf(z) else complex(z), complex(w))
        self.check_point(p)
        return p

    def check_point(self, p: SurfacePoint) -> None:
        if not self.is_hyperelliptic:
            return
        if p.w is None:
            raise OffCurve("hyperelliptic point needs a w value")
        r2 = self.curve_rhs.at_infinity() if p.is_infinite else self.curve_rhs(p.z)
        if _is_inf(r2) or _is_inf(p.w):
            if _is_inf(r2) and _is_inf(p.w):
                return
            raise OffCurve(f"w mismatch at {p}")
        if abs(p.w * p.w - r2) > TAU_CURVE * (1 + abs(r2)):
            raise OffCurve(f"|w^2 - rhs| = {abs(p.w * p.w - r2):.3g} at {p}")

    def is_branch(self, z, tol: float = 1e-9) -> bool:
        for b in self.branch_points:
            if _is_inf(b) and _is_inf(z):
                return True
            if not _is_inf(b) and not _is_inf(z) and abs(b - z) <= tol * (1 + abs(b)):
                return True
        return False

    @cached_property
    def ends(self) -> tuple[SurfacePoint, ...]:
        """All preimages of the listed end z-values."""
        out = []
        for z in self.end_z:
            if not self.is_hyperelliptic:
                out.append(SurfacePoint(z))
            elif self.is_branch(z):
                out.append(SurfacePoint(z, 0j if not _is_inf(self.w_at(z)) else INF))
            else:
                w = self.w_at(z)
                out.extend([SurfacePoint(z, w), SurfacePoint(z, -w)])
        return tuple(out)

    def expected_preimages(self, z) -> int:
        return 1 if (not self.is_hyperelliptic or self.is_branch(z)) else 2

    @cached_property
    def boundary_circles(self) -> tuple[BoundaryCircle, ...]:
        if not self.is_hyperelliptic:
            return (BoundaryCircle(0, None, 1),)
        w0 = self.w_at(1.0 + 0j)
        w1 = continue_sheet(self, unit_circle_path, w0)
        if abs(w1 - w0) <= 1e-6 * abs(w0):
            return (BoundaryCircle(0, w0, 1), BoundaryCircle(1, -w0, 1))
        return (BoundaryCircle(0, w0, 2),)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "rank_hint": self.rank_hint,
             "ends": [_enc(z) for z in self.end_z]}
        if self.curve_rhs is not None:
            d["curve_rhs"] = self.curve_rhs.to_dict()
        return d


def _enc(z):
    return "inf" if _is_inf(z) else [float(complex(z).real), float(complex(z).imag)]


def unit_circle_path(s):
    return np.exp(2j * np.pi * np.asarray(s))


def mirror(domain: DomainSpec, p: SurfacePoint) -> SurfacePoint:
    """The mirror involution J: z -> 1/conj(z), w -> 1/conj(w)."""
    z = _inv_conj(p.z)
    if not domain.is_hyperelliptic:
        return SurfacePoint(z)
    return SurfacePoint(z, _inv_conj(p.w))


def _inv_conj(z):
    if z is None:
        return None
    if _is_inf(z):
        return 0j
    z = complex(z)
    if z == 0:
        return INF
    return 1.0 / z.conjugate()


def continue_sheet(domain: DomainSpec, path, w_start, *, h0: float = 1 / 32,
                   return_track: bool = False, tau_branch: float | None = None):
    """Analytic continuation of w along ``path`` (a map [0,1] -> z-plane).

    Steps are accepted when w moves by less than half its modulus and a
    half-step check lands on the same root; otherwise the step is halved.
    """
    z_of: Callable = path if callable(path) else path.point
    tb = domain.tau_branch if tau_branch is None else tau_branch
    bps = domain.finite_branch_points
    rhs = domain.curve_rhs

    def near_branch(z):
        return bps.size and np.min(np.abs(bps - z)) < tb

    z0 = complex(z_of(0.0))
    if near_branch(z0):
        raise BranchTooClose(f"path starts within {tb} of a branch point")
    w = complex(w_start)
    r2 = rhs(z0)
    if abs(w * w - r2) > 1e-6 * (1 + abs(r2)):
        raise OffCurve("w_start is not a square root of curve_rhs at the path start")
    w = complex(sqrt_pick(r2, w))
    s, h = 0.0, h0
    track = [(0.0, w)]
    while s < 1.0:
        h = min(h, 1.0 - s)
        s1 = s + h if s + h < 1.0 - 1e-15 else 1.0
        z1 = complex(z_of(s1))
        if near_branch(z1):
            raise BranchTooClose(f"path passes within {tb} of a branch point at s={s1:.6g}")
        w1 = complex(sqrt_pick(rhs(z1), w))
        ok = abs(w1 - w) < 0.5 * abs(w)
        if ok:
            wm = complex(sqrt_pick(rhs(complex(z_of(s + h / 2))), w))
            w1b = complex(sqrt_pick(rhs(z1), wm))
            ok = abs(w1b - w1) <= 1e-12 * abs(w1) and abs(wm - w) < 0.5 * abs(w)
        if ok:
            s, w = s1, w1
            track.append((s, w))
            h *= 1.5
        else:
            h /= 2
            if h < 1e-13:
                raise ContinuationAmbiguous(f"step collapsed at s={s:.6g}")
    return (w, track) if return_track else w


# Weierstrass data ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WeierstrassData:
    """g and phi3 = q(z) w^w_power dz on a domain; phi1, phi2 follow from
    phi1 = i/2 (1/g - g) phi3 and phi2 = -1/2 (1/g + g) phi3."""

    domain: DomainSpec
    g: RationalFn
    q: RationalFn
    w_power: int = 0
    base: SurfacePoint | None = None
    name: str = ""
    params: dict = field(default_factory=dict)
    xi0: int | None = None

    def __post_init__(self):
        if self.w_power not in (0, -1):
            raise ValueError("w_power must be 0 or -1")
        if self.w_power == -1 and not self.domain.is_hyperelliptic:
            raise ValueError("w_power = -1 needs a hyperelliptic domain")
        if not isinstance(self.g, RationalFn) or not isinstance(self.q, RationalFn):
            raise TypeError("g and q must be RationalFn (w-dependent g is not supported)")
        if self.g.is_zero() or self.q.is_zero():
            raise ValueError("g and phi3 must not vanish identically")
        if self.base is not None:
            self.domain.check_point(self.base)

    @cached_property
    def components(self) -> tuple[RationalFn, RationalFn, RationalFn]:
        """Rational parts r_k with phi_k = r_k(z) w^w_power dz."""
        g, q = self.g, self.q
        n, d = g.numerator, g.denominator
        from numpy.polynomial import polynomial as P

        dd_minus = P.polysub(P.polymul(d, d), P.polymul(n, n))
        dd_plus = P.polyadd(P.polymul(d, d), P.polymul(n, n))
        nd = P.polymul(n, d)
        r1 = (RationalFn(0.5j * dd_minus, nd) * q).reduced()
        r2 = (RationalFn(-0.5 * dd_plus, nd) * q).reduced()
        return r1, r2, q.reduced()

    @cached_property
    def singular_z(self) -> np.ndarray:
        """Finite z-values where some phi_k has a pole in the z-chart."""
        pts = []
        for r in self.components:
            pts.extend(a for a, _ in r.divisor[1])
        if self.w_power == -1:
            zeros, _ = self.domain.curve_rhs.divisor
            pts.extend(a for a, _ in zeros)
        uniq: list[complex] = []
        for a in pts:
            if all(abs(a - b) > 1e-9 * (1 + abs(a)) for b in uniq):
                uniq.append(a)
        return np.array(uniq, complex)

    @cached_property
    def _u_components(self):
        return tuple(r.form_in_u_chart() for r in self.components)

    def g_at(self, p: SurfacePoint):
        return self.g(p.z)

    def coeffs(self, z, w=None) -> np.ndarray:
        """Unchecked vectorised (phi1, phi2, phi3)/dz, shape (3, ...)."""
        z = np.asarray(z, complex)
        out = np.array([r(z) for r in self.components])
        if self.w_power == -1:
            out = out / np.asarray(w, complex)
        return out


def eval_phi(data: WeierstrassData, p: SurfacePoint, chart: str = "z") -> np.ndarray:
    """(phi1, phi2, phi3) against dz at p (against du, u = 1/z, when p is
    the point at infinity or ``chart='u'`` and p.z holds the u value)."""
    data.domain.check_point(p)
    if p.is_infinite or chart == "u":
        u = 0j if p.is_infinite else complex(p.z)
        if abs(u) < TAU_POLE:
            vals = []
            for r in data._u_components:
                if r.order_at(0j) < 0:
                    raise PoleHit("phi has a pole at infinity")
                vals.append(r(u))
        else:
            vals = [r(u) for r in data._u_components]
        out = np.array(vals, complex)
        if data.w_power == -1:
            if p.w == 0:
                raise PoleHit("1/w pole at a branch point")
            out = out * 0 if _is_inf(p.w) else out / p.w
        return out
    z = complex(p.z)
    sing = data.singular_z
    if sing.size and np.min(np.abs(sing - z)) < TAU_POLE:
        raise PoleHit(f"z={z} is within {TAU_POLE} of a pole of Phi")
    return data.coeffs(z, p.w)


def metric_factor(data: WeierstrassData, p: SurfacePoint) -> float:
    """Conformal factor ((|phi3|/2)(1/|g| - |g|))^2 against |dz|^2."""
    phi = eval_phi(data, p)
    ag = abs(data.g(p.z))
    if ag == 0:
        raise PoleHit("g = 0")
    return float((abs(phi[2]) / 2 * (1 / ag - ag)) ** 2)


def _rat(x) -> RationalFn:
    return x if isinstance(x, RationalFn) else RationalFn(x)


def weierstrass(domain: DomainSpec, g, q, w_power: int = 0, **kw) -> WeierstrassData:
    """Convenience constructor accepting ``'z'`` for g."""
    if isinstance(g, str):
        if g.strip() != "z":
            raise ValueError("g must be 'z' or a rational function")
        g = RationalFn.identity()
    return WeierstrassData(domain, _rat(g), _rat(q), w_power, **kw)


def phi_pullback_defect(data: WeierstrassData, p: SurfacePoint, h: float = 1e-6) -> float:
    """max_k |J*phi_k + conj(phi_k)| at p, J* computed with a finite-difference
    derivative of the chart map z -> 1/conj(z)."""
    dom = data.domain
    q = mirror(dom, p)
    phi_q = eval_phi(data, q)
    z = complex(p.z)
    # d(1/conj z)/d(conj z), by central differences along the real axis
    jac = ((1 / (z + h).conjugate()) - (1 / (z - h).conjugate())) / (2 * h)
    pull = phi_q * jac  # coefficient of d(conj z)
    phi_p = eval_phi(data, p)
    scale = 1 + np.max(np.abs(phi_p))
    return float(np.max(np.abs(pull + np.conj(phi_p))) / scale)


def circle_point(r: float, theta: float) -> complex:
    return r * complex(math.cos(theta), math.sin(theta))
