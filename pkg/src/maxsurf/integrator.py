"""Path integration of the Weierstrass forms: X = Re of the integral of Phi,
periods over closed loops, residues and the pole-avoiding router."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    TAU_POLE,
    SurfacePoint,
    WeierstrassData,
    continue_sheet,
    metric_factor,  # noqa: F401  (re-exported)
    sqrt_pick,
)
from .errors import EnclosureViolation, NotClosed, PoleOnPath, ToleranceNotReached, Unroutable
from .lorentz import LorentzVec
from .rational import INF, _is_inf, laurent, series_divide, series_sqrt, taylor_shift

DEFAULT_TOL = 1e-10
MAX_DEPTH = 24

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


# path segments --------------------------------------------------------------


@dataclass(frozen=True)
class Line:
    z0: complex
    z1: complex

    def point(self, s):
        return self.z0 + (self.z1 - self.z0) * np.asarray(s)

    def deriv(self, s):
        return np.full(np.shape(s), self.z1 - self.z0, dtype=complex)

    @property
    def start(self):
        return complex(self.z0)

    @property
    def end(self):
        return complex(self.z1)

    def reversed(self):
        return Line(self.z1, self.z0)

    def distance_to(self, p: complex) -> float:
        d = self.z1 - self.z0
        if d == 0:
            return abs(p - self.z0)
        t = min(1.0, max(0.0, ((p - self.z0) * d.conjugate()).real / abs(d) ** 2))
        return abs(self.z0 + t * d - p)


@dataclass(frozen=True)
class Arc:
    """center + radius * exp(i theta), theta from theta0 to theta1."""

    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * np.asarray(s)
        return self.center + self.radius * np.exp(1j * th)

    def deriv(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * np.asarray(s)
        return 1j * (self.theta1 - self.theta0) * self.radius * np.exp(1j * th)

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(1.0))

    def reversed(self):
        return Arc(self.center, self.radius, self.theta1, self.theta0)

    def distance_to(self, p: complex) -> float:
        d = p - self.center
        lo, hi = sorted((self.theta0, self.theta1))
        if hi - lo >= 2 * math.pi - 1e-15:
            return abs(abs(d) - self.radius)
        ang = math.atan2(d.imag, d.real)
        k = math.ceil((lo - ang) / (2 * math.pi))
        ang += 2 * math.pi * k
        if ang <= hi:
            return abs(abs(d) - self.radius)
        return min(abs(p - self.start), abs(p - self.end))


@dataclass(frozen=True)
class PathSpec:
    segments: tuple = ()
    base_w: complex | None = None

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for a, b in zip(segs, segs[1:]):
            if abs(a.end - b.start) > 1e-12 * (1 + abs(a.end)):
                raise ValueError("consecutive segments must share endpoints")

    @property
    def start(self):
        return self.segments[0].start if self.segments else None

    @property
    def end(self):
        return self.segments[-1].end if self.segments else None

    def reversed(self, base_w=None) -> "PathSpec":
        return PathSpec(tuple(s.reversed() for s in self.segments[::-1]), base_w)

    def __add__(self, other: "PathSpec") -> "PathSpec":
        return PathSpec(self.segments + other.segments, self.base_w)

    @classmethod
    def line(cls, z0, z1, base_w=None) -> "PathSpec":
        return cls((Line(complex(z0), complex(z1)),), base_w)

    @classmethod
    def circle(cls, center, radius, *, start_angle=0.0, turns=1, base_w=None) -> "PathSpec":
        """Counterclockwise for turns > 0, clockwise for turns < 0."""
        return cls((Arc(complex(center), float(radius), start_angle, start_angle + 2 * math.pi * turns),), base_w)

    @classmethod
    def polyline(cls, pts, base_w=None) -> "PathSpec":
        pts = [complex(p) for p in pts]
        return cls(tuple(Line(a, b) for a, b in zip(pts, pts[1:])), base_w)


@dataclass(frozen=True)
class IntegralResult:
    value: np.ndarray  # complex, shape (3,)
    error: np.ndarray  # real, shape (3,)
    end_w: complex | None = None

    @property
    def real(self) -> LorentzVec:
        return LorentzVec.of(self.value.real)


@dataclass(frozen=True)
class PeriodResult:
    value: np.ndarray
    real_part: LorentzVec
    estimated_error: np.ndarray

    def to_dict(self) -> dict:
        return {
            "value": [[float(c.real), float(c.imag)] for c in self.value],
            "real_part": list(self.real_part),
            "estimated_error": [float(e) for e in self.estimated_error],
        }


# quadrature -----------------------------------------------------------------


@dataclass
class _Panelizer:
    data: WeierstrassData
    seg: object
    track_s: np.ndarray | None = None
    track_w: np.ndarray | None = None
    evals: int = field(default=0)

    def rule(self, a: float, b: float) -> np.ndarray:
        h = 0.5 * (b - a)
        s = a + h * (_GL_X + 1.0)
        z = self.seg.point(s)
        dz = self.seg.deriv(s)
        w = None
        if self.track_s is not None:
            guess = np.interp(s, self.track_s, self.track_w.real) + 1j * np.interp(s, self.track_s, self.track_w.imag)
            w = sqrt_pick(self.data.domain.curve_rhs(z), guess)
        f = self.data.coeffs(z, w) * dz
        self.evals += s.size
        return h * (f @ _GL_W)


def _adaptive(pan: _Panelizer, tol: float, max_depth: int):
    total = np.zeros(3, complex)
    err = np.zeros(3)
    stack = [(0.0, 1.0, pan.rule(0.0, 1.0), 0)]
    out = []
    while stack:
        a, b, coarse, depth = stack.pop()
        m = 0.5 * (a + b)
        left, right = pan.rule(a, m), pan.rule(m, b)
        fine = left + right
        diff = np.abs(fine - coarse)
        if np.all(diff <= max(tol * (b - a), 1e-300)):
            out.append((a, fine, diff))
            continue
        if depth + 1 >= max_depth:
            raise ToleranceNotReached(
                f"no convergence on [{a:.3g}, {b:.3g}] after {max_depth} halvings",
                estimate=None, error=float(np.max(diff)))
        stack.append((m, b, right, depth + 1))
        stack.append((a, m, left, depth + 1))
    # fixed summation order: by panel start
    for _, v, d in sorted(out, key=lambda t: t[0]):
        total += v
        err += d
    return total, err


def _check_segment(data: WeierstrassData, seg) -> None:
    for p in data.singular_z:
        if data.w_power == -1 and data.domain.is_branch(p):
            continue  # guarded by the sheet continuation
        if seg.distance_to(p) < TAU_POLE:
            raise PoleOnPath(f"segment passes within {TAU_POLE} of the pole {p}")


def integrate_path(data: WeierstrassData, path: PathSpec, tol: float = DEFAULT_TOL,
                   max_depth: int = MAX_DEPTH) -> IntegralResult:
    """Integral of Phi along ``path`` with per-component error <= tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = np.zeros(3, complex)
    err = np.zeros(3)
    w = path.base_w
    dom = data.domain
    if dom.is_hyperelliptic and path.segments:
        if w is None:
            raise ValueError("hyperelliptic paths need base_w")
    nseg = max(len(path.segments), 1)
    for seg in path.segments:
        _check_segment(data, seg)
        pan = _Panelizer(data, seg)
        if dom.is_hyperelliptic:
            w, track = continue_sheet(dom, seg, w, return_track=True)
            pan.track_s = np.array([t[0] for t in track])
            pan.track_w = np.array([t[1] for t in track], complex)
        v, e = _adaptive(pan, tol / nseg, max_depth)
        total += v
        err += e
    return IntegralResult(total, err, w)


# routing ----------------------------------------------------------------------


def _avoid_points(data: WeierstrassData) -> list[complex]:
    pts = list(data.singular_z)
    for b in data.domain.finite_branch_points:
        if all(abs(b - p) > 1e-12 for p in pts):
            pts.append(complex(b))
    return pts


def route(data: WeierstrassData, z0: complex, z1: complex, *, base_w=None) -> PathSpec:
    """Straight segment from z0 to z1 with counterclockwise detours around
    singular points that come too close.

    The detour radius around a point is 0.3 times its distance to the
    nearest other singular point or path endpoint (capped at 0.1).
    """
    z0, z1 = complex(z0), complex(z1)
    if z0 == z1:
        return PathSpec((), base_w)
    pts = _avoid_points(data)
    d = z1 - z0
    L = abs(d)
    hits = []
    for p in pts:
        others = [abs(p - q) for q in pts if q is not p and abs(p - q) > 0] + [abs(p - z0), abs(p - z1)]
        r = min(0.1, 0.3 * min(others))
        if r < 2 * TAU_POLE:
            raise Unroutable(f"no room to detour around {p}")
        t = ((p - z0) * d.conjugate()).real / L**2
        foot = z0 + t * d
        dist = abs(foot - p)
        if 0 < t < 1 and dist < r:
            hits.append((t, p, r, dist))
    if not hits:
        return PathSpec.line(z0, z1, base_w)
    hits.sort(key=lambda h: h[0])
    segs = []
    cur = z0
    u = d / L
    for t, p, r, dist in hits:
        half = math.sqrt(r * r - dist * dist)
        foot = z0 + t * d
        entry, exit_ = foot - half * u, foot + half * u
        if abs(entry - z0) < 1e-12 or abs(exit_ - z1) < 1e-12 or ((entry - z0) / d).real <= ((cur - z0) / d).real:
            raise Unroutable("detour circles overlap the path ends")
        segs.append(Line(cur, entry))
        a0 = math.atan2((entry - p).imag, (entry - p).real)
        a1 = math.atan2((exit_ - p).imag, (exit_ - p).real)
        while a1 <= a0:
            a1 += 2 * math.pi
        arc = Arc(p, r, a0, a1)
        # snap endpoints so consecutive segments match exactly
        segs.append(arc)
        cur = arc.end
    segs.append(Line(cur, z1))
    # rebuild lines to share arc endpoints exactly
    fixed = []
    for i, s in enumerate(segs):
        if isinstance(s, Line) and i > 0:
            s = Line(fixed[-1].end, s.z1)
        if isinstance(s, Line) and i + 1 < len(segs):
            s = Line(s.z0, segs[i + 1].start)
        fixed.append(s)
    return PathSpec(tuple(fixed), base_w)


def _nearest_branch(data: WeierstrassData, z: complex) -> complex:
    bps = data.domain.finite_branch_points
    if bps.size == 0:
        raise Unroutable("no branch point available to switch sheets")
    return complex(bps[np.argmin(np.abs(bps - z))])


def _branch_loop(data: WeierstrassData, z: complex, c: complex, w: complex | None) -> PathSpec:
    """z -> near c -> once around c -> back to z."""
    pts = [q for q in _avoid_points(data) if abs(q - c) > 1e-12]
    sep = min([abs(q - c) for q in pts] + [abs(z - c)])
    eps = min(0.05, 0.25 * sep)
    ang = math.atan2((z - c).imag, (z - c).real) if z != c else 0.0
    others = [abs(q - c) for q in pts]
    if z != c and abs(z - c) < 0.5 * min(others + [math.inf]):
        # z is already close: the circle through z about c is the loop
        return PathSpec.circle(c, abs(z - c), start_angle=ang, base_w=w)
    near = c + eps * complex(math.cos(ang), math.sin(ang))
    to = route(data, z, near, base_w=w)
    loop = PathSpec.circle(c, eps, start_angle=ang)
    # the return leg must retrace the outgoing leg exactly (on the other
    # sheet), otherwise the loop picks up an extra period
    back = to.reversed()
    return PathSpec(to.segments + loop.segments + back.segments, w)


def immerse(data: WeierstrassData, base: SurfacePoint | None, p: SurfacePoint,
            tol: float = DEFAULT_TOL) -> LorentzVec:
    """X(p) = Re of the integral of Phi from ``base`` to ``p``.

    When ``base`` is a branch point and Phi is odd in w the integral is
    taken as minus one half of a loop from p that winds once around the
    base point (the two sheets cancel the integrable singularity).
    """
    return LorentzVec.of(immerse_complex(data, base, p, tol).real)


def immerse_complex(data: WeierstrassData, base: SurfacePoint | None, p: SurfacePoint,
                    tol: float = DEFAULT_TOL) -> np.ndarray:
    base = base if base is not None else data.base
    if base is None:
        raise ValueError("no base point")
    dom = data.domain
    if p.is_infinite or base.is_infinite:
        raise Unroutable("the point at infinity is not reachable in the z-chart")
    if dom.is_hyperelliptic:
        dom.check_point(p)
    if dom.is_hyperelliptic and dom.is_branch(p.z) and complex(p.z) != complex(base.z):
        # integrate to a nearby regular point q, then add half a circle
        # about p: the loop from q around p equals twice the integral q -> p
        c = complex(p.z)
        pts = [q for q in _avoid_points(data) if abs(q - c) > 1e-12]
        r = min([0.05] + [0.25 * abs(q - c) for q in pts])
        qz = c + r * np.exp(0.5j)
        qp = SurfacePoint(qz, dom.w_at(qz))
        loop = PathSpec.circle(c, r, start_angle=0.5, base_w=qp.w)
        if data.w_power != -1:
            raise Unroutable("branch-point target requires Phi odd in w")
        return immerse_complex(data, base, qp, tol / 2) + 0.5 * integrate_path(data, loop, tol / 2).value
    if dom.is_hyperelliptic and dom.is_branch(base.z):
        if data.w_power != -1:
            raise Unroutable("branch-point base requires Phi odd in w")
        if abs(p.z - base.z) < 1e-14:
            return np.zeros(3, complex)
        loop = _branch_loop(data, complex(p.z), complex(base.z), p.w)
        res = integrate_path(data, loop, tol / 2)
        return -0.5 * res.value
    if complex(p.z) == complex(base.z) and (p.w is None or abs(p.w - base.w) < 1e-12 * (1 + abs(p.w))):
        return np.zeros(3, complex)
    path = route(data, base.z, p.z, base_w=base.w)
    res = integrate_path(data, path, tol)
    if dom.is_hyperelliptic and abs(res.end_w - p.w) > 1e-6 * (1 + abs(p.w)):
        c = _nearest_branch(data, complex(p.z))
        fix = _branch_loop(data, complex(p.z), c, res.end_w)
        res2 = integrate_path(data, fix, tol)
        if abs(res2.end_w - p.w) > 1e-6 * (1 + abs(p.w)):
            raise Unroutable("could not reach the requested sheet")
        return res.value + res2.value
    return res.value


# periods and residues -----------------------------------------------------------


def period(data: WeierstrassData, loop: PathSpec, tol: float = DEFAULT_TOL) -> PeriodResult:
    if not loop.segments:
        return PeriodResult(np.zeros(3, complex), LorentzVec(0, 0, 0), np.zeros(3))
    if abs(loop.start - loop.end) > 1e-10 * (1 + abs(loop.start)):
        raise NotClosed("loop does not return to its start point")
    res = integrate_path(data, loop, tol)
    if data.domain.is_hyperelliptic:
        w0 = loop.base_w
        if abs(res.end_w - w0) > 1e-8 * (1 + abs(w0)):
            raise NotClosed("loop does not return to its starting sheet")
    return PeriodResult(res.value, LorentzVec.of(res.value.real), res.error)


def residue_numeric(data: WeierstrassData, pole: SurfacePoint, radius: float,
                    tol: float = DEFAULT_TOL) -> np.ndarray:
    """(1/2 pi i) times the integral of Phi over a small circle about ``pole``."""
    dom = data.domain
    pts = _avoid_points(data)
    if pole.is_infinite:
        R = 1.0 / radius
        inside = [q for q in pts if abs(q) >= R]
        if inside:
            raise EnclosureViolation(f"singular points {inside} lie outside |z| = {R}")
        w = None
        if dom.is_hyperelliptic:
            w = _w_far(dom, pole.w, R)
        loop = PathSpec.circle(0j, R, turns=-1, base_w=w)
    else:
        c = complex(pole.z)
        inside = [q for q in pts if 0 < abs(q - c) <= radius and abs(q - c) > 1e-9 * (1 + abs(c))]
        if inside:
            raise EnclosureViolation(f"singular points {inside} lie inside the circle")
        if dom.is_hyperelliptic and dom.is_branch(c):
            raise EnclosureViolation("residues at branch points need the local parameter")
        w = None
        if dom.is_hyperelliptic:
            w = continue_sheet(dom, lambda s: c + radius * np.asarray(s), pole.w)
        loop = PathSpec.circle(c, radius, base_w=w)
    res = integrate_path(data, loop, tol)
    return res.value / (2j * math.pi)


def _w_far(dom, w_inf, R):
    """Sheet at z = R on the branch whose value at infinity is ``w_inf``."""
    return continue_sheet(dom, lambda s: 1.0 / (1e-3 / R + (1.0 / R - 1e-3 / R) * np.asarray(s)),
                          dom.w_at(R * 1e3, near=w_inf))


def residue_analytic(data: WeierstrassData, pole: SurfacePoint, nterms: int = 12) -> np.ndarray:
    """Residue of Phi at ``pole`` from Laurent series (u-chart at infinity)."""
    dom = data.domain
    out = np.zeros(3, complex)
    comps = data._u_components if pole.is_infinite else data.components
    z0 = 0j if pole.is_infinite else complex(pole.z)
    winv = None
    if data.w_power == -1:
        rhs = dom.curve_rhs.in_u_chart() if pole.is_infinite else dom.curve_rhs
        num = taylor_shift(rhs.numerator, z0)
        den = taylor_shift(rhs.denominator, z0)
        ser = series_divide(num, den, nterms)
        if abs(ser[0]) < 1e-14:
            raise EnclosureViolation("residue at a branch point")
        wser = series_sqrt(ser, nterms, root0=pole.w)
        winv = series_divide([1.0], wser, nterms)
    for k, r in enumerate(comps):
        v, c = laurent(r, z0, nterms)
        if winv is not None:
            c = np.convolve(c, winv)[:nterms]
        idx = -1 - v
        out[k] = c[idx] if 0 <= idx < nterms else 0
    return out


__all__ = [
    "Line", "Arc", "PathSpec", "IntegralResult", "PeriodResult", "integrate_path", "route",
    "immerse", "immerse_complex", "period", "residue_numeric", "residue_analytic", "metric_factor",
    "DEFAULT_TOL", "MAX_DEPTH", "INF", "_is_inf",
]
