"""Rational functions with complex coefficients (ascending degree order),
their zeros and poles, and Laurent expansions used as series oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import RootFindingFailed

TAU_ROOT = 1e-9
INF = complex(math.inf, 0.0)


def _trim(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size == 0:
        return np.zeros(1, complex)
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.zeros(1, complex)
    nz = np.nonzero(np.abs(c) > 1e-15 * scale)[0]
    return c[: nz[-1] + 1].copy()


def poly_roots(c) -> list[tuple[complex, int]]:
    """Roots of an ascending-coefficient polynomial with multiplicities.

    Exact zero roots are split off first; the remaining roots are clustered
    at the relative tolerance ``TAU_ROOT``.
    """
    c = _trim(c)
    if c.size == 1:
        return []
    if not np.all(np.isfinite(c)):
        raise RootFindingFailed("non-finite polynomial coefficients")
    scale = np.max(np.abs(c))
    k0 = 0
    while k0 < c.size - 1 and abs(c[k0]) <= 1e-15 * scale:
        k0 += 1
    out: list[tuple[complex, int]] = []
    if k0:
        out.append((0j, k0))
    rest = c[k0:]
    if rest.size > 1:
        try:
            rts = P.polyroots(rest)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy internals
            raise RootFindingFailed(str(exc)) from exc
        if not np.all(np.isfinite(rts)):
            raise RootFindingFailed("companion eigenvalues did not converge")
        out.extend(_cluster(rts))
    return out


def _cluster(roots, tol: float = TAU_ROOT) -> list[tuple[complex, int]]:
    groups: list[list[complex]] = []
    for r in sorted(roots, key=lambda x: (round(x.real, 6), round(x.imag, 6))):
        for grp in groups:
            ctr = np.mean(grp)
            # multiple roots split like eps**(1/m); widen the window accordingly
            m = len(grp) + 1
            rad = max(tol, (2.2e-16) ** (1.0 / m) * 4) * (1 + abs(ctr))
            if abs(r - ctr) <= rad:
                grp.append(r)
                break
        else:
            groups.append([r])
    return [(complex(np.mean(g)), len(g)) for g in groups]


@dataclass(frozen=True, eq=False)
class RationalFn:
    """numerator(z) / denominator(z), coefficients in ascending degree."""

    numerator: np.ndarray
    denominator: np.ndarray

    def __init__(self, numerator, denominator=(1.0,)):
        num, den = _trim(numerator), _trim(denominator)
        if not np.any(den):
            raise ZeroDivisionError("denominator is identically zero")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls) -> "RationalFn":
        return cls([0.0, 1.0])

    @classmethod
    def const(cls, c) -> "RationalFn":
        return cls([c])

    @classmethod
    def from_roots(cls, zeros=(), poles=(), scale=1.0) -> "RationalFn":
        num = P.polyfromroots(list(zeros)) if len(zeros) else np.ones(1)
        den = P.polyfromroots(list(poles)) if len(poles) else np.ones(1)
        return cls(np.asarray(num, complex) * scale, den)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "RationalFn":
        return other if isinstance(other, RationalFn) else RationalFn([other])

    def __add__(self, other):
        o = self._coerce(other)
        num = P.polyadd(P.polymul(self.numerator, o.denominator), P.polymul(o.numerator, self.denominator))
        return RationalFn(num, P.polymul(self.denominator, o.denominator))

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFn(P.polymul(self.numerator, o.numerator), P.polymul(self.denominator, o.denominator))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def reciprocal(self) -> "RationalFn":
        if not np.any(self.numerator):
            raise ZeroDivisionError("reciprocal of the zero function")
        return RationalFn(self.denominator, self.numerator)

    def derivative(self) -> "RationalFn":
        n, d = self.numerator, self.denominator
        num = P.polysub(P.polymul(P.polyder(n), d), P.polymul(n, P.polyder(d)))
        return RationalFn(num, P.polymul(d, d))

    # evaluation -------------------------------------------------------------

    @property
    def deg_num(self) -> int:
        return 0 if not np.any(self.numerator) else self.numerator.size - 1

    @property
    def deg_den(self) -> int:
        return self.denominator.size - 1

    def is_zero(self) -> bool:
        return not np.any(self.numerator)

    def __call__(self, z):
        if np.isscalar(z) and _is_inf(z):
            return self.at_infinity()
        z = np.asarray(z, dtype=complex)
        return P.polyval(z, self.numerator) / P.polyval(z, self.denominator)

    def at_infinity(self) -> complex:
        if self.is_zero():
            return 0j
        d = self.deg_den - self.deg_num
        if d > 0:
            return 0j
        if d < 0:
            return INF
        return complex(self.numerator[-1] / self.denominator[-1])

    def in_u_chart(self) -> "RationalFn":
        """f(1/u) as a rational function of u."""
        dn, dd = self.deg_num, self.deg_den
        num = self.numerator[::-1]
        den = self.denominator[::-1]
        if dd >= dn:
            num = np.concatenate([np.zeros(dd - dn, complex), num])
        else:
            den = np.concatenate([np.zeros(dn - dd, complex), den])
        return RationalFn(num, den)

    def form_in_u_chart(self) -> "RationalFn":
        """Coefficient of du for the 1-form f(z) dz, with z = 1/u."""
        return self.in_u_chart() * RationalFn([-1.0], [0.0, 0.0, 1.0])

    # zeros / poles ------------------------------------------------------------

    @cached_property
    def _raw_zeros(self):
        return [] if self.is_zero() else poly_roots(self.numerator)

    @cached_property
    def _raw_poles(self):
        return poly_roots(self.denominator)

    @cached_property
    def divisor(self) -> tuple[list[tuple[complex, int]], list[tuple[complex, int]]]:
        """Finite zeros and poles with common roots cancelled."""
        zs = [list(x) for x in self._raw_zeros]
        ps = [list(x) for x in self._raw_poles]
        for z in zs:
            for p in ps:
                if z[1] and p[1] and abs(z[0] - p[0]) <= max(TAU_ROOT, 1e-7) * (1 + abs(z[0])):
                    k = min(z[1], p[1])
                    z[1] -= k
                    p[1] -= k
        zeros = [(complex(a), int(m)) for a, m in zs if m > 0]
        poles = [(complex(a), int(m)) for a, m in ps if m > 0]
        return zeros, poles

    def order_at(self, z0) -> int:
        """Valuation at z0: positive for zeros, negative for poles."""
        if _is_inf(z0):
            return self.deg_den - self.deg_num
        zeros, poles = self.divisor
        tol = max(TAU_ROOT, 1e-7) * (1 + abs(z0))
        o = sum(m for a, m in zeros if abs(a - z0) <= tol)
        o -= sum(m for a, m in poles if abs(a - z0) <= tol)
        return o

    def reduced(self) -> "RationalFn":
        """Divide out common roots of numerator and denominator."""
        num, den = self.numerator.copy(), self.denominator.copy()
        zs = self._raw_zeros
        ps = dict((complex(a), m) for a, m in self._raw_poles)
        for z, mz in zs:
            for p in list(ps):
                if abs(z - p) <= max(TAU_ROOT, 1e-7) * (1 + abs(z)):
                    k = min(mz, ps[p])
                    c = 0j if abs(z) < 1e-12 and abs(p) < 1e-12 else (z + p) / 2
                    for _ in range(k):
                        num, _r = P.polydiv(num, [-c, 1.0])
                        den, _r = P.polydiv(den, [-c, 1.0])
                    ps[p] -= k
                    break
        return RationalFn(num, den)

    def __repr__(self):
        return f"RationalFn({self.numerator.tolist()}, {self.denominator.tolist()})"

    def to_dict(self) -> dict:
        enc = lambda c: [[float(x.real), float(x.imag)] for x in c]  # noqa: E731
        return {"num": enc(self.numerator), "den": enc(self.denominator)}


def _is_inf(z) -> bool:
    if z is None:
        return True
    z = complex(z)
    return math.isinf(z.real) or math.isinf(z.imag)


# regions ------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Open/closed disk ``|z - center| < radius`` or annulus ``inner < |z| < outer``."""

    center: complex = 0j
    radius: float = 1.0
    inner: float = 0.0
    closed: bool = False

    @classmethod
    def unit_disk(cls, closed=False) -> "Region":
        return cls(0j, 1.0, 0.0, closed)

    @classmethod
    def annulus(cls, inner: float, outer: float) -> "Region":
        return cls(0j, outer, inner, False)

    def contains(self, z, tol: float = 1e-12) -> bool:
        if _is_inf(z):
            return math.isinf(self.radius)
        r = abs(complex(z) - self.center)
        if self.closed:
            return self.inner - tol <= r <= self.radius + tol
        return self.inner + tol < r < self.radius - tol or (self.inner == 0 and r < self.radius - tol)


def zeros_and_poles(f: RationalFn, region: Region | None = None):
    """Zeros and poles of ``f`` inside ``region`` (whole plane if None)."""
    if f.is_zero():
        raise ValueError("f is identically zero")
    zeros, poles = f.divisor
    if region is not None:
        zeros = [(a, m) for a, m in zeros if region.contains(a)]
        poles = [(a, m) for a, m in poles if region.contains(a)]
    return zeros, poles


# Laurent / Taylor series ----------------------------------------------------


def taylor_shift(c, z0) -> np.ndarray:
    """Coefficients of p(z0 + h) in powers of h."""
    c = np.asarray(c, complex)
    n = c.size
    out = np.zeros(n, complex)
    # Horner with polynomial arithmetic in h
    for a in c[::-1]:
        out = P.polymul(out, [z0, 1.0])[:n]
        out[0] += a
    return out


def series_divide(num, den, nterms: int) -> np.ndarray:
    """Power series num/den (den[0] != 0) truncated to ``nterms``."""
    num = np.concatenate([np.asarray(num, complex), np.zeros(nterms, complex)])[:nterms]
    den = np.concatenate([np.asarray(den, complex), np.zeros(nterms, complex)])[:nterms]
    out = np.zeros(nterms, complex)
    for k in range(nterms):
        s = num[k] - np.dot(out[:k], den[k:0:-1]) if k else num[k]
        out[k] = s / den[0]
    return out


def series_sqrt(c, nterms: int, root0=None) -> np.ndarray:
    """Power series square root with prescribed constant term."""
    c = np.concatenate([np.asarray(c, complex), np.zeros(nterms, complex)])[:nterms]
    out = np.zeros(nterms, complex)
    out[0] = np.sqrt(c[0]) if root0 is None else root0
    for k in range(1, nterms):
        s = c[k] - np.dot(out[1:k], out[k - 1:0:-1])
        out[k] = s / (2 * out[0])
    return out


def _leading(c, rel=1e-12) -> int:
    c = np.asarray(c, complex)
    scale = max(np.max(np.abs(c)), 1e-300)
    nz = np.nonzero(np.abs(c) > rel * scale)[0]
    return int(nz[0]) if nz.size else c.size


def laurent(f: RationalFn, z0, nterms: int = 8) -> tuple[int, np.ndarray]:
    """Laurent expansion of f about z0 (``inf`` uses u = 1/z).

    Returns (valuation v, coefficients) so that
    f = sum_k coeffs[k] * h^(v + k), h = z - z0 (or u).
    """
    if _is_inf(z0):
        f = f.in_u_chart()
        z0 = 0j
    num = taylor_shift(f.numerator, z0)
    den = taylor_shift(f.denominator, z0)
    vn, vd = _leading(num), _leading(den)
    if vn >= num.size:
        return 0, np.zeros(nterms, complex)
    series = series_divide(num[vn:], den[vd:], nterms)
    return vn - vd, series
