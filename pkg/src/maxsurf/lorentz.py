"""Lorentz-Minkowski 3-space: metric, causal type, stereographic chart and
affine isometries.

Coordinates are (x1, x2, x3) with metric dx1^2 + dx2^2 - dx3^2.  Isometries
are stored as ``x -> linear @ x + translation``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotAnIsometry, NotFreeProper, UnitModulusInput, UnsupportedGroup

ETA = np.diag([1.0, 1.0, -1.0])
TAU_ISO = 1e-9


@dataclass(frozen=True)
class LorentzVec:
    x1: float
    x2: float
    x3: float

    @classmethod
    def of(cls, v) -> "LorentzVec":
        if isinstance(v, LorentzVec):
            return v
        a = np.asarray(v, dtype=float).reshape(3)
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def __array__(self, dtype=None, copy=None):
        a = self.as_array()
        return a if dtype is None else a.astype(dtype)

    def __iter__(self):
        return iter((self.x1, self.x2, self.x3))

    def __add__(self, other):
        return LorentzVec.of(self.as_array() + _arr(other))

    def __sub__(self, other):
        return LorentzVec.of(self.as_array() - _arr(other))

    def __neg__(self):
        return LorentzVec(-self.x1, -self.x2, -self.x3)

    def __mul__(self, k: float):
        return LorentzVec(k * self.x1, k * self.x2, k * self.x3)

    __rmul__ = __mul__

    def norm2(self) -> float:
        return minkowski_inner(self, self)


def _arr(v) -> np.ndarray:
    if isinstance(v, LorentzVec):
        return v.as_array()
    return np.asarray(v, dtype=float)


def minkowski_inner(u, v) -> float:
    """Return u1*v1 + u2*v2 - u3*v3."""
    a, b = _arr(u), _arr(v)
    return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])


class Causal(str, enum.Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"


@dataclass(frozen=True)
class CausalClass:
    tag: Causal
    tolerance_used: float


def causal_class(v, tol: float = 1e-12) -> CausalClass:
    """Classify ``v`` by the sign of <v, v>.

    The zero vector is spacelike by convention.  The lightlike band is
    ``|<v,v>| <= tol * max(1, |v|_euclid^2)``.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    a = _arr(v)
    e2 = float(a @ a)
    if e2 == 0.0:
        return CausalClass(Causal.SPACELIKE, tol)
    q = minkowski_inner(a, a)
    band = tol * max(1.0, e2)
    if abs(q) <= band:
        tag = Causal.LIGHTLIKE
    elif q < 0:
        tag = Causal.TIMELIKE
    else:
        tag = Causal.SPACELIKE
    return CausalClass(tag, tol)


def is_infinite(z) -> bool:
    if z is None:
        return True
    z = complex(z)
    return math.isinf(z.real) or math.isinf(z.imag)


def stereographic(z, tol: float = 1e-12) -> LorentzVec:
    """Stereographic projection of the extended plane minus the unit circle
    onto the two-sheeted hyperboloid x1^2 + x2^2 - x3^2 = -1."""
    if is_infinite(z):
        return LorentzVec(0.0, 0.0, 1.0)
    z = complex(z)
    r2 = abs(z) ** 2
    if abs(abs(z) - 1.0) <= tol:
        raise UnitModulusInput(f"|z| = 1 within {tol}: {z}")
    d = r2 - 1.0
    return LorentzVec(2 * z.imag / d, 2 * z.real / d, (r2 + 1) / d)


def inverse_stereographic(v) -> complex:
    """Inverse of :func:`stereographic` on the hyperboloid."""
    a = _arr(v)
    if abs(a[2] - 1.0) < 1e-15 and abs(a[0]) < 1e-15 and abs(a[1]) < 1e-15:
        return complex(math.inf, 0.0)
    # |z|^2 = (x3 + 1) / (x3 - 1)
    d = a[2] - 1.0
    return complex(a[1], a[0]) / d


# --------------------------------------------------------------------------
# isometries


@dataclass(frozen=True, eq=False)
class Isometry:
    """Affine map ``x -> linear @ x + translation`` of Lorentz-Minkowski space."""

    linear: np.ndarray
    translation: LorentzVec = field(default_factory=lambda: LorentzVec(0.0, 0.0, 0.0))

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float).reshape(3, 3)
        lin.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", LorentzVec.of(self.translation))

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(np.eye(3))

    @classmethod
    def translate(cls, v) -> "Isometry":
        return cls(np.eye(3), LorentzVec.of(v))

    @property
    def b(self) -> np.ndarray:
        return self.translation.as_array()

    def __call__(self, x):
        a = _arr(x)
        if a.ndim == 1:
            return LorentzVec.of(self.linear @ a + self.b)
        return a @ self.linear.T + self.b

    def __matmul__(self, other: "Isometry") -> "Isometry":
        """Composition: (self @ other)(x) = self(other(x))."""
        return Isometry(self.linear @ other.linear, self.linear @ other.b + self.b)

    def inverse(self) -> "Isometry":
        inv = np.linalg.inv(self.linear)
        return Isometry(inv, -inv @ self.b)

    def conjugate_by(self, frame: "Isometry") -> "Isometry":
        """Return frame^-1 o self o frame."""
        return frame.inverse() @ self @ frame

    def defect(self) -> float:
        """Max-norm of L^T eta L - eta."""
        return float(np.max(np.abs(self.linear.T @ ETA @ self.linear - ETA)))

    def is_isometry(self, tol: float = TAU_ISO) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.linear))) ** 2)
        return self.defect() <= tol * scale

    @property
    def positive(self) -> bool:
        return bool(np.linalg.det(self.linear) > 0)

    @property
    def orthochronous(self) -> bool:
        return is_orthochronous(self)

    def allclose(self, other: "Isometry", tol: float = TAU_ISO) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.b))), float(np.max(np.abs(other.b))))
        return bool(
            np.max(np.abs(self.linear - other.linear)) <= tol * 10
            and np.max(np.abs(self.b - other.b)) <= tol * 10 * scale
        )

    def to_dict(self) -> dict:
        return {"linear": self.linear.tolist(), "translation": list(self.translation)}

    def __repr__(self):
        return f"Isometry(linear={self.linear.tolist()}, translation={tuple(self.translation)})"


def is_orthochronous(R: Isometry) -> bool:
    """True when the linear part keeps (0, 0, 1) future pointing."""
    return bool(R.linear[2, 2] > 0)


# normal forms ------------------------------------------------------------


def elliptic(t: float, lam: float = 0.0) -> Isometry:
    c, s = math.cos(t), math.sin(t)
    return Isometry([[c, s, 0], [-s, c, 0], [0, 0, 1]], (0, 0, lam))


def hyperbolic(t: float, lam: float = 0.0, eps: int = 1) -> Isometry:
    ch, sh = math.cosh(t), math.sinh(t)
    return Isometry([[1, 0, 0], [0, eps * ch, eps * sh], [0, eps * sh, eps * ch]], (lam, 0, 0))


def parabolic(t: float, lam: float = 0.0) -> Isometry:
    h = t * t / 2
    return Isometry([[1, -t, t], [t, 1 - h, h], [t, -h, 1 + h]], (0, 0, lam))


def R0(nu: float) -> Isometry:
    """(x1, x2, x3) -> (x1 + nu, -x2, -x3)."""
    return Isometry(np.diag([1.0, -1.0, -1.0]), (nu, 0, 0))


def R1(delta: float) -> Isometry:
    """(x1, x2, x3) -> (x1 + delta, -x2, x3)."""
    return Isometry(np.diag([1.0, -1.0, 1.0]), (delta, 0, 0))


def R2(delta: float) -> Isometry:
    """(x1, x2, x3) -> (x1, x2 + delta, -x3)."""
    return Isometry(np.diag([1.0, 1.0, -1.0]), (0, delta, 0))


# classification of a single isometry --------------------------------------


class IsometryKind(str, enum.Enum):
    IDENTITY = "Identity"
    TRANSLATION = "Translation"
    ELLIPTIC_ROTATION = "EllipticRotation"
    HYPERBOLIC_ROTATION = "HyperbolicRotation"
    PARABOLIC_ROTATION = "ParabolicRotation"
    ELLIPTIC_SCREW = "EllipticScrew"
    HYPERBOLIC_SCREW = "HyperbolicScrew"
    PARABOLIC_SCREW = "ParabolicScrew"
    NEGATIVE_ORTHOCHRONOUS = "NegativeOrthochronous"
    NEGATIVE_NON_ORTHOCHRONOUS = "NegativeNonOrthochronous"


@dataclass(frozen=True)
class IsometryClass:
    kind: IsometryKind
    t: float = 0.0
    lam: float = 0.0
    eps: int = 1

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "t": self.t, "lambda": self.lam, "epsilon": self.eps}


def _unit(v: np.ndarray) -> np.ndarray:
    q = minkowski_inner(v, v)
    return v / math.sqrt(abs(q))


def _future(v: np.ndarray) -> np.ndarray:
    return v if v[2] > 0 else -v


def _complete_frame(e1, e2, e3, slot: int) -> np.ndarray:
    """Fill column ``slot`` (given as None) with the unit vector Lorentz
    orthogonal to the other two, oriented so that det = +1."""
    cols = [e1, e2, e3]
    known = [np.asarray(c, float) for i, c in enumerate(cols) if i != slot]
    # eta-orthogonal complement of two vectors: null space of rows (eta @ k)
    A = np.array([ETA @ k for k in known])
    _, _, vt = np.linalg.svd(A)
    n = _unit(vt[-1])
    cols[slot] = n
    M = np.column_stack(cols)
    if np.linalg.det(M) < 0:
        cols[slot] = -n
        M = np.column_stack(cols)
    return M


def _project_off(v: np.ndarray, a: np.ndarray) -> np.ndarray:
    return v - minkowski_inner(v, a) / minkowski_inner(a, a) * a


def _fixed_axis(L: np.ndarray) -> np.ndarray:
    _, _, vt = np.linalg.svd(L - np.eye(3))
    a = vt[-1]
    return a / np.linalg.norm(a)


def _sign_fix(a: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(a)))
    return a if a[k] > 0 else -a


def _scale(R: Isometry) -> float:
    return max(1.0, float(np.linalg.norm(R.b)))


def _check_isometry(R: Isometry, tol: float):
    if not R.is_isometry(tol):
        raise NotAnIsometry(f"L^T eta L deviates from eta by {R.defect():.3e}")


def _classify_with_frame(R: Isometry, tol: float):
    _check_isometry(R, tol)
    L, b = R.linear, R.b
    if np.linalg.det(L) < 0:
        kind = (
            IsometryKind.NEGATIVE_ORTHOCHRONOUS
            if is_orthochronous(R)
            else IsometryKind.NEGATIVE_NON_ORTHOCHRONOUS
        )
        return IsometryClass(kind), None
    if np.max(np.abs(L - np.eye(3))) <= tol:
        if np.linalg.norm(b) <= tol:
            return IsometryClass(IsometryKind.IDENTITY), Isometry.identity()
        return IsometryClass(IsometryKind.TRANSLATION, lam=float(np.linalg.norm(b))), None

    a = _fixed_axis(L)
    q = minkowski_inner(a, a)
    if abs(q) <= 1e-6:
        # parabolic: fixed null direction scaled to third component 1
        n = _future(a)
        n = n / n[2]
        u = np.array([n[1], -n[0], 0.0]) / math.hypot(n[0], n[1])
        t = float((L @ u - u)[2] / n[2])
        lam = -minkowski_inner(b, n)
        M = np.column_stack([u, n - np.array([0.0, 0.0, 1.0]), [0.0, 0.0, 1.0]])
        M[:, 1] /= np.linalg.norm(M[:, 1])
        target = lam * np.array([0.0, 0.0, 1.0])
        kind = IsometryKind.PARABOLIC_SCREW if abs(lam) > tol * _scale(R) else IsometryKind.PARABOLIC_ROTATION
        eps = 1
    elif q < 0:
        a = _future(_unit(a))
        ref = np.eye(3)[int(np.argmin(np.abs(a[:2])))]
        e1 = _unit(_project_off(ref, a))
        M = _complete_frame(e1, None, a, slot=1)
        e1, e2 = M[:, 0], M[:, 1]
        Le1 = L @ e1
        t = math.atan2(-minkowski_inner(Le1, e2), minkowski_inner(Le1, e1)) % (2 * math.pi)
        lam = -minkowski_inner(b, a)
        target = lam * a
        kind = IsometryKind.ELLIPTIC_SCREW if abs(lam) > tol * _scale(R) else IsometryKind.ELLIPTIC_ROTATION
        eps = 1
    else:
        a = _sign_fix(_unit(a))
        e3 = _future(_unit(_project_off(np.array([0.0, 0.0, 1.0]), a)))
        M = _complete_frame(a, None, e3, slot=1)
        e2 = M[:, 1]
        eps = 1 if np.trace(L) - 1 > 0 else -1
        t = math.asinh(-eps * minkowski_inner(L @ e2, e3))
        lam = minkowski_inner(b, a)
        target = lam * a
        kind = IsometryKind.HYPERBOLIC_SCREW if abs(lam) > tol * _scale(R) else IsometryKind.HYPERBOLIC_ROTATION

    # origin on the (screw) axis: b + (L - I) p = target
    p, *_ = np.linalg.lstsq(L - np.eye(3), target - b, rcond=None)
    return IsometryClass(kind, float(t), float(lam), int(eps)), Isometry(M, p)


def classify_isometry(R: Isometry, tol: float = TAU_ISO) -> IsometryClass:
    """Kind and normal-form parameters (angle t, screw translation lambda,
    sign epsilon) of an affine isometry.

    Hyperbolic axes are signed so that their largest component is positive;
    parabolic fixed null vectors are scaled to third component 1.
    """
    return _classify_with_frame(R, tol)[0]


def normal_form_frame(R: Isometry, tol: float = TAU_ISO) -> Isometry | None:
    """Frame F with F^-1 o R o F equal to the normal form of ``R``.

    Returns None for translations and negative isometries.
    """
    return _classify_with_frame(R, tol)[1]


def normal_form(cls: IsometryClass) -> Isometry:
    k = cls.kind
    if k is IsometryKind.IDENTITY:
        return Isometry.identity()
    if k in (IsometryKind.ELLIPTIC_ROTATION, IsometryKind.ELLIPTIC_SCREW):
        return elliptic(cls.t, cls.lam)
    if k in (IsometryKind.HYPERBOLIC_ROTATION, IsometryKind.HYPERBOLIC_SCREW):
        return hyperbolic(cls.t, cls.lam, cls.eps)
    if k in (IsometryKind.PARABOLIC_ROTATION, IsometryKind.PARABOLIC_SCREW):
        return parabolic(cls.t, cls.lam)
    raise ValueError(f"no single normal form for {k.value}")


def has_fixed_point(R: Isometry, tol: float = TAU_ISO) -> bool:
    A = R.linear - np.eye(3)
    # singular values at rounding level count as exact zeros
    U, s, Vt = np.linalg.svd(A)
    keep = s > tol * max(1.0, float(np.abs(R.linear).max()))
    p = Vt.T[:, keep] @ ((U.T[keep] @ -R.b) / s[keep])
    A0 = (U[:, keep] * s[keep]) @ Vt[keep]
    return bool(np.linalg.norm(A0 @ p + R.b) <= tol * _scale(R))


# classification of the quotient groups -------------------------------------


class GroupKind(str, enum.Enum):
    TRIVIAL = "Trivial"
    T = "T"
    T1T2 = "T1T2"
    R0 = "R0"
    R0T0 = "R0T0"
    R1 = "R1"
    R1T1 = "R1T1"
    R2 = "R2"
    R2T2 = "R2T2"
    R0R2 = "R0R2"


@dataclass(frozen=True)
class GroupCase:
    case: GroupKind
    parameters: dict
    normalizing_frame: Isometry
    normalized: tuple = ()

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "parameters": dict(self.parameters),
            "normalizing_frame": self.normalizing_frame.to_dict(),
        }


def _gen_type(R: Isometry, tol: float) -> str:
    if np.max(np.abs(R.linear - np.eye(3))) <= tol:
        return "T"
    pos, orth = R.positive, is_orthochronous(R)
    if pos and not orth:
        return "R0"
    if not pos and orth:
        return "R1"
    if not pos and not orth:
        return "R2"
    return "screw"


def _involution_eigvec(L: np.ndarray, sign: float, tol: float) -> np.ndarray:
    """The unique eigenvector of an involution with the isolated eigenvalue."""
    if np.max(np.abs(L @ L - np.eye(3))) > 10 * tol:
        raise UnsupportedGroup("linear part is not an involution (non-zero angle)")
    w, v = np.linalg.eig(L)
    idx = [i for i in range(3) if abs(w[i] - sign) < 1e-6]
    if len(idx) != 1:
        raise UnsupportedGroup("unexpected eigenstructure for an involutive generator")
    return np.real(v[:, idx[0]])


def _reduce_translation(gamma: float, step: float, tol: float) -> float:
    """Remove an even multiple of ``step`` from ``gamma`` (T o R^-k reduction)."""
    if abs(gamma) <= tol * max(1.0, abs(step)):
        return 0.0
    k = gamma / step
    kr = round(k)
    if abs(k - kr) > 1e-7:
        raise UnsupportedGroup("translation is not commensurable with the screw part")
    if kr % 2:
        raise NotFreeProper("T o R^-k has a fixed point for odd k")
    return 0.0


def _check_free(gens: list[Isometry], tol: float):
    words = list(gens)
    if len(gens) == 2:
        a, b = gens
        words += [a @ b, a @ b.inverse(), a @ a, b @ b]
    elif len(gens) == 1:
        words.append(gens[0] @ gens[0])
    for w in words:
        if has_fixed_point(w, tol):
            raise NotFreeProper(f"group element has a fixed point: {w!r}")


def _frame_R0(R: Isometry, tol: float):
    a = _involution_eigvec(R.linear, 1.0, tol)
    if minkowski_inner(a, a) <= 0:
        raise UnsupportedGroup("R0-type axis is not spacelike")
    a = _unit(a)
    nu = minkowski_inner(R.b, a)
    if nu < 0:
        a, nu = -a, -nu
    return a, nu


def _frame_from_columns(e1, e2, e3, origin) -> Isometry:
    return Isometry(np.column_stack([e1, e2, e3]), origin)


def classify_group(generators: list[Isometry], tol: float = TAU_ISO) -> GroupCase:
    """Match a list of at most two generators against the finite table of
    quotient groups admitting entire maximal surfaces of finite type."""
    gens = list(generators)
    if len(gens) > 2:
        raise UnsupportedGroup("at most two generators are supported")
    for g in gens:
        _check_isometry(g, tol)
    if not gens:
        return GroupCase(GroupKind.TRIVIAL, {}, Isometry.identity(), ())
    _check_free(gens, tol)

    types = [_gen_type(g, tol) for g in gens]
    if "screw" in types:
        raise UnsupportedGroup("orthochronous positive screw motions cannot occur")
    order = {"R0": 0, "R1": 1, "R2": 2, "T": 3}
    pairs = sorted(zip(types, range(len(gens))), key=lambda p: order[p[0]])
    types = [p[0] for p in pairs]
    gens = [gens[p[1]] for p in pairs]
    e3 = np.array([0.0, 0.0, 1.0])

    if types == ["T"]:
        v = gens[0].b
        if minkowski_inner(v, v) <= tol:
            raise UnsupportedGroup("translation is not spacelike")
        e1 = _unit(v)
        f3 = _future(_unit(_project_off(e3, e1)))
        M = _complete_frame(e1, None, f3, 1)
        case, params = GroupKind.T, {"lambda": float(math.sqrt(minkowski_inner(v, v)))}
        frame = Isometry(M)
    elif types == ["T", "T"]:
        v1, v2 = gens[0].b, gens[1].b
        G = np.array([[minkowski_inner(x, y) for y in (v1, v2)] for x in (v1, v2)])
        if np.linalg.det(G) <= tol * max(1.0, np.max(np.abs(G))) ** 2 or G[0, 0] <= 0:
            raise UnsupportedGroup("translations do not span a spacelike plane")
        e1 = _unit(v1)
        e2 = _unit(_project_off(v2, e1))
        M = _complete_frame(e1, e2, None, 2)
        if M[2, 2] < 0:
            e2 = -e2
            M = _complete_frame(e1, e2, None, 2)
        frame = Isometry(M)
        c2 = np.linalg.solve(M, v2)
        case = GroupKind.T1T2
        params = {"lambda1": float(math.sqrt(G[0, 0])), "lambda2": float(c2[0]), "mu2": float(c2[1])}
    elif types[0] == "R0":
        R = gens[0]
        a, nu = _frame_R0(R, tol)
        if types == ["R0"]:
            f3 = _future(_unit(_project_off(e3, a)))
            M = _complete_frame(a, None, f3, 1)
            case, params = GroupKind.R0, {"nu": float(nu)}
        elif types == ["R0", "T"]:
            t = gens[1].b
            t_perp = _project_off(t, a)
            if minkowski_inner(t_perp, t_perp) <= tol:
                raise UnsupportedGroup("R0T0 translation must have a spacelike part orthogonal to the axis")
            _reduce_translation(minkowski_inner(t, a), nu, tol)
            e2 = _unit(t_perp)
            M = _complete_frame(a, e2, None, 2)
            if M[2, 2] < 0:
                M = _complete_frame(a, -e2, None, 2)
            gens[1] = Isometry.translate(t - minkowski_inner(t, a) * a)
            case = GroupKind.R0T0
            params = {"nu": float(nu), "lambda": float(np.linalg.solve(M, gens[1].b)[1])}
        elif types == ["R0", "R2"]:
            n = _involution_eigvec(gens[1].linear, -1.0, tol)
            if minkowski_inner(n, n) >= 0 or abs(minkowski_inner(n, a)) > 1e-7:
                raise UnsupportedGroup("R2-type reflection incompatible with the R0 axis")
            f3 = _future(_unit(n))
            M = _complete_frame(a, None, f3, 1)
            case = GroupKind.R0R2
            params = {"nu": float(nu)}
        else:
            raise UnsupportedGroup(f"generator pattern {types} not in the table")
        # origin: kill the R0 translation orthogonal to its axis
        bf = np.linalg.solve(M, R.b)
        origin = M @ np.array([0.0, bf[1] / 2, bf[2] / 2])
        frame = Isometry(M, origin)
        if case is GroupKind.R0R2:
            r2 = gens[1].conjugate_by(frame)
            if abs(r2.b[0]) > tol * _scale(r2) * 10 or abs(r2.b[2]) > tol * _scale(r2) * 10:
                raise UnsupportedGroup("R2 translation not of the form (0, delta, 0) in the R0 frame")
            params["delta"] = float(r2.b[1])
    elif types[0] in ("R1", "R2"):
        R = gens[0]
        n = _involution_eigvec(R.linear, -1.0, tol)
        beta = minkowski_inner(R.b, n) / minkowski_inner(n, n)
        b_fixed = R.b - beta * n
        if types[0] == "R1":
            if minkowski_inner(n, n) <= 0:
                raise UnsupportedGroup("R1-type reflection must flip a spacelike direction")
            if minkowski_inner(b_fixed, b_fixed) <= tol:
                raise UnsupportedGroup("R1 translation must be spacelike")
            e1 = _unit(b_fixed)
            e2 = _unit(n)
            M = _complete_frame(e1, e2, None, 2)
            if M[2, 2] < 0:
                M = _complete_frame(e1, -e2, None, 2)
            delta = math.sqrt(minkowski_inner(b_fixed, b_fixed))
            params = {"delta": float(delta)}
            case = GroupKind.R1
        else:
            if minkowski_inner(n, n) >= 0:
                raise UnsupportedGroup("R2-type reflection must flip a timelike direction")
            f3 = _future(_unit(n))
            e2 = _unit(b_fixed)
            M = _complete_frame(None, e2, f3, 0)
            delta = math.sqrt(minkowski_inner(b_fixed, b_fixed))
            params = {"delta": float(delta)}
            case = GroupKind.R2
        frame = Isometry(M, beta * n / 2)
        if len(types) == 2:
            if types[1] != "T":
                raise UnsupportedGroup(f"generator pattern {types} not in the table")
            c = np.linalg.solve(M, gens[1].b)
            if abs(c[2]) > tol * max(1.0, np.linalg.norm(c)) * 10:
                raise UnsupportedGroup("translation has a timelike component in the reflection frame")
            if case is GroupKind.R1:
                _reduce_translation(c[0], delta, tol)
                if abs(c[1]) <= tol:
                    raise NotFreeProper("T1 must have a component along the flipped direction")
                gens[1] = Isometry.translate(M @ np.array([0.0, c[1], 0.0]))
                case = GroupKind.R1T1
                params["lambda"] = float(c[1])
            else:
                if abs(c[0]) <= tol * max(1.0, np.linalg.norm(c)):
                    raise UnsupportedGroup("T2 is parallel to the R2 translation")
                case = GroupKind.R2T2
                params["lambda"] = float(c[0])
                params["mu"] = float(c[1])
    else:
        raise UnsupportedGroup(f"generator pattern {types} not in the table")

    normalized = tuple(g.conjugate_by(frame) for g in gens)
    expected = _expected_normal_forms(case, params)
    for got, want in zip(normalized, expected):
        if not got.allclose(want, tol * 100):
            raise UnsupportedGroup(f"normalization failed for case {case.value}: {got!r} vs {want!r}")
    return GroupCase(case, params, frame, normalized)


def _expected_normal_forms(case: GroupKind, p: dict) -> list[Isometry]:
    T = Isometry.translate
    table = {
        GroupKind.T: lambda: [T((p["lambda"], 0, 0))],
        GroupKind.T1T2: lambda: [T((p["lambda1"], 0, 0)), T((p["lambda2"], p["mu2"], 0))],
        GroupKind.R0: lambda: [R0(p["nu"])],
        GroupKind.R0T0: lambda: [R0(p["nu"]), T((0, p["lambda"], 0))],
        GroupKind.R0R2: lambda: [R0(p["nu"]), R2(p["delta"])],
        GroupKind.R1: lambda: [R1(p["delta"])],
        GroupKind.R1T1: lambda: [R1(p["delta"]), T((0, p["lambda"], 0))],
        GroupKind.R2: lambda: [R2(p["delta"])],
        GroupKind.R2T2: lambda: [R2(p["delta"]), T((p["lambda"], p["mu"], 0))],
    }
    return table[case]()


def lorentz_boost(direction, rapidity: float) -> np.ndarray:
    """Positive orthochronous boost along a horizontal unit direction."""
    d = np.asarray(direction, float)
    d = d / np.linalg.norm(d)
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    B = np.eye(3)
    B[:2, :2] += (ch - 1) * np.outer(d, d)
    B[:2, 2] = sh * d
    B[2, :2] = sh * d
    B[2, 2] = ch
    return B


def rotation_x3(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


