"""Strict JSON surface description files.

Complex numbers are written as a number or a ``[re, im]`` pair; the point at
infinity is the string ``"inf"``.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .domain import DomainSpec, SurfacePoint, WeierstrassData, weierstrass
from .errors import SurfaceFileError
from .integrator import Arc, Line, PathSpec
from .rational import INF, RationalFn, _is_inf

TOP_KEYS = {"name", "domain", "g", "phi3", "params", "base", "xi0", "rank", "cycles", "lattice_cycles", "family"}
REQUIRED = {"domain", "g", "phi3", "rank"}


@dataclass
class SurfaceModel:
    data: WeierstrassData
    rank: int
    xi0: int | None = None
    cycles: dict = field(default_factory=dict)
    lattice_cycles: list = field(default_factory=list)
    family: dict | None = None
    name: str = ""


def _c(x, where: str) -> complex:
    if isinstance(x, str):
        if x == "inf":
            return INF
        raise SurfaceFileError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, bool):
        raise SurfaceFileError(f"{where}: booleans are not numbers")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x):
        return complex(x[0], x[1])
    raise SurfaceFileError(f"{where}: expected a number or [re, im], got {x!r}")


def _enc(z):
    if z is None:
        return None
    if _is_inf(z):
        return "inf"
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _keys(d, allowed, required, where):
    if not isinstance(d, dict):
        raise SurfaceFileError(f"{where}: expected an object")
    extra = set(d) - set(allowed)
    if extra:
        raise SurfaceFileError(f"{where}: unknown field(s) {sorted(extra)}")
    missing = set(required) - set(d)
    if missing:
        raise SurfaceFileError(f"{where}: missing field(s) {sorted(missing)}")


def _rational(d, where, extra=()) -> RationalFn:
    _keys(d, {"num", "den", *extra}, {"num"}, where)
    try:
        num = [_c(x, f"{where}.num") for x in d["num"]]
        den = [_c(x, f"{where}.den") for x in d.get("den", [1.0])]
        return RationalFn(num, den)
    except TypeError as exc:
        raise SurfaceFileError(f"{where}: coefficient lists expected") from exc
    except ZeroDivisionError as exc:
        raise SurfaceFileError(f"{where}: {exc}") from exc


def _segment(d, where):
    if not isinstance(d, dict) or len(d) != 1:
        raise SurfaceFileError(f"{where}: a segment is {{'line': [z0, z1]}} or {{'arc': [center, radius, t0, t1]}}")
    (kind, v), = d.items()
    if kind == "line" and isinstance(v, list) and len(v) == 2:
        return Line(_c(v[0], where), _c(v[1], where))
    if kind == "arc" and isinstance(v, list) and len(v) == 4:
        return Arc(_c(v[0], where), float(v[1]), float(v[2]), float(v[3]))
    raise SurfaceFileError(f"{where}: malformed segment {d!r}")


def parse_surface(obj: dict) -> SurfaceModel:
    _keys(obj, TOP_KEYS, REQUIRED, "surface")
    dom_d = obj["domain"]
    _keys(dom_d, {"kind", "curve_rhs", "ends"}, {"kind"}, "domain")
    kind = dom_d["kind"]
    if kind not in ("PuncturedClosedDisk", "HyperellipticDisk"):
        raise SurfaceFileError(f"domain.kind: unknown kind {kind!r}")
    rhs = _rational(dom_d["curve_rhs"], "domain.curve_rhs") if "curve_rhs" in dom_d else None
    ends = tuple(_c(z, "domain.ends") for z in dom_d.get("ends", []))
    rank = obj["rank"]
    if rank not in (0, 1, 2) or isinstance(rank, bool):
        raise SurfaceFileError("rank must be 0, 1 or 2")
    try:
        dom = DomainSpec(kind, rhs, ends, rank)
    except ValueError as exc:
        raise SurfaceFileError(f"domain: {exc}") from exc
    g = obj["g"]
    if isinstance(g, str):
        if g != "z":
            raise SurfaceFileError("g: only the string 'z' is accepted")
        g_fn = RationalFn.identity()
    else:
        g_fn = _rational(g, "g")
    ph = obj["phi3"]
    q = _rational(ph, "phi3", extra=("w_power",))
    wp = ph.get("w_power", 0)
    if wp not in (0, -1) or isinstance(wp, bool):
        raise SurfaceFileError("phi3.w_power must be 0 or -1")
    params = obj.get("params", {})
    if not isinstance(params, dict) or not all(isinstance(v, (int, float)) for v in params.values()):
        raise SurfaceFileError("params must map names to reals")
    base = None
    if "base" in obj:
        _keys(obj["base"], {"z", "w"}, {"z"}, "base")
        bw = obj["base"].get("w")
        base = SurfacePoint(_c(obj["base"]["z"], "base.z"), None if bw is None else _c(bw, "base.w"))
    elif not dom.is_hyperelliptic:
        base = SurfacePoint(0j)
    if dom.is_hyperelliptic and (base is None or base.w is None):
        raise SurfaceFileError("hyperelliptic domains need base.w to fix the sheet")
    xi0 = obj.get("xi0")
    if xi0 is not None and (not isinstance(xi0, int) or xi0 < 0):
        raise SurfaceFileError("xi0 must be a non-negative integer")
    try:
        data = weierstrass(dom, g_fn, q, wp, base=base, name=obj.get("name", ""), params=dict(params), xi0=xi0)
    except (ValueError, TypeError) as exc:
        raise SurfaceFileError(str(exc)) from exc
    cycles = {}
    for name, cd in obj.get("cycles", {}).items():
        _keys(cd, {"segments", "w"}, {"segments"}, f"cycles.{name}")
        segs = tuple(_segment(s, f"cycles.{name}") for s in cd["segments"])
        w = cd.get("w")
        try:
            cycles[name] = PathSpec(segs, None if w is None else _c(w, f"cycles.{name}.w"))
        except ValueError as exc:
            raise SurfaceFileError(f"cycles.{name}: {exc}") from exc
    lat = obj.get("lattice_cycles", [])
    if not isinstance(lat, list) or any(n not in cycles for n in lat):
        raise SurfaceFileError("lattice_cycles must name entries of cycles")
    fam = obj.get("family")
    if fam is not None:
        _keys(fam, {"name", "params"}, {"name"}, "family")
    return SurfaceModel(data, rank, xi0, cycles, list(lat), fam, obj.get("name", ""))


def load_surface(path) -> SurfaceModel:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SurfaceFileError(f"cannot read {path}: {exc}") from exc
    if str(path).endswith(".toml"):
        raise SurfaceFileError("only JSON surface files are supported")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SurfaceFileError(f"{path}: invalid JSON ({exc})") from exc
    return parse_surface(obj)


def _rat_dict(f: RationalFn) -> dict:
    return {"num": [_enc(c) for c in f.numerator], "den": [_enc(c) for c in f.denominator]}


def _seg_dict(s):
    if isinstance(s, Line):
        return {"line": [_enc(s.z0), _enc(s.z1)]}
    return {"arc": [_enc(s.center), s.radius, s.theta0, s.theta1]}


def surface_to_dict(model: SurfaceModel) -> dict:
    d = model.data
    dom = d.domain
    out = {"name": model.name or d.name,
           "domain": {"kind": dom.kind.value, "ends": [_enc(z) for z in dom.end_z]},
           "g": "z" if _is_identity(d.g) else _rat_dict(d.g),
           "phi3": {**_rat_dict(d.q), "w_power": d.w_power},
           "params": dict(d.params), "rank": model.rank}
    if dom.curve_rhs is not None:
        out["domain"]["curve_rhs"] = _rat_dict(dom.curve_rhs)
    if d.base is not None:
        out["base"] = {"z": _enc(d.base.z), "w": _enc(d.base.w)}
    if model.xi0 is not None:
        out["xi0"] = model.xi0
    if model.cycles:
        out["cycles"] = {n: {"segments": [_seg_dict(s) for s in p.segments], "w": _enc(p.base_w)}
                         for n, p in model.cycles.items()}
        out["lattice_cycles"] = list(model.lattice_cycles)
    if model.family:
        out["family"] = model.family
    return out


def _is_identity(f: RationalFn) -> bool:
    return f.numerator.size == 2 and f.denominator.size == 1 and f.numerator[0] == 0 and \
        f.numerator[1] == f.denominator[0]


LATTICE_CYCLES = {"ScherkType": ["end_b"], "RiemannType": ["end"], "DoublyPeriodic": ["gamma1", "gamma2"]}
BUNDLED = {"scherk": "scherk.json", "riemann": "riemann.json", "doubly": "doubly.json"}


def model_from_family(spec) -> SurfaceModel:
    fam = spec.family.value
    short = {v: k for k, v in {"scherk": "ScherkType", "riemann": "RiemannType", "doubly": "DoublyPeriodic"}.items()}[fam]
    return SurfaceModel(spec.data, spec.rank, spec.xi0, dict(spec.cycles), list(LATTICE_CYCLES[fam]),
                        {"name": short, "params": dict(spec.params)}, spec.data.name)


def bundled_path(name: str):
    if name not in BUNDLED:
        raise SurfaceFileError(f"no bundled surface {name!r}; choose from {sorted(BUNDLED)}")
    return resources.files("maxsurf") / "data" / BUNDLED[name]


def dumps(model: SurfaceModel) -> str:
    def clean(x):
        if isinstance(x, float) and (math.isnan(x)):
            raise SurfaceFileError("NaN cannot be serialised")
        return x
    return json.dumps(surface_to_dict(model), indent=2, default=clean) + "\n"
