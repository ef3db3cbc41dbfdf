"""Command line interface: ``maxsurf <command> ...``; JSON reports on stdout."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import MaxSurfError
from .families import build_family
from .lorentz import Isometry, classify_isometry
from .surface_io import bundled_path, dumps, load_surface, model_from_family
from .validation import VerificationReport, check_periods, validate

REPORT_KEYS = ("input", "validation", "periods", "singularities", "ends", "topology", "group_case")


def _default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, default=_default) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(rep: VerificationReport, keep) -> dict:
    d = rep.to_dict()
    out = {k: (d[k] if k in keep else None) for k in REPORT_KEYS}
    out["errors"] = d["errors"]
    out["passed"] = d["passed"]
    return out


def _load(path):
    if path in ("scherk", "riemann", "doubly"):
        path = bundled_path(path)
    return load_surface(path)


def cmd_validate(args) -> int:
    rep = validate(_load(args.file), with_groups=not args.no_groups, tol=args.tol, convention=args.convention)
    _emit(_report(rep, REPORT_KEYS), args.out)
    return 0 if rep.passed else 1


def cmd_periods(args) -> int:
    model = _load(args.file)
    rep = VerificationReport()
    checks, rep.periods, _ = check_periods(model, args.tol)
    rep.validation = checks
    _emit(_report(rep, {"periods", "validation"}), args.out)
    return 0 if rep.passed else 1


def cmd_census(args) -> int:
    rep = validate(_load(args.file), tol=args.tol, convention=args.convention)
    out = _report(rep, {"singularities", "ends"})
    ok = not rep.errors
    out["passed"] = ok
    _emit(out, args.out)
    return 0 if ok else 1


def cmd_check_topology(args) -> int:
    model = _load(args.file)
    rep = validate(model, tol=args.tol, convention=args.convention)
    out = _report(rep, {"topology", "singularities", "ends"})
    ok = not rep.errors and rep.topology is not None and rep.topology["formula_holds"] and rep.topology["rh_holds"]
    if rep.topology is None and not rep.errors:
        out["errors"].append("the surface file does not declare xi0")
    out["passed"] = ok
    _emit(out, args.out)
    return 0 if ok else 1


def cmd_classify_isometry(args) -> int:
    vals = args.numbers
    R = Isometry(np.array(vals[:9]).reshape(3, 3), vals[9:12])
    cls = classify_isometry(R, args.tol)
    _emit({"isometry": R.to_dict(), "class": cls.to_dict()}, args.out)
    return 0


def cmd_mesh(args) -> int:
    from .mesh import export_mesh, mesh_surface, projection_injective, spacelike_edges
    from .validation import lattice_vectors

    model = _load(args.file)
    lat = lattice_vectors(model) if model.rank else []
    mesh = mesh_surface(model.data, args.resolution, args.copies, args.tol, lattice=lat)
    summary = {"vertices": len(mesh.vertices), "faces": len(mesh.faces), "copies": mesh.copies,
               "lattice": [v.tolist() for v in lat], "collapse_spread": mesh.collapse_spread}
    sp, sp_min = spacelike_edges(mesh)
    inj, _ = projection_injective(mesh)
    summary["spacelike_edges"] = sp
    summary["min_edge_norm2"] = sp_min
    summary["projection_injective"] = inj
    if args.out:
        export_mesh(mesh, args.format, args.out)
        summary["written"] = str(args.out)
        sys.stdout.write(json.dumps(summary, indent=2, default=_default) + "\n")
    else:
        summary["mesh_vertices"] = mesh.vertices.tolist()
        summary["mesh_faces"] = mesh.faces.tolist()
        _emit(summary)
    return 0 if sp and inj else 1


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise SystemExit(f"--params expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = float(v)
    return out


def cmd_example(args) -> int:
    spec = build_family(args.family, **_parse_params(args.params))
    text = dumps(model_from_family(spec))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maxsurf", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def surf(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="surface JSON file, or scherk / riemann / doubly for a bundled one")
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--out", default=None)
        sp.set_defaults(func=func)
        return sp

    v = surf("validate", cmd_validate, "run every check and print the full report")
    v.add_argument("--no-groups", action="store_true", help="skip symmetry lifts and group cases")
    v.add_argument("--convention", default="multiplicity_minus_one", choices=["multiplicity_minus_one", "as_printed"])
    surf("periods", cmd_periods, "boundary and lattice periods")
    c = surf("census", cmd_census, "singularity and end census")
    c.add_argument("--convention", default="multiplicity_minus_one", choices=["multiplicity_minus_one", "as_printed"])
    t = surf("check-topology", cmd_check_topology, "topological formula and Riemann-Hurwitz check")
    t.add_argument("--convention", default="multiplicity_minus_one", choices=["multiplicity_minus_one", "as_printed"])

    ci = sub.add_parser("classify-isometry", help="classify x -> L x + b from 9 matrix entries and 3 translation entries")
    ci.add_argument("numbers", type=float, nargs=12)
    ci.add_argument("--tol", type=float, default=1e-10)
    ci.add_argument("--out", default=None)
    ci.set_defaults(func=cmd_classify_isometry)

    m = sub.add_parser("mesh", help="mesh a surface and export it")
    m.add_argument("file")
    m.add_argument("--resolution", type=int, default=32)
    m.add_argument("--copies", type=int, default=1)
    m.add_argument("--format", default="obj", choices=["obj", "ply"])
    m.add_argument("--out", default=None)
    m.add_argument("--tol", type=float, default=1e-9)
    m.set_defaults(func=cmd_mesh)

    e = sub.add_parser("example", help="write a bundled family as a surface JSON file")
    e.add_argument("family", choices=["scherk", "riemann", "doubly"])
    e.add_argument("--params", nargs="*", default=[], help="name=value pairs, e.g. b=0.25")
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MaxSurfError, ValueError, TypeError) as exc:
        _emit({"errors": [f"{type(exc).__name__}: {exc}"], "passed": False})
        return 2


if __name__ == "__main__":
    sys.exit(main())
