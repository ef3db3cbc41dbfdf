import json

import numpy as np
import pytest

from maxsurf.errors import SurfaceFileError
from maxsurf.families import build_family
from maxsurf.integrator import period
from maxsurf.surface_io import BUNDLED, bundled_path, dumps, load_surface, model_from_family, parse_surface

MINIMAL = {
    "domain": {"kind": "PuncturedClosedDisk", "ends": [0.5, -0.5]},
    "g": "z",
    "phi3": {"num": [0, 1], "den": [0.25, 0, -1.0625, 0, 0.25]},
    "rank": 1,
}


def test_parse_minimal():
    m = parse_surface(MINIMAL)
    assert m.rank == 1 and m.data.base.z == 0
    assert len(m.data.domain.ends) == 2


@pytest.mark.parametrize("mutate,msg", [
    (lambda d: d.update(extra=1), "unknown"),
    (lambda d: d.pop("g"), "missing"),
    (lambda d: d.update(rank=3), "rank"),
    (lambda d: d["phi3"].update(w_power=2), "w_power"),
    (lambda d: d["domain"].update(kind="Torus"), "kind"),
    (lambda d: d.update(g="z^2"), "g"),
    (lambda d: d["phi3"].update(num=["x"]), "number"),
    (lambda d: d.update(lattice_cycles=["nope"]), "lattice_cycles"),
])
def test_rejections(mutate, msg):
    d = json.loads(json.dumps(MINIMAL))
    mutate(d)
    with pytest.raises(SurfaceFileError, match=msg):
        parse_surface(d)


def test_toml_rejected(tmp_path):
    p = tmp_path / "s.toml"
    p.write_text("rank = 1\n")
    with pytest.raises(SurfaceFileError):
        load_surface(p)


def test_invalid_json(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("{")
    with pytest.raises(SurfaceFileError):
        load_surface(p)


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_bundled_files_roundtrip(name, tmp_path):
    m = load_surface(bundled_path(name))
    p = tmp_path / "copy.json"
    p.write_text(dumps(m))
    m2 = load_surface(p)
    assert dumps(m2) == dumps(m)
    for c in m.lattice_cycles:
        a = np.asarray(period(m.data, m.cycles[c]).real_part)
        b = np.asarray(period(m2.data, m2.cycles[c]).real_part)
        assert np.allclose(a, b, atol=1e-14)


def test_model_from_family_matches_bundled():
    m = model_from_family(build_family("riemann"))
    assert json.loads(dumps(m)) == json.loads(dumps(load_surface(bundled_path("riemann"))))


def test_unknown_bundled():
    with pytest.raises(SurfaceFileError):
        bundled_path("catenoid")


@pytest.mark.parametrize("drop", ["base", "base.w"])
def test_hyperelliptic_base_sheet_required(drop):
    obj = json.loads(bundled_path("riemann").read_text())
    if drop == "base":
        del obj["base"]
    else:
        del obj["base"]["w"]
    with pytest.raises(SurfaceFileError, match="base.w"):
        parse_surface(obj)
