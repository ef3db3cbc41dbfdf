import json

import pytest

from maxsurf.surface_io import bundled_path, load_surface, parse_surface
from maxsurf.validation import validate


@pytest.mark.parametrize("name", ["scherk", "riemann", "doubly"])
def test_bundled_surfaces_validate(name):
    rep = validate(load_surface(bundled_path(name)))
    assert rep.passed, [c for c in rep.validation if not c.passed] or rep.errors
    d = rep.to_dict()
    assert set(d) >= {"input", "validation", "periods", "singularities", "ends", "topology", "group_case"}
    json.dumps(d)


def test_bad_gauss_map_fails():
    bad = {
        "domain": {"kind": "PuncturedClosedDisk", "ends": [0.5, -0.5]},
        "g": {"num": [0, 2]},
        "phi3": {"num": [0, 1], "den": [0.25, 0, -1.0625, 0, 0.25]},
        "rank": 1,
    }
    rep = validate(parse_surface(bad))
    assert not rep.passed


def test_wrong_rank_fails():
    obj = json.loads(bundled_path("scherk").read_text())
    obj["rank"] = 2
    rep = validate(parse_surface(obj))
    assert not rep.passed
