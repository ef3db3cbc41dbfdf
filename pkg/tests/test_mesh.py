import numpy as np
import pytest

from maxsurf.domain import metric_factor
from maxsurf.errors import MeshDegenerate
from maxsurf.families import reduce_mod_lattice
from maxsurf.integrator import immerse
from maxsurf.mesh import (
    SurfaceMesh, export_mesh, mesh_surface, projection_injective, read_mesh, spacelike_edges,
)


@pytest.fixture(scope="module")
def scherk_mesh(families, lattices):
    return mesh_surface(families["scherk"].data, 32, 2, lattice=lattices["scherk"])


def test_resolution_floor(families):
    with pytest.raises(ValueError):
        mesh_surface(families["scherk"].data, 4)


def test_face_indices_in_range():
    with pytest.raises(MeshDegenerate):
        SurfaceMesh(np.zeros((2, 3)), [[0, 1, 2]])


def test_vertex_bookkeeping(families, lattices):
    m = mesh_surface(families["scherk"].data, 16, 1, lattice=lattices["scherk"])
    grid = 1 + 16 * 8
    regular = sum(t != "boundary_circle:0" for t in m.vertex_tags)
    circles = {tuple(c) for c, t in zip(m.copy_index, m.vertex_tags) if t.startswith("boundary")}
    ring = 16
    holes = grid - ring - regular
    # grid points dropped near the two ends, the outer ring collapsed per copy
    assert holes > 0 and len(circles) >= 1
    assert regular + ring + holes == grid


def test_copies_differ_by_lattice_vectors(scherk_mesh, lattices):
    v = lattices["scherk"][0]
    by = {}
    for i, (g, c) in enumerate(zip(scherk_mesh.grid_index, scherk_mesh.copy_index)):
        by.setdefault(g, {})[c] = i
    n = 0
    for copies in by.values():
        for c, i in copies.items():
            if (c[0] + 1,) in copies:
                d = scherk_mesh.vertices[copies[(c[0] + 1,)]] - scherk_mesh.vertices[i]
                assert np.max(np.abs(d - v)) < 10 * 1e-9
                n += 1
    assert n > 100


def test_vertices_agree_with_immerse(families, lattices, scherk_mesh):
    data = families["scherk"].data
    from maxsurf.domain import SurfacePoint
    from maxsurf.mesh import _make_grid

    grid = _make_grid(data, 32)
    for k, (g, t) in enumerate(zip(scherk_mesh.grid_index, scherk_mesh.vertex_tags)):
        if t != "regular" or k % 97:
            continue
        z = complex(grid.z[g[0]])
        x = np.asarray(immerse(data, data.base, SurfacePoint(z)))
        assert reduce_mod_lattice(scherk_mesh.vertices[k] - x, lattices["scherk"]) < 1e-8


def test_singular_circle_collapses(scherk_mesh):
    assert scherk_mesh.collapse_spread < 1e-8


def test_near_singular_tags(families, scherk_mesh):
    data = families["scherk"].data
    from maxsurf.domain import SurfacePoint
    from maxsurf.mesh import _make_grid

    grid = _make_grid(data, 32)
    near = [g for g, t in zip(scherk_mesh.grid_index, scherk_mesh.vertex_tags) if t == "near_singular"]
    reg = [g for g, t in zip(scherk_mesh.grid_index, scherk_mesh.vertex_tags) if t == "regular"]
    assert near
    worst_near = max(metric_factor(data, SurfacePoint(complex(grid.z[g[0]]))) for g in near)
    median_reg = np.median([metric_factor(data, SurfacePoint(complex(grid.z[g[0]]))) for g in reg[::7]])
    assert worst_near < 1e-2 * median_reg


def test_spacelike_and_injective(scherk_mesh):
    assert spacelike_edges(scherk_mesh)[0]
    assert projection_injective(scherk_mesh)[0]


@pytest.mark.parametrize("name", ["riemann", "doubly"])
def test_hyperelliptic_meshes(name, families, lattices):
    m = mesh_surface(families[name].data, 16, 2, lattice=lattices[name])
    assert len(m.faces) > 0
    assert m.collapse_spread < 1e-8
    assert spacelike_edges(m)[0]
    assert sum(t.startswith("boundary_circle:1") for t in m.vertex_tags) > 0


def test_empty_mesh_export_is_header_only(tmp_path):
    m = SurfaceMesh(np.zeros((0, 3)), np.zeros((0, 3), int))
    export_mesh(m, "ply", tmp_path / "e.ply")
    text = (tmp_path / "e.ply").read_text()
    assert text.endswith("end_header\n") and "element vertex 0" in text
    export_mesh(m, "obj", tmp_path / "e.obj")
    assert all(l.startswith("#") for l in (tmp_path / "e.obj").read_text().splitlines())


GOLDEN_OBJ = """# maximal surface mesh
v 0 0 0
v 1 0 0
v 0 1 0.5
v 1 1 0.25
f 1 2 3
f 2 4 3
"""


def test_golden_obj(tmp_path):
    m = SurfaceMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0.5], [1, 1, 0.25]], [[0, 1, 2], [1, 3, 2]])
    export_mesh(m, "obj", tmp_path / "g.obj")
    assert (tmp_path / "g.obj").read_text() == GOLDEN_OBJ
    export_mesh(m, "obj", tmp_path / "h.obj")
    assert (tmp_path / "g.obj").read_bytes() == (tmp_path / "h.obj").read_bytes()


@pytest.mark.parametrize("fmt", ["obj", "ply"])
def test_roundtrip(fmt, scherk_mesh, tmp_path):
    p = tmp_path / f"m.{fmt}"
    export_mesh(scherk_mesh, fmt, p)
    V, F = read_mesh(p)
    assert np.max(np.abs(V - scherk_mesh.vertices)) < 1e-6
    assert np.array_equal(F, scherk_mesh.faces)


def test_unknown_format(scherk_mesh, tmp_path):
    with pytest.raises(ValueError):
        export_mesh(scherk_mesh, "stl", tmp_path / "x")
