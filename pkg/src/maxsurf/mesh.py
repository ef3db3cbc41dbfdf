"""Triangle meshes of periodic maximal surfaces and their OBJ/PLY export.

The z-domain is sampled on a polar grid graded toward the singular circle
|z| = 1 (two sheets on hyperelliptic domains).  Edge integrals of Phi are
accumulated along a spanning tree from the base point; every edge also
records the lattice vector by which it jumps, so faces can be placed in the
right translated copy.  Each lifted boundary circle collapses to one vertex.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .domain import SurfacePoint, WeierstrassData, sqrt_pick
from .errors import MaxSurfError, MeshDegenerate
from .integrator import Arc, Line, PathSpec, immerse, integrate_path
from .rational import _is_inf

_X16, _W16 = np.polynomial.legendre.leggauss(16)


@dataclass
class SurfaceMesh:
    vertices: np.ndarray  # (n, 3)
    faces: np.ndarray  # (m, 3) int
    vertex_tags: list = field(default_factory=list)
    copies: int = 1
    lattice: list = field(default_factory=list)
    copy_index: list = field(default_factory=list)  # lattice coordinates of each vertex's copy
    grid_index: list = field(default_factory=list)  # (grid point, sheet) or ("circle", id)
    collapse_spread: float = 0.0

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, int).reshape(-1, 3)
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise MeshDegenerate("face index out of range")

    def edges(self) -> np.ndarray:
        e = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)


@dataclass
class _Grid:
    z: np.ndarray
    ring: np.ndarray  # ring index per grid point (-1 for the centre)
    ray: np.ndarray
    radii: np.ndarray
    n_theta: int
    center: bool


def _make_grid(data: WeierstrassData, resolution: int) -> _Grid:
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    n_theta = resolution
    n_r = max(4, resolution // 2)
    ends_at_center = any(not _is_inf(e) and abs(e) < 1e-12 for e in data.domain.end_z)
    center_pole = any(abs(p) < 1e-12 for p in data.singular_z)
    r_in = 0.0
    if ends_at_center or center_pole:
        others = [abs(p) for p in list(data.singular_z) + list(data.domain.finite_branch_points) if abs(p) > 1e-12]
        r_in = 0.3 * min(others + [1.0])
    t = np.arange(1, n_r + 1) / n_r
    radii = r_in + (1 - r_in) * (1 - (1 - t) ** 2)
    if r_in > 0:
        radii = np.concatenate([[r_in], radii])
    th = (np.arange(n_theta) + 0.5) * 2 * np.pi / n_theta
    zs, ring, ray = [], [], []
    center = r_in == 0.0
    if center:
        zs.append(0j)
        ring.append(-1)
        ray.append(-1)
    for k, r in enumerate(radii):
        for i, a in enumerate(th):
            zs.append(r * np.exp(1j * a))
            ring.append(k)
            ray.append(i)
    return _Grid(np.array(zs), np.array(ring), np.array(ray), radii, n_theta, center)


def _edge_list(grid: _Grid):
    """(a, b, kind) with kind 'line' or 'arc'; also quads / centre triangles."""
    n_t = grid.n_theta
    off = 1 if grid.center else 0
    nr = len(grid.radii)

    def idx(k, i):
        return off + k * n_t + (i % n_t)

    edges = {}

    def add(a, b, kind):
        edges[(a, b)] = kind

    cells = []
    for k in range(nr):
        for i in range(n_t):
            add(idx(k, i), idx(k, i + 1), "arc")
            if k + 1 < nr:
                add(idx(k, i), idx(k + 1, i), "line")
                cells.append((idx(k, i), idx(k + 1, i), idx(k + 1, i + 1), idx(k, i + 1)))
    if grid.center:
        for i in range(n_t):
            add(0, idx(0, i), "line")
            cells.append((0, idx(0, i), idx(0, i + 1)))
    return edges, cells


def _segment(grid: _Grid, a: int, b: int, kind: str):
    za, zb = grid.z[a], grid.z[b]
    if kind == "line":
        return Line(complex(za), complex(zb))
    r = abs(za)
    ta = math.atan2(za.imag, za.real)
    tb = math.atan2(zb.imag, zb.real)
    d = (tb - ta + math.pi) % (2 * math.pi) - math.pi
    return Arc(0j, r, ta, ta + d)


def _gl_nodes(n_panels: int):
    s = np.concatenate([(j + (_X16 + 1) / 2) / n_panels for j in range(n_panels)])
    w = np.concatenate([_W16 / (2 * n_panels)] * n_panels)
    return s, w


class _EdgeIntegrator:
    """Vectorised Gauss-Legendre integrals over many short edges with an
    error estimate from one halving; unresolved edges fall back to the
    adaptive integrator."""

    def __init__(self, data: WeierstrassData, tol: float):
        self.data = data
        self.tol = tol

    def run(self, segs, w_start):
        d = self.data
        hyper = d.domain.is_hyperelliptic
        n = len(segs)
        out = np.zeros((n, 3), complex)
        w_end = np.full(n, np.nan + 0j)
        ok = np.ones(n, bool)
        s1, q1 = _gl_nodes(1)
        s2, q2 = _gl_nodes(2)
        # evaluate on the two-panel rule and the one-panel rule
        z1 = np.array([seg.point(s1) for seg in segs])
        dz1 = np.array([seg.deriv(s1) for seg in segs])
        z2 = np.array([seg.point(s2) for seg in segs])
        dz2 = np.array([seg.deriv(s2) for seg in segs])
        w1 = w2 = None
        if hyper:
            rhs = d.domain.curve_rhs
            ws = np.asarray(w_start, complex)
            # continue w along the fine node sequence, including the end point
            zz = np.concatenate([z2, np.array([seg.point(1.0) for seg in segs])[:, None]], axis=1)
            order = np.argsort(np.concatenate([s2, [1.0]]))
            zz = zz[:, order]
            track = np.empty_like(zz)
            prev = ws
            for j in range(zz.shape[1]):
                cur = sqrt_pick(rhs(zz[:, j]), prev)
                bad = np.abs(cur - prev) >= 0.5 * np.abs(prev)
                ok &= ~bad
                track[:, j] = cur
                prev = cur
            w2 = track[:, :-1][:, np.argsort(order[:-1])]
            w_end = track[:, -1]
            # coarse nodes: nearest root to the interpolated fine track
            guess = np.array([np.interp(s1, s2, w2[i].real) + 1j * np.interp(s1, s2, w2[i].imag) for i in range(n)])
            w1 = sqrt_pick(rhs(z1), guess)
        f1 = d.coeffs(z1, w1) * dz1
        f2 = d.coeffs(z2, w2) * dz2
        i1 = f1 @ q1
        i2 = f2 @ q2
        err = np.max(np.abs(i1 - i2), axis=0)
        out[:] = i2.T
        redo = np.nonzero(~ok | (err > self.tol) | ~np.all(np.isfinite(i2), axis=0))[0]
        for i in redo:
            try:
                res = integrate_path(d, PathSpec((segs[i],), None if not hyper else complex(w_start[i])), self.tol)
                out[i] = res.value
                w_end[i] = res.end_w if hyper else np.nan
                ok[i] = True
            except MaxSurfError:
                ok[i] = False
        return out, w_end, ok


def mesh_surface(data: WeierstrassData, resolution: int = 32, copies: int = 1, tol: float = 1e-9,
                 lattice=None, end_radius: float | None = None,
                 near_singular: float = 1e-3) -> SurfaceMesh:
    """Mesh of ``copies`` translated fundamental pieces (per lattice
    direction) of the surface defined by ``data``.

    Grid vertices whose metric factor falls below ``near_singular`` times
    the median are tagged ``near_singular``.
    """
    if copies < 1:
        raise ValueError("copies must be positive")
    dom = data.domain
    lat = [np.asarray(v, float) for v in (lattice or [])]
    rank = len(lat)
    grid = _make_grid(data, resolution)
    edges, cells = _edge_list(grid)
    hyper = dom.is_hyperelliptic
    n_grid = len(grid.z)

    # drop grid points near ends and interior poles
    holes = [complex(e) for e in dom.end_z if not _is_inf(e)]
    holes += [complex(p) for p in data.singular_z
              if not (hyper and dom.is_branch(p)) and all(abs(p - h) > 1e-12 for h in holes)]
    alive = np.ones(n_grid, bool)
    for h in holes:
        if abs(h) < 1e-12 and not grid.center:
            continue
        sep = [abs(h - o) for o in holes if o != h] + [1 - abs(h)] + ([abs(h)] if abs(h) > 1e-12 else [])
        rho = end_radius if end_radius is not None else 0.25 * min(sep)
        alive &= np.abs(grid.z - h) >= rho

    # vertices of the (possibly double) cover: (grid point, sheet)
    sheets = 2 if hyper else 1
    nodes = [(i, s) for i in range(n_grid) for s in range(sheets) if alive[i]]
    node_id = {v: k for k, v in enumerate(nodes)}
    w_of = {}
    if hyper:
        for i in range(n_grid):
            if alive[i]:
                w0 = dom.w_at(complex(grid.z[i]))
                w_of[(i, 0)], w_of[(i, 1)] = w0, -w0

    # integrate every directed grid edge once per sheet
    pairs = [(a, b, k) for (a, b), k in edges.items() if alive[a] and alive[b]]
    segs, starts, meta = [], [], []
    for a, b, k in pairs:
        seg = _segment(grid, a, b, k)
        for s in range(sheets):
            segs.append(seg)
            starts.append(w_of.get((a, s), 0j))
            meta.append((a, s, b))
    ints, w_end, ok = _EdgeIntegrator(data, tol).run(segs, np.array(starts)) if segs else (np.zeros((0, 3)), [], [])

    # adjacency on the cover: (a, s) -> (b, s') with integral E
    adj: dict = {v: [] for v in nodes}
    for (a, s, b), E, we, good in zip(meta, ints, w_end, ok):
        if not good:
            continue
        if hyper:
            s2 = 0 if abs(we - w_of[(b, 0)]) <= abs(we - w_of[(b, 1)]) else 1
            if abs(we - w_of[(b, s2)]) > 1e-6 * (1 + abs(we)):
                continue
        else:
            s2 = 0
        adj[(a, s)].append(((b, s2), E))
        adj[(b, s2)].append(((a, s), -E))

    # root: the node nearest the base point
    base = data.base
    root_i = int(np.argmin(np.where(alive, np.abs(grid.z - complex(base.z)), np.inf)))
    root = (root_i, 0)
    if hyper:
        root_p = SurfacePoint(complex(grid.z[root_i]), w_of[root])
    else:
        root_p = SurfacePoint(complex(grid.z[root_i]))
    X0 = np.asarray(immerse(data, base, root_p, tol)) if (complex(base.z) != root_p.z) else np.zeros(3)

    X = {root: X0.astype(float)}
    Xc = {root: np.zeros(3, complex)}
    dq = deque([root])
    while dq:
        u = dq.popleft()
        for v, E in adj[u]:
            if v not in Xc:
                Xc[v] = Xc[u] + E
                X[v] = X0 + Xc[v].real
                dq.append(v)

    # lattice offset of an edge u -> v: X_u + Re E - X_v = sum m_i v_i
    if rank:
        B = np.array(lat).T
        pinv = np.linalg.pinv(B)

    def offset(u, v, E):
        if rank == 0:
            return ()
        jump = X[u] + E.real - X[v]
        m = pinv @ jump
        mr = np.round(m)
        if np.max(np.abs(m - mr)) > 1e-4 or np.linalg.norm(B @ mr - jump) > 1e-5 * (1 + np.linalg.norm(jump)):
            raise MeshDegenerate(f"edge jump {jump} is not a lattice vector")
        return tuple(int(x) for x in mr)

    edge_E = {}
    for u in adj:
        for v, E in adj[u]:
            edge_E[(u, v)] = E

    # boundary circles: components of the outer ring
    outer = len(grid.radii) - 1
    ring_nodes = [v for v in nodes if grid.ring[v[0]] == outer and v in X]
    comp_of, comp_members = {}, []
    for v in ring_nodes:
        if v in comp_of:
            continue
        cid = len(comp_members)
        comp_of[v] = cid
        members = {v: tuple([0] * rank)}
        st = [v]
        while st:
            u = st.pop()
            for w_, E in adj[u]:
                if grid.ring[w_[0]] == outer and w_ in X and w_ not in members:
                    members[w_] = tuple(np.add(members[u], offset(u, w_, E)).astype(int)) if rank else ()
                    comp_of[w_] = cid
                    st.append(w_)
        comp_members.append(members)

    spread = 0.0
    comp_pos = []
    for members in comp_members:
        pts = np.array([X[u] + (np.array(lat).T @ np.array(c) if rank else 0) for u, c in members.items()])
        ctr = pts.mean(axis=0)
        spread = max(spread, float(np.max(np.linalg.norm(pts - ctr, axis=1))))
        comp_pos.append(ctr)

    # near-singular tagging from the conformal factor of the induced metric
    keys = [u for u in X if u not in comp_of]
    zk = np.array([grid.z[u[0]] for u in keys])
    wk = np.array([w_of[u] for u in keys]) if hyper else None
    phi3 = data.coeffs(zk, wk)[2]
    ag = np.abs(data.g(zk))
    with np.errstate(divide="ignore", invalid="ignore"):
        mf = (np.abs(phi3) / 2 * (1 / ag - ag)) ** 2
    mf = np.where(np.isfinite(mf), mf, np.inf)
    cut = near_singular * float(np.median(mf[np.isfinite(mf)]))
    near = {u for u, m in zip(keys, mf) if m < cut}

    # assemble faces per copy
    copy_range = list(itertools.product(range(copies), repeat=rank)) if rank else [()]
    out_v, out_tags, out_copy, out_grid = [], [], [], []
    vid = {}

    def vertex(u, q):
        if u in comp_of:
            cid = comp_of[u]
            rel = comp_members[cid][u]
            q0 = tuple(np.subtract(q, rel)) if rank else ()
            key = ("circle", cid, q0)
            pos = comp_pos[cid] + (np.array(lat).T @ np.array(q0) if rank else 0)
            tag = f"boundary_circle:{cid}"
        else:
            key = ("grid", u, q)
            pos = X[u] + (np.array(lat).T @ np.array(q) if rank else 0)
            tag = "near_singular" if u in near else "regular"
        if key not in vid:
            vid[key] = len(out_v)
            out_v.append(pos)
            out_tags.append(tag)
            out_copy.append(tuple(int(x) for x in (key[2])))
            out_grid.append(key[1] if key[0] == "grid" else ("circle", cid))
        return vid[key]

    faces = []
    for cell in cells:
        for s in range(sheets):
            start = (cell[0], s)
            if start not in X:
                continue
            seq, offs = [start], [tuple([0] * rank)]
            good = True
            cur = start
            for nxt_i in list(cell[1:]) + [cell[0]]:
                cand = [(v, E) for v, E in adj[cur] if v[0] == nxt_i]
                if not cand:
                    good = False
                    break
                v, E = cand[0]
                offs.append(tuple(np.add(offs[-1], offset(cur, v, E)).astype(int)) if rank else ())
                seq.append(v)
                cur = v
            if not good or seq[-1] != start or (rank and any(offs[-1])):
                continue  # the cell wraps an end or a branch point
            seq, offs = seq[:-1], offs[:-1]
            for q in copy_range:
                qs = [tuple(np.add(q, o)) if rank else () for o in offs]
                if rank and any(not all(0 <= x < copies for x in qq) for qq in qs):
                    continue
                ids = [vertex(u, qq) for u, qq in zip(seq, qs)]
                tris = [(ids[0], ids[1], ids[2])] if len(ids) == 3 else [(ids[0], ids[1], ids[2]), (ids[0], ids[2], ids[3])]
                for t in tris:
                    if len(set(t)) == 3:
                        faces.append(t)
    if not faces:
        raise MeshDegenerate("no faces survived")
    verts = np.array(out_v)
    F = np.array(faces)
    a = np.cross(verts[F[:, 1]] - verts[F[:, 0]], verts[F[:, 2]] - verts[F[:, 0]])
    if np.any(~np.isfinite(verts)):
        raise MeshDegenerate("non-finite vertex")
    if np.any(np.linalg.norm(a, axis=1) < 1e-300):
        raise MeshDegenerate("a face collapsed to zero area")
    return SurfaceMesh(verts, F, out_tags, copies, lat, out_copy, out_grid, spread)


# checks -------------------------------------------------------------------------


def spacelike_edges(mesh: SurfaceMesh) -> tuple[bool, float]:
    """All edges not touching a collapsed singular vertex have <D, D> > 0."""
    E = mesh.edges()
    sing = np.array([t != "regular" for t in mesh.vertex_tags])
    keep = ~(sing[E[:, 0]] | sing[E[:, 1]])
    D = mesh.vertices[E[keep, 1]] - mesh.vertices[E[keep, 0]]
    q = D[:, 0] ** 2 + D[:, 1] ** 2 - D[:, 2] ** 2
    return bool(np.all(q > 0)), float(q.min()) if q.size else math.inf


def projection_injective(mesh: SurfaceMesh, copy=None) -> tuple[bool, float]:
    """Projected vertices of one copy onto x3 = 0 stay at least a quarter of
    the local edge length apart unless they share an edge."""
    copy = copy if copy is not None else (tuple([0] * len(mesh.lattice)) if mesh.lattice else ())
    idx = np.array([i for i, c in enumerate(mesh.copy_index) if tuple(c) == tuple(copy)])
    P = mesh.vertices[:, :2]
    E = mesh.edges()
    L = np.linalg.norm(P[E[:, 0]] - P[E[:, 1]], axis=1)
    local = np.full(len(P), np.inf)
    np.minimum.at(local, E[:, 0], L)
    np.minimum.at(local, E[:, 1], L)
    nbr = set(map(tuple, E.tolist()))
    worst = math.inf
    Q = P[idx]
    for a in range(len(idx)):
        d = np.linalg.norm(Q[a + 1:] - Q[a], axis=1)
        thr = 0.25 * np.minimum(local[idx[a]], local[idx[a + 1:]])
        bad = np.nonzero(d < thr)[0]
        for b in bad:
            i, j = sorted((int(idx[a]), int(idx[a + 1 + b])))
            if (i, j) not in nbr:
                return False, float(d[b])
        if d.size:
            worst = min(worst, float(np.min(d / np.maximum(thr, 1e-300))))
    return True, worst


# export -----------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def export_mesh(mesh: SurfaceMesh, fmt: str, path) -> None:
    """Write ASCII OBJ or PLY; output is byte-identical for identical input."""
    fmt = fmt.lower()
    lines = []
    if fmt == "obj":
        lines.append("# maximal surface mesh")
        lines += [f"v {_fmt(a)} {_fmt(b)} {_fmt(c)}" for a, b, c in mesh.vertices]
        lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in mesh.faces]
    elif fmt == "ply":
        lines += ["ply", "format ascii 1.0", f"element vertex {len(mesh.vertices)}",
                  "property double x", "property double y", "property double z",
                  f"element face {len(mesh.faces)}", "property list uchar int vertex_indices", "end_header"]
        lines += [f"{_fmt(a)} {_fmt(b)} {_fmt(c)}" for a, b, c in mesh.vertices]
        lines += [f"3 {i} {j} {k}" for i, j, k in mesh.faces]
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_mesh(path) -> tuple[np.ndarray, np.ndarray]:
    """Parse an OBJ or PLY file written by :func:`export_mesh`."""
    text = Path(path).read_text().splitlines()
    if text and text[0] == "ply":
        nv = int(next(t for t in text if t.startswith("element vertex")).split()[-1])
        nf = int(next(t for t in text if t.startswith("element face")).split()[-1])
        start = text.index("end_header") + 1
        V = np.array([[float(x) for x in t.split()] for t in text[start:start + nv]]).reshape(-1, 3)
        F = np.array([[int(x) for x in t.split()[1:]] for t in text[start + nv:start + nv + nf]], int).reshape(-1, 3)
        return V, F
    V = [[float(x) for x in t.split()[1:]] for t in text if t.startswith("v ")]
    F = [[int(x) - 1 for x in t.split()[1:]] for t in text if t.startswith("f ")]
    return np.array(V, float).reshape(-1, 3), np.array(F, int).reshape(-1, 3)
