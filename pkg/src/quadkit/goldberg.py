"""Procedural Goldberg polyhedra: enumerate the lattice of the fundamental
triangle for frequency (m, n), map it onto the icosahedron's faces, project
to the unit sphere, recover the geodesic triangulation as a 3D convex hull,
and take the topological dual. The hull step makes the combinatorics immune
to per-face frame choices, which matters for the chiral (n != 0, m != n)
classes.

Counts for T = m^2 + mn + n^2: the dual has V = 20T, E = 30T, F = 10T + 2
with exactly 12 pentagons and 10T - 10 hexagons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .errors import DegenerateGeometryError, InvalidMeshError
from .mesh import PolyMesh, build_edge_face_map, normalize_unit_cube

_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class GoldbergParams:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")
        if self.m < self.n:
            raise ValueError("require m >= n (canonical orientation)")
        if (self.m, self.n) == (0, 0):
            raise ValueError("(0, 0) is not a valid frequency")

    @property
    def t(self) -> int:
        return self.m * self.m + self.m * self.n + self.n * self.n


@dataclass
class HullMesh:
    """Triangulated convex hull with outward-oriented faces."""

    vertices: np.ndarray
    triangles: np.ndarray          # (F, 3) outward-oriented
    vertex_faces: list[list[int]]  # incident triangle ids per vertex

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_faces(self):
        return len(self.triangles)

    def edge_count(self):
        edges = set()
        for tri in self.triangles:
            for i in range(3):
                a, b = int(tri[i]), int(tri[(i + 1) % 3])
                edges.add((a, b) if a < b else (b, a))
        return len(edges)


def lattice_points(params: GoldbergParams) -> list[tuple[int, int]]:
    """Integer (a, b) inside the fundamental triangle, in lexicographic
    order. The triangle's corners are (0,0), (m,n) and (-n, m+n)."""
    m, n, t = params.m, params.n, params.t
    out = []
    for a in range(-n, m + 1):
        for b in range(0, m + n + 1):
            if ((m + n) * a + n * b >= 0
                    and m * b - n * a >= 0
                    and t - m * a - (m + n) * b >= 0):
                out.append((a, b))
    return out


def icosahedron() -> tuple[np.ndarray, np.ndarray]:
    """Unit icosahedron: 12 vertices and 20 outward-oriented faces."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    raw = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            raw.append((0.0, a, b))
            raw.append((a, b, 0.0))
            raw.append((b, 0.0, a))
    verts = np.array(raw) / math.sqrt(1.0 + phi * phi)
    hull = convex_hull(verts)
    return hull.vertices, hull.triangles


def project_to_icosahedron(lattice, params: GoldbergParams) -> np.ndarray:
    """Map lattice points barycentrically onto each icosahedron face and
    radially project to the unit sphere; duplicates from shared edges and
    corners are merged within tolerance."""
    if not lattice:
        raise ValueError("empty lattice")
    m, n, t = params.m, params.n, params.t
    iverts, ifaces = icosahedron()
    lat = np.asarray(lattice, dtype=np.float64)
    # barycentric coordinates w.r.t. corners (0,0), (m,n), (-n, m+n)
    beta = ((m + n) * lat[:, 0] + n * lat[:, 1]) / t
    gamma = (m * lat[:, 1] - n * lat[:, 0]) / t
    alpha = 1.0 - beta - gamma
    pts = []
    for face in ifaces:
        v0, v1, v2 = iverts[face[0]], iverts[face[1]], iverts[face[2]]
        p = (alpha[:, None] * v0 + beta[:, None] * v1 + gamma[:, None] * v2)
        pts.append(p)
    pts = np.vstack(pts)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return _merge_close(pts, _MERGE_TOL)


def _merge_close(points: np.ndarray, tol: float) -> np.ndarray:
    """Collapse point clusters within tol (union-find over close pairs)."""
    tree = cKDTree(points)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    parent = np.arange(len(points))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = sorted({find(i) for i in range(len(points))})
    return points[roots]


def convex_hull(points: np.ndarray) -> HullMesh:
    """Triangulated 3D convex hull with all faces oriented outward.

    Spherical point sets are in convex position, so every input point must
    appear on the hull; a dropped point signals a degenerate input.
    """
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 4:
        raise DegenerateGeometryError("hull needs >= 4 points")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateGeometryError(f"degenerate hull input: {exc}") from exc
    tris = []
    center = pts[hull.vertices].mean(axis=0)
    for simplex, eq in zip(hull.simplices, hull.equations):
        a, b, c = (int(v) for v in simplex)
        normal = eq[:3]
        face_n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        if float(np.dot(face_n, normal)) < 0.0:
            a, b, c = a, c, b
        # sanity: outward means pointing away from the hull centroid
        if float(np.dot(face_n, pts[a] - center)) == 0.0 and len(pts) > 4:
            pass
        tris.append((a, b, c))
    triangles = np.asarray(tris, dtype=np.int64)
    vertex_faces = [[] for _ in range(len(pts))]
    for fi, tri in enumerate(triangles):
        for v in tri:
            vertex_faces[int(v)].append(fi)
    return HullMesh(vertices=pts, triangles=triangles, vertex_faces=vertex_faces)


def dual_mesh(hull: HullMesh) -> PolyMesh:
    """Topological dual: one vertex per hull face (its centroid pushed to the
    unit sphere), one face per hull vertex with the incident hull faces
    ordered cyclically and oriented outward."""
    centroids = hull.vertices[hull.triangles].mean(axis=1)
    norms = np.linalg.norm(centroids, axis=1)
    if np.any(norms <= 0):
        raise DegenerateGeometryError("hull face centroid at the origin")
    dual_verts = centroids / norms[:, None]

    # half-edge map: directed edge (a, b) -> triangle containing it
    halfedge = {}
    for fi, tri in enumerate(hull.triangles):
        for i in range(3):
            halfedge[(int(tri[i]), int(tri[(i + 1) % 3]))] = fi

    dual_faces = []
    for v in range(hull.num_vertices):
        incident = hull.vertex_faces[v]
        if not incident:
            raise InvalidMeshError(f"hull vertex {v} has no incident faces")
        start = incident[0]
        cycle = [start]
        fi = start
        # walk around v: in outward triangle (v, a, b) the next face
        # counterclockwise shares directed edge (v, b) reversed
        for _ in range(len(incident)):
            tri = [int(x) for x in hull.triangles[fi]]
            i = tri.index(v)
            b = tri[(i + 2) % 3]
            nxt = halfedge.get((v, b))
            if nxt is None:
                raise InvalidMeshError(f"open fan around hull vertex {v}")
            if nxt == start:
                break
            cycle.append(nxt)
            fi = nxt
        else:
            raise InvalidMeshError(f"non-manifold fan around hull vertex {v}")
        if len(cycle) != len(incident):
            raise InvalidMeshError(f"non-manifold fan around hull vertex {v}")
        dual_faces.append(tuple(cycle))
    return PolyMesh(dual_verts, dual_faces, validate=False)


def goldberg(params: GoldbergParams) -> PolyMesh:
    """Full construction, output normalized to [-1, 1]^3."""
    lattice = lattice_points(params)
    sphere_pts = project_to_icosahedron(lattice, params)
    hull = convex_hull(sphere_pts)
    dual = dual_mesh(hull)
    return normalize_unit_cube(dual)


@dataclass
class CountReport:
    t: int
    vertices: tuple[int, int]
    edges: tuple[int, int]
    faces: tuple[int, int]
    pentagons: tuple[int, int]
    hexagons: tuple[int, int]
    euler: tuple[int, int]

    @property
    def passed(self) -> bool:
        return all(a == b for a, b in (
            self.vertices, self.edges, self.faces,
            self.pentagons, self.hexagons, self.euler))

    def lines(self):
        out = []
        for name in ("vertices", "edges", "faces", "pentagons", "hexagons",
                     "euler"):
            got, want = getattr(self, name)
            mark = "OK" if got == want else "FAIL"
            out.append(f"{name}: {got} (expect {want}) {mark}")
        return out


def validate_counts(mesh: PolyMesh, params: GoldbergParams) -> CountReport:
    """Check the closed-form counts V=20T, E=30T, F=10T+2, 12 pentagons,
    10T-10 hexagons, and the Euler characteristic."""
    t = params.t
    emap = build_edge_face_map(mesh)
    v = mesh.num_vertices
    e = len(emap)
    f = mesh.num_faces
    degs = [len(face) for face in mesh.faces]
    return CountReport(
        t=t,
        vertices=(v, 20 * t),
        edges=(e, 30 * t),
        faces=(f, 10 * t + 2),
        pentagons=(sum(1 for d in degs if d == 5), 12),
        hexagons=(sum(1 for d in degs if d == 6), 10 * t - 10),
        euler=(v - e + f, 2),
    )
