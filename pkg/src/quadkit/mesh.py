"""Polygon mesh core: indexed n-gon meshes, OBJ IO, adjacency, and the
elementary geometric quantities (centroids, Newell normals, normalization)
that every other stage builds on.

Meshes are immutable after construction: ``vertices`` is a read-only float64
array of shape (nv, 3) and ``faces`` is a tuple of vertex-index tuples of
length >= 3. Mixed triangle/quad/n-gon face lists are the normal case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateGeometryError, InvalidMeshError, ObjParseError

_DEGENERATE_EPS = 1e-15


class PolyMesh:
    """Indexed polygon mesh (triangles, quads, general n-gons)."""

    __slots__ = ("vertices", "faces")

    def __init__(self, vertices, faces, validate=True):
        v = np.asarray(vertices, dtype=np.float64)
        if v.size == 0:
            v = v.reshape(0, 3)
        if v.ndim != 2 or v.shape[1] != 3:
            raise InvalidMeshError(f"vertices must be (n, 3), got {v.shape}")
        v = v.copy()
        v.setflags(write=False)
        self.vertices = v
        face_tuples = []
        nv = len(v)
        for fi, face in enumerate(faces):
            cycle = tuple(int(i) for i in face)
            if validate:
                if len(cycle) < 3:
                    raise InvalidMeshError(f"face {fi} has {len(cycle)} < 3 vertices")
                if len(set(cycle)) != len(cycle):
                    raise InvalidMeshError(f"face {fi} repeats a vertex index")
                for i in cycle:
                    if i < 0 or i >= nv:
                        raise InvalidMeshError(
                            f"face {fi} references vertex {i} out of range [0, {nv})")
            face_tuples.append(cycle)
        self.faces = tuple(face_tuples)

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_faces(self):
        return len(self.faces)

    def face_degrees(self):
        return [len(f) for f in self.faces]

    def face_points(self, face_index: int) -> np.ndarray:
        """Positions of one face's vertex cycle, shape (deg, 3)."""
        return self.vertices[list(self.faces[face_index])]

    def __eq__(self, other):
        if not isinstance(other, PolyMesh):
            return NotImplemented
        return (self.faces == other.faces
                and self.vertices.shape == other.vertices.shape
                and bool(np.all(self.vertices == other.vertices)))

    def __repr__(self):
        return f"PolyMesh({self.num_vertices} vertices, {self.num_faces} faces)"


@dataclass(frozen=True)
class FaceGeometry:
    """Per-face derived quantities."""

    centroid: np.ndarray
    newell_normal: np.ndarray
    area: float


def load_obj(path) -> PolyMesh:
    """Parse the OBJ subset ``v x y z`` / ``f i j k [l ...]``.

    Indices are 1-based; attribute suffixes (``7/1/3``) are accepted and
    stripped to the vertex index. Non-geometry statements (vt, vn, comments,
    groups, materials) are ignored.
    """
    vertices = []
    faces = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            key = parts[0]
            if key == "v":
                if len(parts) < 4:
                    raise ObjParseError("vertex needs 3 coordinates", line=lineno)
                try:
                    vertices.append([float(parts[1]), float(parts[2]), float(parts[3])])
                except ValueError:
                    raise ObjParseError(f"bad vertex coordinate in {line!r}",
                                        line=lineno) from None
            elif key == "f":
                if len(parts) < 4:
                    raise ObjParseError("face needs at least 3 indices", line=lineno)
                cycle = []
                for token in parts[1:]:
                    head = token.split("/", 1)[0]
                    try:
                        idx = int(head)
                    except ValueError:
                        raise ObjParseError(f"bad face index {token!r}",
                                            line=lineno) from None
                    if idx < 1:
                        raise ObjParseError(
                            f"face index {idx} not positive (1-based expected)",
                            line=lineno)
                    cycle.append(idx - 1)
                faces.append(cycle)
            # vt / vn / g / o / s / usemtl / mtllib: ignored
    try:
        return PolyMesh(vertices, faces)
    except InvalidMeshError as exc:
        raise InvalidMeshError(f"{path}: {exc}") from exc


def _fmt(x: float) -> str:
    # repr of a Python float is the shortest string that round-trips exactly,
    # which subsumes the >= 9 significant digit requirement.
    return repr(float(x))


def save_obj(mesh: PolyMesh, path) -> None:
    """Write a mesh as OBJ; n-gon faces are written as-is, never triangulated."""
    with open(path, "w", encoding="utf-8") as fh:
        for v in mesh.vertices:
            fh.write(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}\n")
        for face in mesh.faces:
            fh.write("f " + " ".join(str(i + 1) for i in face) + "\n")


def edge_key(a: int, b: int) -> tuple[int, int]:
    """Canonical unordered vertex pair."""
    return (a, b) if a < b else (b, a)


def iter_face_edges(face: Sequence[int]) -> Iterable[tuple[int, int]]:
    """Directed boundary edges of one face cycle."""
    n = len(face)
    for i in range(n):
        yield face[i], face[(i + 1) % n]


def build_edge_face_map(mesh: PolyMesh) -> dict[tuple[int, int], list[int]]:
    """Map each unordered edge to the sorted list of incident face indices.

    Edges with exactly two incident faces are internal, one is boundary;
    higher counts mark non-manifold junctions and are kept as-is.
    """
    emap: dict[tuple[int, int], list[int]] = {}
    for fi, face in enumerate(mesh.faces):
        for a, b in iter_face_edges(face):
            emap.setdefault(edge_key(a, b), []).append(fi)
    for incident in emap.values():
        incident.sort()
    return emap


def boundary_edges(edge_face_map: Mapping[tuple[int, int], list[int]]):
    return [e for e, inc in edge_face_map.items() if len(inc) == 1]


def internal_edges(edge_face_map: Mapping[tuple[int, int], list[int]]):
    return [e for e, inc in edge_face_map.items() if len(inc) == 2]


def normalize_unit_cube(mesh: PolyMesh) -> PolyMesh:
    """Recenter to the origin and scale uniformly so the longest bounding-box
    axis spans exactly [-1, 1]; aspect ratio is preserved."""
    if mesh.num_vertices == 0:
        raise DegenerateGeometryError("cannot normalize a mesh with no vertices")
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    extent = hi - lo
    largest = float(extent.max())
    if largest <= 0.0:
        raise DegenerateGeometryError("zero-extent mesh (all vertices identical)")
    center = (hi + lo) / 2.0
    scale = 2.0 / largest
    return PolyMesh((mesh.vertices - center) * scale, mesh.faces, validate=False)


def face_centroid(mesh: PolyMesh, face_index: int) -> np.ndarray:
    """Arithmetic mean of the face's vertex positions."""
    return mesh.face_points(face_index).mean(axis=0)


def all_face_centroids(mesh: PolyMesh) -> np.ndarray:
    if mesh.num_faces == 0:
        return np.zeros((0, 3))
    return np.array([face_centroid(mesh, i) for i in range(mesh.num_faces)])


def newell_vector(points) -> np.ndarray:
    """Unnormalized Newell normal of a vertex cycle; |v| = 2 * area for
    planar polygons. Scalar arithmetic: cycles are tiny and this sits on the
    candidate-scoring hot path."""
    p = points.tolist() if isinstance(points, np.ndarray) else [list(q) for q in points]
    nx = ny = nz = 0.0
    m = len(p)
    for i in range(m):
        x0, y0, z0 = p[i]
        x1, y1, z1 = p[(i + 1) % m]
        nx += (y0 - y1) * (z0 + z1)
        ny += (z0 - z1) * (x0 + x1)
        nz += (x0 - x1) * (y0 + y1)
    return np.array((nx, ny, nz))


def newell_normal(points) -> np.ndarray:
    """Unit polygon normal via Newell's method.

    For planar convex counter-clockwise cycles this equals the right-hand-rule
    plane normal; reversing the cycle flips the sign.
    """
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] < 3 or p.shape[1] != 3:
        raise DegenerateGeometryError(f"need >= 3 points of dim 3, got {p.shape}")
    n = newell_vector(p)
    mag = float(np.linalg.norm(n))
    if mag <= _DEGENERATE_EPS:
        raise DegenerateGeometryError("degenerate face: zero Newell vector")
    return n / mag


def face_area(points) -> float:
    """Polygon area from the Newell vector (exact for planar faces)."""
    return float(np.linalg.norm(newell_vector(np.asarray(points, float)))) / 2.0


def face_geometry(mesh: PolyMesh, face_index: int) -> FaceGeometry:
    pts = mesh.face_points(face_index)
    return FaceGeometry(
        centroid=pts.mean(axis=0),
        newell_normal=newell_normal(pts),
        area=face_area(pts),
    )
