"""Triangle-pair merging into quad-dominant meshes: candidate enumeration
over internal edges, angle/alignment quality scoring, geometry prefiltering,
globally optimal (or greedy) merge selection, and normal-consistency
enforcement on the merged quads.

Vertex positions are never modified; every input triangle either survives
verbatim or is absorbed into exactly one quad.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateGeometryError
from .matching import Matching, WeightedGraph, greedy_matching, max_weight_matching
from .mesh import (PolyMesh, build_edge_face_map, newell_normal,
                   newell_vector)
from .verify import VerifyConfig, interior_angles, verify_quad

_EPS = 1e-12


@dataclass
class MergeCandidate:
    """An internal edge shared by two triangles and the quad it implies."""

    edge: tuple[int, int]
    face_a: int
    face_b: int
    quad_cycle: tuple[int, int, int, int]
    q_angle: float = 0.0
    q_align: float = 0.0
    weight: float = 0.0
    align_fallback: bool = False


@dataclass(frozen=True)
class OperatorConfig:
    alpha1: float = 0.8
    alpha2: float = 0.2
    verify: VerifyConfig = field(default_factory=lambda: VerifyConfig(
        enable_centroid=False))
    mode: str = "global"

    def __post_init__(self):
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise ValueError("score weights must be non-negative")
        if self.mode not in ("global", "greedy"):
            raise ValueError(f"mode must be global or greedy, got {self.mode!r}")


@dataclass
class MergeResult:
    mesh: PolyMesh
    merged_count: int
    triangles_left: int
    total_weight: float
    graph: WeightedGraph
    matching: Matching


def _implied_quad(face_a, face_b, edge) -> tuple[int, int, int, int] | None:
    """Quad cycle for two triangles sharing ``edge``.

    With the shared edge traversed x -> y inside face_a (off-edge vertex c)
    and face_b contributing off-edge vertex d, the cycle is (c, x, d, y):
    face_a's boundary with the x->y step replaced by x -> d -> y, so a
    consistently oriented pair yields an equally oriented quad.
    """
    ea, eb = edge
    # find the directed traversal of the shared edge within face_a
    x = y = -1
    for i in range(3):
        a0, a1 = face_a[i], face_a[(i + 1) % 3]
        if (a0, a1) == (ea, eb) or (a0, a1) == (eb, ea):
            x, y = a0, a1
            break
    if x < 0:
        return None
    c = next(v for v in face_a if v not in (x, y))
    d = next(v for v in face_b if v not in (x, y))
    if c == d:
        return None
    return (c, x, d, y)


def enumerate_candidates(mesh: PolyMesh) -> list[MergeCandidate]:
    """One unscored candidate per internal edge shared by exactly two
    triangles, in sorted edge order. Edges touching non-triangles or more
    than two faces are skipped."""
    emap = build_edge_face_map(mesh)
    out = []
    for edge in sorted(emap):
        incident = emap[edge]
        if len(incident) != 2:
            continue
        fa, fb = incident
        if len(mesh.faces[fa]) != 3 or len(mesh.faces[fb]) != 3:
            continue
        cycle = _implied_quad(mesh.faces[fa], mesh.faces[fb], edge)
        if cycle is None:
            continue
        out.append(MergeCandidate(edge=edge, face_a=fa, face_b=fb,
                                  quad_cycle=cycle))
    return out


def q_angle(quad_points) -> float:
    """Angle-regularity score in [0, 1]: 1 for a rectangle, decaying as
    interior angles leave 90 degrees."""
    try:
        angles = interior_angles(quad_points)
    except DegenerateGeometryError:
        return 0.0
    return sum(max(0.0, 90.0 - abs(t - 90.0)) for t in angles) / 360.0


def _one_ring(mesh: PolyMesh, vertex_faces, edge):
    """Faces incident to either edge endpoint and the union of their
    vertices."""
    faces = sorted(set(vertex_faces[edge[0]]) | set(vertex_faces[edge[1]]))
    verts = sorted({v for fi in faces for v in mesh.faces[fi]})
    return faces, verts


def vertex_face_incidence(mesh: PolyMesh) -> list[list[int]]:
    out = [[] for _ in range(mesh.num_vertices)]
    for fi, face in enumerate(mesh.faces):
        for v in face:
            out[v].append(fi)
    return out


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    for comp in vec:
        if abs(comp) > _EPS:
            return vec if comp > 0 else -vec
    return vec


def all_face_newell_vectors(mesh: PolyMesh) -> np.ndarray:
    """Unnormalized Newell vectors for every face (vectorized for triangles,
    which dominate the merge path); |v| = 2 * face area."""
    out = np.zeros((mesh.num_faces, 3))
    tri_idx = [i for i, f in enumerate(mesh.faces) if len(f) == 3]
    if tri_idx:
        tris = np.array([mesh.faces[i] for i in tri_idx])
        a = mesh.vertices[tris[:, 0]]
        b = mesh.vertices[tris[:, 1]]
        c = mesh.vertices[tris[:, 2]]
        out[tri_idx] = np.cross(b - a, c - a)
    for i, f in enumerate(mesh.faces):
        if len(f) != 3:
            out[i] = newell_vector(mesh.face_points(i))
    return out


def principal_direction(mesh: PolyMesh, edge, vertex_faces=None,
                        face_newells=None, eigengap_tol: float = 1e-6):
    """Dominant in-plane stretch direction of the one-ring around an edge.

    Tangent plane normal: area-weighted average of the one-ring face normals.
    One-ring vertex positions (relative to the edge midpoint) are projected
    into that plane; the dominant eigenvector of their mean-centered 2D
    covariance is lifted back to 3D, unit length, sign-canonicalized (first
    component above noise made positive).

    Returns (direction, fallback_flag). The fallback (the in-plane
    perpendicular of the edge itself) fires when the covariance is
    rank-deficient or the eigengap is below ``eigengap_tol`` relative to the
    leading eigenvalue (isotropic neighborhoods have no principal direction).
    """
    if vertex_faces is None:
        vertex_faces = vertex_face_incidence(mesh)
    a, b = edge
    faces, verts = _one_ring(mesh, vertex_faces, edge)
    if not faces:
        raise DegenerateGeometryError(f"edge {edge} has no incident faces")
    midpoint = (mesh.vertices[a] + mesh.vertices[b]) / 2.0
    d_e = mesh.vertices[b] - mesh.vertices[a]
    d_norm = float(np.linalg.norm(d_e))
    if d_norm <= _EPS:
        raise DegenerateGeometryError(f"edge {edge} has zero length")
    d_e = d_e / d_norm

    if face_newells is not None:
        normal = face_newells[faces].sum(axis=0)
    else:
        # |newell| = 2 * area, so summing raw vectors is the area weighting
        normal = np.zeros(3)
        for fi in faces:
            normal += newell_vector(mesh.face_points(fi))
    nmag = float(np.linalg.norm(normal))
    if nmag <= _EPS:
        # folded-over ring; fall back to any plane containing the edge
        normal = np.zeros(3)
        normal[int(np.argmin(np.abs(d_e)))] = 1.0
        normal = normal - d_e * float(np.dot(normal, d_e))
        nmag = float(np.linalg.norm(normal))
    normal = normal / nmag

    def in_plane_perp():
        perp = np.cross(normal, d_e)
        mag = float(np.linalg.norm(perp))
        if mag <= _EPS:
            raise DegenerateGeometryError("edge parallel to ring normal")
        return _canonical_sign(perp / mag)

    # orthonormal in-plane basis
    t1 = d_e - normal * float(np.dot(d_e, normal))
    m1 = float(np.linalg.norm(t1))
    if m1 <= _EPS:
        return in_plane_perp(), True
    t1 = t1 / m1
    t2 = np.cross(normal, t1)

    rel = mesh.vertices[verts] - midpoint
    rel = rel - np.outer(rel @ normal, normal)
    uv = np.stack([rel @ t1, rel @ t2], axis=1)
    uv = uv - uv.mean(axis=0)  # PCA proper: second moment about the ring mean
    cov = uv.T @ uv
    evals, evecs = np.linalg.eigh(cov)
    lam1, lam2 = float(evals[1]), float(evals[0])  # eigh sorts ascending
    if lam1 <= _EPS or (lam1 - lam2) <= eigengap_tol * lam1:
        return in_plane_perp(), True
    dom = evecs[:, 1]
    direction = dom[0] * t1 + dom[1] * t2
    direction = direction / float(np.linalg.norm(direction))
    return _canonical_sign(direction), False


def q_align(mesh: PolyMesh, edge, vertex_faces=None) -> float:
    """Edge-removal alignment score sqrt(1 - (d_e . f_e)^2): 1 when the
    candidate edge is orthogonal to the local principal direction."""
    a, b = edge
    d_e = mesh.vertices[b] - mesh.vertices[a]
    mag = float(np.linalg.norm(d_e))
    if mag <= _EPS:
        raise DegenerateGeometryError(f"edge {edge} has zero length")
    d_e = d_e / mag
    f_e, _ = principal_direction(mesh, edge, vertex_faces=vertex_faces)
    dot = float(np.dot(d_e, f_e))
    return float(np.sqrt(max(0.0, 1.0 - dot * dot)))


def score_and_prefilter(mesh: PolyMesh, candidates, cfg: OperatorConfig,
                        vertex_faces=None) -> list[MergeCandidate]:
    """Score candidates and drop the invalid ones.

    Two gates: the orientation gate n_A . n_B > 0 (always on - merging
    opposed triangles is never meaningful) and the verification battery from
    ``cfg.verify`` (angle / convexity / fold; the centroid check has no
    target during curation). Survivors carry weight = a1*q_angle + a2*q_align.
    """
    if vertex_faces is None:
        vertex_faces = vertex_face_incidence(mesh)
    newells = all_face_newell_vectors(mesh)
    out = []
    for cand in candidates:
        # orientation gate: opposed source normals never merge
        if float(np.dot(newells[cand.face_a], newells[cand.face_b])) <= 0.0:
            continue
        quad_pts = mesh.vertices[list(cand.quad_cycle)]
        report = verify_quad(quad_pts, c_gen=None, cfg=cfg.verify)
        if not report.passed:
            continue
        qa = (sum(max(0.0, 90.0 - abs(t - 90.0)) for t in report.angles) / 360.0
              if report.angles else 0.0)
        try:
            f_e, fallback = principal_direction(mesh, cand.edge,
                                                vertex_faces=vertex_faces,
                                                face_newells=newells)
        except DegenerateGeometryError:
            continue
        d_e = mesh.vertices[cand.edge[1]] - mesh.vertices[cand.edge[0]]
        d_e = d_e / float(np.linalg.norm(d_e))
        dot = float(np.dot(d_e, f_e))
        ql = float(np.sqrt(max(0.0, 1.0 - dot * dot)))
        out.append(replace(cand, q_angle=qa, q_align=ql,
                           weight=cfg.alpha1 * qa + cfg.alpha2 * ql,
                           align_fallback=fallback))
    return out


def merge_detail(mesh: PolyMesh, cfg: OperatorConfig | None = None) -> MergeResult:
    """Full merge pipeline returning the mesh plus solve diagnostics."""
    cfg = cfg or OperatorConfig()
    candidates = enumerate_candidates(mesh)
    scored = score_and_prefilter(mesh, candidates, cfg)

    graph = WeightedGraph(
        mesh.num_faces,
        [(c.face_a, c.face_b, c.weight) for c in scored],
    )
    if cfg.mode == "global":
        matching = max_weight_matching(graph)
    else:
        matching = greedy_matching(graph)

    merged_faces = []
    absorbed = set()
    for k in sorted(matching.selected):
        cand = scored[k]
        merged_faces.append(cand.quad_cycle)
        absorbed.add(cand.face_a)
        absorbed.add(cand.face_b)
    passthrough = [f for i, f in enumerate(mesh.faces) if i not in absorbed]
    out = PolyMesh(mesh.vertices, list(merged_faces) + passthrough,
                   validate=False)
    out = enforce_normal_consistency(mesh, out)
    triangles_left = sum(1 for f in out.faces if len(f) == 3)
    return MergeResult(mesh=out, merged_count=len(matching.selected),
                       triangles_left=triangles_left,
                       total_weight=matching.total_weight,
                       graph=graph, matching=matching)


def merge(mesh: PolyMesh, cfg: OperatorConfig | None = None) -> PolyMesh:
    """Convert a triangle mesh to a quad-dominant mesh; non-triangle faces
    pass through untouched."""
    return merge_detail(mesh, cfg).mesh


def enforce_normal_consistency(mesh_before: PolyMesh,
                               merged: PolyMesh) -> PolyMesh:
    """Flip merged quads whose Newell normal opposes their source triangles.

    For every quad in ``merged`` that decomposes into two faces of
    ``mesh_before``, the quad cycle is reversed when its normal has negative
    dot with the (normalized) sum of the source normals; afterwards each
    merged quad satisfies newell(quad) . n_A > 0. Faces without a two-triangle
    decomposition (pass-through geometry) are left alone.
    """
    tri_normals = {}
    tris_at_vertex = {}
    for fi, face in enumerate(mesh_before.faces):
        if len(face) == 3:
            key = frozenset(face)
            try:
                tri_normals[key] = newell_normal(mesh_before.face_points(fi))
            except DegenerateGeometryError:
                continue
            for v in face:
                tris_at_vertex.setdefault(v, []).append(key)
    existing = {frozenset(f) for f in mesh_before.faces}

    fixed = []
    for face in merged.faces:
        if len(face) != 4 or frozenset(face) in existing:
            fixed.append(face)
            continue
        vs = frozenset(face)
        nearby = {key for v in face for key in tris_at_vertex.get(v, ())}
        sources = [tri_normals[key] for key in sorted(nearby, key=sorted)
                   if key <= vs]
        if len(sources) != 2:
            fixed.append(face)
            continue
        ref = sources[0] + sources[1]
        mag = float(np.linalg.norm(ref))
        if mag <= _EPS:
            fixed.append(face)
            continue
        ref /= mag
        try:
            qn = newell_normal(merged.vertices[list(face)])
        except DegenerateGeometryError:
            fixed.append(face)
            continue
        if float(np.dot(qn, ref)) < 0.0:
            fixed.append(tuple(reversed(face)))
        else:
            fixed.append(face)
    return PolyMesh(merged.vertices, fixed, validate=False)
