"""Evaluation metrics for quad-dominant meshes.

Geometric fidelity: Chamfer and Hausdorff distance on area-weighted surface
samples, volumetric IoU on a parity-voted voxel grid. Topological quality:
quadrilateral ratio, opposite-edge parallelism within quads (OEP),
opposite-edge directional consistency across adjacent quads (EFC), and the
edge-flow pipeline (feature-line extraction, tangent-guided chain tracing,
bidirectional curve distance, exponential alignment scoring).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateGeometryError, UndefinedMetricError
from .mesh import PolyMesh, build_edge_face_map, newell_normal

_EPS = 1e-12


# ---------------------------------------------------------------------------
# sampling, chamfer, hausdorff

@dataclass
class SampledSurface:
    points: np.ndarray
    source: PolyMesh
    sample_count: int


def _fan_triangles(mesh: PolyMesh) -> np.ndarray:
    tris = []
    for face in mesh.faces:
        for i in range(1, len(face) - 1):
            tris.append((face[0], face[i], face[i + 1]))
    return np.asarray(tris, dtype=np.int64).reshape(-1, 3)


def sample_surface(mesh: PolyMesh, n: int, seed: int = 0) -> SampledSurface:
    """Area-weighted uniform surface samples; faces are fan-triangulated for
    sampling only. Deterministic under the seed."""
    if n < 1:
        raise ValueError("sample count must be >= 1")
    if mesh.num_faces == 0:
        raise ValueError("cannot sample an empty mesh")
    tris = _fan_triangles(mesh)
    a = mesh.vertices[tris[:, 0]]
    b = mesh.vertices[tris[:, 1]]
    c = mesh.vertices[tris[:, 2]]
    areas = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    total = float(areas.sum())
    if total <= 0.0:
        raise DegenerateGeometryError("zero-area mesh cannot be sampled")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(tris), size=n, p=areas / total)
    r1 = np.sqrt(rng.random(n))
    r2 = rng.random(n)
    w0 = 1.0 - r1
    w1 = r1 * (1.0 - r2)
    w2 = r1 * r2
    pts = (a[chosen] * w0[:, None] + b[chosen] * w1[:, None]
           + c[chosen] * w2[:, None])
    return SampledSurface(points=pts, source=mesh, sample_count=n)


def _nn_dists(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    tree = cKDTree(dst)
    d, _ = tree.query(src, k=1)
    return d


def chamfer(a: SampledSurface, b: SampledSurface) -> float:
    """Symmetric Chamfer distance with plain (non-squared) distances."""
    d_ab = _nn_dists(a.points, b.points)
    d_ba = _nn_dists(b.points, a.points)
    return 0.5 * (float(d_ab.mean()) + float(d_ba.mean()))


def hausdorff(a: SampledSurface, b: SampledSurface) -> float:
    d_ab = _nn_dists(a.points, b.points)
    d_ba = _nn_dists(b.points, a.points)
    return max(float(d_ab.max()), float(d_ba.max()))


# ---------------------------------------------------------------------------
# voxel IoU

def _axis_occupancy(verts, tris, lo, step, res, axis):
    """Parity occupancy casting rays along ``axis`` through voxel centers."""
    ax_u, ax_v = [i for i in range(3) if i != axis]
    occ = np.zeros((res, res, res), dtype=bool)
    centers = lo[:, None] + (np.arange(res)[None, :] + 0.5) * step[:, None]
    a = verts[tris[:, 0]]
    b = verts[tris[:, 1]]
    c = verts[tris[:, 2]]
    for t in range(len(tris)):
        p0, p1, p2 = a[t], b[t], c[t]
        u0, v0 = p0[ax_u], p0[ax_v]
        u1, v1 = p1[ax_u], p1[ax_v]
        u2, v2 = p2[ax_u], p2[ax_v]
        umin, umax = min(u0, u1, u2), max(u0, u1, u2)
        vmin, vmax = min(v0, v1, v2), max(v0, v1, v2)
        iu0 = max(0, int(np.ceil((umin - lo[ax_u]) / step[ax_u] - 0.5)))
        iu1 = min(res - 1, int(np.floor((umax - lo[ax_u]) / step[ax_u] - 0.5)))
        iv0 = max(0, int(np.ceil((vmin - lo[ax_v]) / step[ax_v] - 0.5)))
        iv1 = min(res - 1, int(np.floor((vmax - lo[ax_v]) / step[ax_v] - 0.5)))
        if iu1 < iu0 or iv1 < iv0:
            continue
        us = centers[ax_u, iu0:iu1 + 1]
        vs = centers[ax_v, iv0:iv1 + 1]
        uu, vv = np.meshgrid(us, vs, indexing="ij")
        d00u, d00v = u1 - u0, v1 - v0
        d01u, d01v = u2 - u0, v2 - v0
        denom = d00u * d01v - d00v * d01u
        if abs(denom) <= _EPS:
            continue
        wu = uu - u0
        wv = vv - v0
        s = (wu * d01v - wv * d01u) / denom
        tt = (d00u * wv - d00v * wu) / denom
        inside = (s >= 0) & (tt >= 0) & (s + tt <= 1)
        if not inside.any():
            continue
        # interpolated crossing coordinate along the ray axis
        cross_c = (p0[axis] + s * (p1[axis] - p0[axis])
                   + tt * (p2[axis] - p0[axis]))
        ray_centers = centers[axis]
        iu_idx, iv_idx = np.nonzero(inside)
        for ui, vi in zip(iu_idx, iv_idx):
            cc = cross_c[ui, vi]
            before = ray_centers > cc
            sel = [slice(None)] * 3
            sel[ax_u] = iu0 + ui
            sel[ax_v] = iv0 + vi
            sel[axis] = before
            occ[tuple(sel)] ^= True
    return occ


def voxel_occupancy(mesh: PolyMesh, lo, hi, resolution: int) -> np.ndarray:
    """Solid voxelization by ray parity with 3-axis majority voting, which
    tolerates moderately非 watertight input."""
    verts = mesh.vertices
    tris = _fan_triangles(mesh)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    step = (hi - lo) / resolution
    votes = sum(
        _axis_occupancy(verts, tris, lo, step, resolution, axis).astype(np.int8)
        for axis in range(3))
    return votes >= 2


def voxel_iou(a: PolyMesh, b: PolyMesh, resolution: int = 48) -> float:
    """Volumetric intersection-over-union on a shared grid over the joint
    bounding box. Two empty occupancies count as identical (IoU 1)."""
    lo = np.minimum(a.vertices.min(axis=0), b.vertices.min(axis=0))
    hi = np.maximum(a.vertices.max(axis=0), b.vertices.max(axis=0))
    pad = 1e-6 + 0.5 * (hi - lo).max() / resolution
    # asymmetric padding keeps voxel centers off the lattice planes of
    # axis-aligned meshes, where ray-parity counting is ambiguous
    lo = lo - pad * 1.0072341
    hi = hi + pad
    occ_a = voxel_occupancy(a, lo, hi, resolution)
    occ_b = voxel_occupancy(b, lo, hi, resolution)
    union = int(np.count_nonzero(occ_a | occ_b))
    if union == 0:
        return 1.0
    inter = int(np.count_nonzero(occ_a & occ_b))
    return inter / union


# ---------------------------------------------------------------------------
# polygon-topology metrics

def quad_ratio(mesh: PolyMesh) -> float:
    """Fraction of faces that are quadrilaterals."""
    if mesh.num_faces == 0:
        raise UndefinedMetricError("quad ratio undefined on an empty face list")
    quads = sum(1 for f in mesh.faces if len(f) == 4)
    return quads / mesh.num_faces


def _abs_cos(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu <= _EPS or nv <= _EPS:
        return 0.0
    return abs(float(np.dot(u, v))) / (nu * nv)


def oep(mesh: PolyMesh) -> float:
    """Opposite-edge parallelism: mean over quads of the mean |cos| between
    the two opposite edge pairs; 1.0 for parallelograms/rectangles."""
    scores = []
    for face in mesh.faces:
        if len(face) != 4:
            continue
        p = mesh.vertices[list(face)]
        e = [p[(i + 1) % 4] - p[i] for i in range(4)]
        scores.append(0.5 * (_abs_cos(e[0], e[2]) + _abs_cos(e[1], e[3])))
    if not scores:
        raise UndefinedMetricError("OEP undefined: mesh has no quads")
    return float(np.mean(scores))


def efc(mesh: PolyMesh) -> float:
    """Edge-flow continuity across quad-quad adjacencies.

    For each edge shared by exactly two quads, each quad contributes its flow
    vector across the shared edge: from the shared edge's midpoint to the
    midpoint of the opposite edge. The score is the |cos| between the two
    flow vectors, averaged over all such shared edges; coplanar strips score
    1, a 90-degree hinge scores 0.
    """
    emap = build_edge_face_map(mesh)
    scores = []
    for edge in sorted(emap):
        incident = emap[edge]
        if len(incident) != 2:
            continue
        fa, fb = incident
        if len(mesh.faces[fa]) != 4 or len(mesh.faces[fb]) != 4:
            continue
        shared_mid = 0.5 * (mesh.vertices[edge[0]] + mesh.vertices[edge[1]])
        vecs = []
        for fi in (fa, fb):
            face = mesh.faces[fi]
            pos = -1
            for i in range(4):
                pair = (face[i], face[(i + 1) % 4])
                if pair == edge or pair == edge[::-1]:
                    pos = i
                    break
            if pos < 0:
                break
            j = (pos + 2) % 4
            opp_mid = 0.5 * (mesh.vertices[face[j]]
                             + mesh.vertices[face[(j + 1) % 4]])
            vecs.append(opp_mid - shared_mid)
        if len(vecs) == 2:
            scores.append(_abs_cos(vecs[0], vecs[1]))
    if not scores:
        raise UndefinedMetricError("EFC undefined: no quad-quad adjacency")
    return float(np.mean(scores))


# ---------------------------------------------------------------------------
# edge-flow ratio (feature lines)

@dataclass(frozen=True)
class EfrConfig:
    delta_long: float = 0.05
    delta_loop: float = 0.01
    ang_long: float = 0.12     # radians
    ang_loop: float = 0.78     # radians
    resample_m: int = 100
    resample_ns: int = 500
    tau: float = 0.02
    sharp_dihedral_deg: float = 30.0


@dataclass
class FeatureLine:
    kind: str                  # "long" | "loop"
    polyline: np.ndarray       # ordered points; loops store first != last
    closed: bool

    def full_points(self) -> np.ndarray:
        if self.closed:
            return np.vstack([self.polyline, self.polyline[:1]])
        return self.polyline


def _face_normals_or_none(mesh: PolyMesh):
    out = []
    for i in range(mesh.num_faces):
        try:
            out.append(newell_normal(mesh.face_points(i)))
        except DegenerateGeometryError:
            out.append(None)
    return out


def hard_edges(mesh: PolyMesh, cfg: EfrConfig) -> list[tuple[int, int]]:
    """Boundary edges plus edges whose two incident faces fold by more than
    the sharp threshold."""
    emap = build_edge_face_map(mesh)
    normals = _face_normals_or_none(mesh)
    cos_thresh = math.cos(math.radians(cfg.sharp_dihedral_deg))
    out = []
    for edge in sorted(emap):
        incident = emap[edge]
        if len(incident) == 1:
            out.append(edge)
        elif len(incident) == 2:
            na, nb = normals[incident[0]], normals[incident[1]]
            if na is None or nb is None:
                continue
            if float(np.dot(na, nb)) < cos_thresh - 1e-12:
                out.append(edge)
    return out


def extract_feature_lines(mesh: PolyMesh, cfg: EfrConfig | None = None
                          ) -> list[FeatureLine]:
    """Group hard edges into chains through degree-2 connectivity: closed
    degree-2 cycles become loops, open chains with >= 3 points become long
    features; stubs between junction vertices are dropped."""
    cfg = cfg or EfrConfig()
    edges = hard_edges(mesh, cfg)
    if not edges:
        return []
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for v in adj:
        adj[v].sort()
    degree = {v: len(nb) for v, nb in adj.items()}
    visited = set()
    lines = []

    def walk(start, nxt):
        """Follow degree-2 vertices from start toward nxt; returns the chain."""
        chain = [start, nxt]
        visited.add((min(start, nxt), max(start, nxt)))
        prev, cur = start, nxt
        while degree[cur] == 2 and cur != start:
            a, b = adj[cur]
            nxt2 = b if a == prev else a
            key = (min(cur, nxt2), max(cur, nxt2))
            if key in visited:
                break
            visited.add(key)
            chain.append(nxt2)
            prev, cur = cur, nxt2
        return chain

    # open chains seeded at junctions / endpoints (degree != 2)
    seeds = sorted(v for v in adj if degree[v] != 2)
    for s in seeds:
        for nb in adj[s]:
            key = (min(s, nb), max(s, nb))
            if key in visited:
                continue
            chain = walk(s, nb)
            if len(chain) >= 3:
                lines.append(FeatureLine(
                    kind="long",
                    polyline=mesh.vertices[chain].copy(),
                    closed=False))
    # remaining edges form pure degree-2 cycles
    for a, b in edges:
        key = (min(a, b), max(a, b))
        if key in visited:
            continue
        chain = walk(a, b)
        if chain[-1] == a:
            chain = chain[:-1]
            lines.append(FeatureLine(
                kind="loop",
                polyline=mesh.vertices[chain].copy(),
                closed=True))
        elif len(chain) >= 3:
            lines.append(FeatureLine(
                kind="long",
                polyline=mesh.vertices[chain].copy(),
                closed=False))
    return lines


def resample_polyline(points: np.ndarray, n: int) -> np.ndarray:
    """Arc-length uniform resampling to exactly n points."""
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        raise DegenerateGeometryError("polyline needs >= 2 points")
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    total = float(seg.sum())
    if total <= 0.0:
        raise DegenerateGeometryError("zero-length polyline")
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, total, n)
    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, len(seg) - 1)
    local = (targets - cum[idx]) / np.where(seg[idx] > 0, seg[idx], 1.0)
    return pts[idx] + (pts[idx + 1] - pts[idx]) * local[:, None]


def curve_distance(p, q, ns: int = 500) -> float:
    """Bidirectional mean pairwise distance after resampling both polylines
    to ns points: min(forward pairing, reversed pairing)."""
    rp = resample_polyline(np.asarray(p, float), ns)
    rq = resample_polyline(np.asarray(q, float), ns)
    fwd = float(np.linalg.norm(rp - rq, axis=1).mean())
    rev = float(np.linalg.norm(rp - rq[::-1], axis=1).mean())
    return min(fwd, rev)


def _dense_samples(pts: np.ndarray, closed: bool, delta: float, m_base: int):
    """Per-segment dense samples of a polyline plus backward-difference
    tangents.

    Samples land exactly on the polyline vertices (corner tangents never
    straddle a turn) and segment spacing stays well below delta so on-curve
    mesh vertices always pass the nearness gate. The tangent stored at a
    sample is the direction of the segment arriving there, so a chain walking
    the polyline itself aligns exactly at every step, corners included.
    """
    length = float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())
    if length <= 0.0:
        raise DegenerateGeometryError("zero-length feature polyline")
    spacing = min(delta / 4.0, length / max(1, m_base - 1))
    spacing = max(spacing, length / 20000)
    samples = [pts[0]]
    tangents = [None]
    for a, b in zip(pts[:-1], pts[1:]):
        seg = b - a
        seg_len = float(np.linalg.norm(seg))
        if seg_len <= 0.0:
            continue
        direction = seg / seg_len
        k = max(1, int(math.ceil(seg_len / spacing)))
        for s in range(1, k + 1):
            samples.append(a + seg * (s / k))
            tangents.append(direction)
    if tangents[0] is None:
        tangents[0] = tangents[-1] if closed else tangents[1]
    return np.asarray(samples), np.asarray(tangents)


def _vertex_adjacency(mesh: PolyMesh) -> dict[int, list[int]]:
    adj: dict[int, set[int]] = {}
    for face in mesh.faces:
        m = len(face)
        for i in range(m):
            a, b = face[i], face[(i + 1) % m]
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    return {v: sorted(nb) for v, nb in adj.items()}


def trace_chain(feature: FeatureLine, out_mesh: PolyMesh,
                cfg: EfrConfig | None = None, adjacency=None):
    """Best-matching edge chain on ``out_mesh`` for one feature line.

    The feature is resampled to M points with local tangents; output vertices
    within delta of the feature are collected, each start vertex grows a chain
    greedily toward the neighbor best aligned with the local tangent (both
    traversal signs, angular threshold by feature kind); the chain with the
    smallest bidirectional curve distance wins. None when no chain of >= 2
    vertices exists.
    """
    cfg = cfg or EfrConfig()
    pts = feature.full_points()
    delta = cfg.delta_loop if feature.kind == "loop" else cfg.delta_long
    ang_max = cfg.ang_loop if feature.kind == "loop" else cfg.ang_long
    dense, tangents = _dense_samples(pts, feature.closed, delta,
                                     cfg.resample_m)

    tree = cKDTree(dense)
    d, phi = tree.query(out_mesh.vertices, k=1)
    near_ids = np.nonzero(d < delta)[0]
    if len(near_ids) < 2:
        return None, math.inf
    near = set(int(v) for v in near_ids)
    if adjacency is None:
        adjacency = _vertex_adjacency(out_mesh)

    best_chain = None
    best_dist = math.inf
    cos_min = math.cos(ang_max)
    for start in sorted(near):
        for sign in (1.0, -1.0):
            chain = [start]
            chain_set = {start}
            cur = start
            while True:
                best_nb = -1
                best_cos = cos_min
                for nb in adjacency.get(cur, ()):
                    if nb not in near or nb in chain_set:
                        continue
                    step = out_mesh.vertices[nb] - out_mesh.vertices[cur]
                    mag = float(np.linalg.norm(step))
                    if mag <= _EPS:
                        continue
                    t = tangents[phi[nb]] * sign
                    cosv = float(np.dot(step, t)) / mag
                    if cosv > best_cos:
                        best_cos = cosv
                        best_nb = nb
                if best_nb < 0:
                    break
                chain.append(best_nb)
                chain_set.add(best_nb)
                cur = best_nb
            if len(chain) < 2:
                continue
            cpts = out_mesh.vertices[chain]
            if (feature.kind == "loop" and len(chain) >= 3
                    and chain[0] in adjacency.get(chain[-1], ())):
                cpts = np.vstack([cpts, cpts[:1]])
            dist = curve_distance(pts, cpts, cfg.resample_ns)
            if dist < best_dist:
                best_dist = dist
                best_chain = cpts
    if best_chain is None:
        return None, math.inf
    return best_chain, best_dist


def efr(gt: PolyMesh, out: PolyMesh, cfg: EfrConfig | None = None) -> float:
    """Edge Flow Ratio: mean over ground-truth feature lines of
    exp(-curve_distance / tau) for the matched output chain; unmatched
    features score 0."""
    cfg = cfg or EfrConfig()
    features = extract_feature_lines(gt, cfg)
    if not features:
        raise UndefinedMetricError("EFR undefined: ground truth has no feature lines")
    if out.num_faces == 0 or out.num_vertices == 0:
        return 0.0
    out_lo = out.vertices.min(axis=0)
    out_hi = out.vertices.max(axis=0)
    adjacency = _vertex_adjacency(out)
    scores = []
    for feature in features:
        pts = feature.full_points()
        delta = cfg.delta_loop if feature.kind == "loop" else cfg.delta_long
        # bounding-box prefilter: skip features disjoint from the output
        if (np.any(pts.max(axis=0) < out_lo - delta)
                or np.any(pts.min(axis=0) > out_hi + delta)):
            scores.append(0.0)
            continue
        chain, dist = trace_chain(feature, out, cfg, adjacency=adjacency)
        if chain is None:
            scores.append(0.0)
        else:
            scores.append(math.exp(-dist / cfg.tau))
    return float(np.mean(scores))
