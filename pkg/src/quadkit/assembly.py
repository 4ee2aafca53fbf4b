"""Face assembly from anchors: retrieve candidate vertices per centroid in a
feature space, progressively enumerate vertex subsets (quads first, then
triangles), order each subset into a cycle, and keep the first candidate that
survives geometric verification with the centroid tolerance.

Feature spaces are pluggable: raw coordinates (euclidean), vectors loaded
from a feature file (externally trained embeddings), or a ground-truth
incidence oracle used as the idealized stand-in for a trained encoder.
Every provider maps a centroid to one distance per vertex; retrieval and
subset ranking only ever consume those distances.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometryError
from .mesh import PolyMesh
from .tokenizer import AnchorSet
from .verify import VerifyConfig, verify_quad, verify_tri

_EPS = 1e-12


class EuclideanFeatureSpace:
    """Embedding = raw 3D anchor coordinates; distances are squared
    Euclidean."""

    name = "euclidean"

    def __init__(self, anchors: AnchorSet):
        self.vertices = anchors.vertices
        self.centroids = anchors.centroids

    def centroid_to_vertex_distances(self, c_index: int) -> np.ndarray:
        diff = self.vertices - self.centroids[c_index]
        return np.einsum("ij,ij->i", diff, diff)


class FileFeatureSpace:
    """Per-anchor embedding vectors from a feature file (vertices first,
    centroids second, matching the anchor file order)."""

    name = "file"

    def __init__(self, anchors: AnchorSet, vectors: np.ndarray):
        nv, nc = len(anchors.vertices), len(anchors.centroids)
        vectors = np.asarray(vectors, dtype=np.float64)
        if len(vectors) != nv + nc:
            raise ValueError(
                f"feature file has {len(vectors)} rows, anchors need {nv + nc}")
        self.vertex_vecs = vectors[:nv]
        self.centroid_vecs = vectors[nv:]

    def centroid_to_vertex_distances(self, c_index: int) -> np.ndarray:
        diff = self.vertex_vecs - self.centroid_vecs[c_index]
        return np.einsum("ij,ij->i", diff, diff)


class IncidenceOracle:
    """Ground-truth feature space: distance 0-ish between a centroid and the
    vertices of its source face, 1-ish otherwise.

    A small scaled Euclidean term (never large enough to cross the 0/1 gap)
    breaks ties deterministically, mirroring how a perfectly trained encoder
    would still order same-face vertices by proximity. Centroid i corresponds
    to face i of the ground-truth mesh.
    """

    name = "oracle"
    _tie_scale = 1e-2

    def __init__(self, anchors: AnchorSet, gt_mesh: PolyMesh):
        if len(anchors.centroids) != gt_mesh.num_faces:
            raise ValueError("oracle needs one centroid per ground-truth face")
        self.vertices = anchors.vertices
        self.centroids = anchors.centroids
        # map each GT face's vertex positions onto anchor vertex indices
        self.face_vertex_ids = []
        lookup = {tuple(np.round(p, 12)): i for i, p in enumerate(anchors.vertices)}
        for face in gt_mesh.faces:
            ids = []
            for v in face:
                key = tuple(np.round(gt_mesh.vertices[v], 12))
                if key not in lookup:
                    raise ValueError(
                        "ground-truth vertex missing from anchor set; extract "
                        "anchors from the same mesh")
                ids.append(lookup[key])
            self.face_vertex_ids.append(tuple(ids))

    def centroid_to_vertex_distances(self, c_index: int) -> np.ndarray:
        diff = self.vertices - self.centroids[c_index]
        euclid = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        dist = np.ones(len(self.vertices)) + euclid * self._tie_scale
        own = list(self.face_vertex_ids[c_index])
        dist[own] = euclid[own] * self._tie_scale
        return dist


@dataclass(frozen=True)
class AssemblyConfig:
    top_k: int = 20
    pool_max: int = 20
    verify: VerifyConfig = field(default_factory=VerifyConfig)


@dataclass(frozen=True)
class AssembledFace:
    centroid_index: int
    cycle: tuple[int, ...]   # anchor vertex indices, ordered
    kind: str                # "quad" | "tri"


@dataclass
class AssembledMesh:
    faces: list[AssembledFace]
    unresolved: list[int]
    recon_rate: float
    seconds: float

    def to_polymesh(self, anchors: AnchorSet) -> PolyMesh:
        return PolyMesh(anchors.vertices, [f.cycle for f in self.faces],
                        validate=False)


def retrieve_topk(c_index: int, fs, k: int) -> list[int]:
    """Indices of the k nearest vertices by feature distance, ascending;
    ties broken by ascending vertex index. Returns fewer when the anchor set
    is smaller than k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    dist = fs.centroid_to_vertex_distances(c_index)
    if len(dist) < 3:
        raise ValueError("need at least 3 vertices to assemble any face")
    order = np.argsort(dist, kind="stable")
    return [int(i) for i in order[:k]]


def pcfs_enumerate(pool: list[int], distances, k: int, pool_max: int):
    """Progressive candidate subsets: the pool grows from size k to
    min(pool_max, len(pool)); at each size the not-yet-seen k-subsets are
    yielded by ascending mean feature distance (ties: lexicographic index
    order). A cross-pool cache guarantees no subset is yielded twice.
    """
    if k > len(pool):
        return
    dmap = {v: float(d) for v, d in zip(pool, distances)}
    seen = set()
    limit = min(pool_max, len(pool))
    for size in range(k, limit + 1):
        live = pool[:size]
        fresh = []
        for combo in itertools.combinations(live, k):
            if combo in seen:
                continue
            seen.add(combo)
            fresh.append(combo)
        fresh.sort(key=lambda combo: (sum(dmap[v] for v in combo), combo))
        yield from fresh


def order_cycle(indices, positions):
    """Order an unordered vertex subset into a polygon cycle.

    Projects the points onto their best-fit plane (least-variance axis of the
    centroid-anchored covariance), sorts by polar angle around the projected
    centroid, starts the cycle at the smallest vertex index, and orients it so
    the Newell normal agrees with the plane normal (whose sign is fixed by the
    first-nonzero-component rule). Raises for collinear subsets.
    """
    pts = np.asarray(positions, dtype=np.float64)
    center = pts.mean(axis=0)
    rel = pts - center
    cov = rel.T @ rel
    evals, evecs = np.linalg.eigh(cov)
    # rank check: collinear points have two near-zero eigenvalues
    if evals[1] <= max(evals[2], _EPS) * 1e-9:
        raise DegenerateGeometryError("subset is collinear; no face plane")
    normal = evecs[:, 0]
    for comp in normal:
        if abs(comp) > _EPS:
            if comp < 0:
                normal = -normal
            break
    t1 = evecs[:, 2]
    t2 = np.cross(normal, t1)
    ang = np.arctan2(rel @ t2, rel @ t1)
    order = sorted(range(len(indices)), key=lambda i: (ang[i], indices[i]))
    cycle = [indices[i] for i in order]
    # rotate to canonical start (never flips orientation)
    start = cycle.index(min(cycle))
    return tuple(cycle[start:] + cycle[:start])


def assemble_face(c_index: int, anchors: AnchorSet, fs,
                  cfg: AssemblyConfig) -> AssembledFace | None:
    """Quad-first, triangle-next assembly for one centroid; None when every
    candidate subset fails verification."""
    shortlist = retrieve_topk(c_index, fs, cfg.top_k)
    dist = fs.centroid_to_vertex_distances(c_index)
    sl_dist = [dist[v] for v in shortlist]
    c_gen = anchors.centroids[c_index]

    for k, kind, checker in ((4, "quad", verify_quad), (3, "tri", verify_tri)):
        for subset in pcfs_enumerate(shortlist, sl_dist, k, cfg.pool_max):
            try:
                cycle = order_cycle(subset, anchors.vertices[list(subset)])
            except DegenerateGeometryError:
                continue
            pts = anchors.vertices[list(cycle)]
            report = checker(pts, c_gen=c_gen, cfg=cfg.verify)
            if report.passed:
                return AssembledFace(centroid_index=c_index, cycle=cycle,
                                     kind=kind)
    return None


def assemble_mesh(anchors: AnchorSet, fs,
                  cfg: AssemblyConfig | None = None) -> AssembledMesh:
    """Assemble one face per centroid, each independently; output ordered by
    centroid index. Unresolvable centroids are reported, not fatal."""
    cfg = cfg or AssemblyConfig()
    if len(anchors.vertices) < 3:
        raise ValueError("need at least 3 anchor vertices")
    if len(anchors.centroids) < 1:
        raise ValueError("need at least one centroid")
    t0 = time.perf_counter()
    faces = []
    unresolved = []
    for ci in range(len(anchors.centroids)):
        face = assemble_face(ci, anchors, fs, cfg)
        if face is None:
            unresolved.append(ci)
        else:
            faces.append(face)
    seconds = time.perf_counter() - t0
    total = len(anchors.centroids)
    return AssembledMesh(faces=faces, unresolved=unresolved,
                         recon_rate=len(faces) / total, seconds=seconds)


def save_features(vectors: np.ndarray, path) -> None:
    """Feature file: header ``features <count> <dim>`` then one row of
    floats per anchor (vertices first, centroids second)."""
    vectors = np.asarray(vectors, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"features {vectors.shape[0]} {vectors.shape[1]}\n")
        for row in vectors:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def load_features(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != "features":
            raise ValueError(f"{path}: bad feature file header")
        count, dim = int(header[1]), int(header[2])
        rows = []
        for line in fh:
            if line.strip():
                rows.append([float(x) for x in line.split()])
    arr = np.asarray(rows, dtype=np.float64)
    if arr.shape != (count, dim):
        raise ValueError(f"{path}: header says {(count, dim)}, got {arr.shape}")
    return arr


def anchors_from_mesh(mesh: PolyMesh) -> AnchorSet:
    """Vertices plus computed face centroids: the ground-truth-driven input
    path for assembly."""
    from .mesh import all_face_centroids
    return AnchorSet(mesh.vertices, all_face_centroids(mesh))
