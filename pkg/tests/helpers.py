"""Deterministic mesh factories shared across the test suite."""

import numpy as np

from quadkit.mesh import PolyMesh


def tri_grid(n, diag="consistent", noise=0.0, seed=0, span=(-1.0, 1.0)):
    """n x n cell planar grid triangulated by consistent diagonals."""
    xs = np.linspace(span[0], span[1], n + 1)
    rng = np.random.default_rng(seed)
    verts = []
    for j in range(n + 1):
        for i in range(n + 1):
            z = rng.uniform(-noise, noise) if noise else 0.0
            verts.append((xs[i], xs[j], z))

    def vid(i, j):
        return j * (n + 1) + i

    faces = []
    for j in range(n):
        for i in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            if diag == "consistent" or (i + j) % 2 == 0:
                faces.append((a, b, c))
                faces.append((a, c, d))
            else:
                faces.append((a, b, d))
                faces.append((b, c, d))
    return PolyMesh(verts, faces)


def quad_grid(n, span=(-1.0, 1.0), z=0.0):
    xs = np.linspace(span[0], span[1], n + 1)
    verts = [(x, y, z) for y in xs for x in xs]

    def vid(i, j):
        return j * (n + 1) + i

    faces = [(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
             for j in range(n) for i in range(n)]
    return PolyMesh(verts, faces)


def cube(side=2.0, center=(0.0, 0.0, 0.0)):
    """Axis-aligned cube with outward-oriented quad faces."""
    h = side / 2.0
    cx, cy, cz = center
    v = [(cx - h, cy - h, cz - h), (cx + h, cy - h, cz - h),
         (cx + h, cy + h, cz - h), (cx - h, cy + h, cz - h),
         (cx - h, cy - h, cz + h), (cx + h, cy - h, cz + h),
         (cx + h, cy + h, cz + h), (cx - h, cy + h, cz + h)]
    f = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4),
         (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]
    return PolyMesh(v, f)


def folded_sheet_quads(n, angle_deg=90.0):
    """Two n x n quad patches joined along a crease at the given fold."""
    ang = np.radians(angle_deg)
    xs = np.linspace(0.0, 1.0, n + 1)
    verts = [(x, y, 0.0) for y in xs for x in xs]
    base = len(verts)
    dx, dz = np.cos(np.pi - ang), np.sin(np.pi - ang)
    for j in range(n + 1):
        for i in range(1, n + 1):
            verts.append((1.0 + xs[i] * dx, xs[j], xs[i] * dz))

    def vid(i, j):
        return j * (n + 1) + i

    def wid(i, j):
        return base + j * n + (i - 1)

    faces = []
    for j in range(n):
        for i in range(n):
            faces.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)))
    for j in range(n):
        for i in range(n):
            a = vid(n, j) if i == 0 else wid(i, j)
            d = vid(n, j + 1) if i == 0 else wid(i, j + 1)
            faces.append((a, wid(i + 1, j), wid(i + 1, j + 1), d))
    return PolyMesh(verts, faces)


def triangulate_fan(mesh):
    faces = []
    for face in mesh.faces:
        for i in range(1, len(face) - 1):
            faces.append((face[0], face[i], face[i + 1]))
    return PolyMesh(mesh.vertices, faces)


def sphere_tris(n_theta=12, n_phi=24, radius=1.0):
    """UV sphere triangulation, consistently outward-oriented."""
    verts = [(0.0, 0.0, radius)]
    for it in range(1, n_theta):
        theta = np.pi * it / n_theta
        for ip in range(n_phi):
            phi = 2.0 * np.pi * ip / n_phi
            verts.append((radius * np.sin(theta) * np.cos(phi),
                          radius * np.sin(theta) * np.sin(phi),
                          radius * np.cos(theta)))
    verts.append((0.0, 0.0, -radius))
    south = len(verts) - 1

    def rid(it, ip):
        return 1 + (it - 1) * n_phi + (ip % n_phi)

    faces = []
    for ip in range(n_phi):
        faces.append((0, rid(1, ip), rid(1, ip + 1)))
    for it in range(1, n_theta - 1):
        for ip in range(n_phi):
            a, b = rid(it, ip), rid(it, ip + 1)
            c, d = rid(it + 1, ip + 1), rid(it + 1, ip)
            faces.append((a, d, c))
            faces.append((a, c, b))
    for ip in range(n_phi):
        faces.append((south, rid(n_theta - 1, ip + 1), rid(n_theta - 1, ip)))
    return PolyMesh(verts, faces)


def torus_tris(n_major=18, n_minor=10, r_major=1.0, r_minor=0.35):
    verts = []
    for i in range(n_major):
        u = 2.0 * np.pi * i / n_major
        for j in range(n_minor):
            v = 2.0 * np.pi * j / n_minor
            verts.append((
                (r_major + r_minor * np.cos(v)) * np.cos(u),
                (r_major + r_minor * np.cos(v)) * np.sin(u),
                r_minor * np.sin(v)))

    def vid(i, j):
        return (i % n_major) * n_minor + (j % n_minor)

    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((a, b, c))
            faces.append((a, c, d))
    return PolyMesh(verts, faces)


def blob_tris(n_theta=12, n_phi=24, seed=5):
    """Mixed-curvature blob: a sphere with smooth radial bumps."""
    base = sphere_tris(n_theta, n_phi)
    v = base.vertices.copy()
    r = np.linalg.norm(v, axis=1)
    d = v / r[:, None]
    bump = (1.0
            + 0.25 * np.sin(3.0 * np.arctan2(d[:, 1], d[:, 0]))
            * np.sin(2.0 * np.arccos(np.clip(d[:, 2], -1, 1)))
            + 0.15 * d[:, 2] ** 3)
    return PolyMesh(d * (r * bump)[:, None], base.faces)


def folded_sheet_tris(n=8, angle_deg=120.0):
    return triangulate_fan(folded_sheet_quads(n, angle_deg))


def refine_midpoint(mesh):
    """One level of linear subdivision: every edge split once, quads become
    four quads (edge midpoints + face centroid), triangles four triangles.
    Geometry is unchanged for planar faces."""
    verts = [tuple(p) for p in mesh.vertices]
    index = {p: i for i, p in enumerate(verts)}

    def vert_id(p):
        key = tuple(p)
        if key not in index:
            index[key] = len(verts)
            verts.append(key)
        return index[key]

    faces = []
    for face in mesh.faces:
        pts = mesh.vertices[list(face)]
        mids = [vert_id((pts[i] + pts[(i + 1) % len(face)]) / 2.0)
                for i in range(len(face))]
        if len(face) == 3:
            a, b, c = face
            ab, bc, ca = mids
            faces += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        elif len(face) == 4:
            center = vert_id(pts.mean(axis=0))
            a, b, c, d = face
            ab, bc, cd, da = mids
            faces += [(a, ab, center, da), (ab, b, bc, center),
                      (center, bc, c, cd), (da, center, cd, d)]
        else:
            center = vert_id(pts.mean(axis=0))
            m = len(face)
            for i in range(m):
                faces.append((face[i], mids[i], center,
                              mids[(i - 1) % m]))
    return PolyMesh(np.array(verts, dtype=np.float64), faces)
