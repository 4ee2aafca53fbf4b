"""Geometric verification battery shared by face assembly and the tri-to-quad
operator: interior angle range, convexity, diagonal fold (dihedral), and
centroid tolerance.

All threshold comparisons are inclusive. The fold angle of a planar quad is 0
by construction, so planar quads always pass the dihedral gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import DegenerateGeometryError
from .mesh import newell_vector

_EPS = 1e-15


@dataclass(frozen=True)
class VerifyConfig:
    """Thresholds for candidate-face validation (angles in degrees, centroid
    tolerances in normalized-space length units)."""

    theta_min: float = 30.0
    theta_max: float = 140.0
    dihedral_max: float = 45.0
    tau_quad: float = 2e-3
    tau_tri: float = 5e-3
    enable_convexity: bool = True
    enable_dihedral: bool = True
    enable_centroid: bool = True

    def __post_init__(self):
        if not (0.0 < self.theta_min < self.theta_max < 360.0):
            raise ValueError(
                f"need 0 < theta_min < theta_max < 360, got "
                f"[{self.theta_min}, {self.theta_max}]")
        if not (0.0 < self.dihedral_max <= 180.0):
            raise ValueError(f"dihedral_max must be in (0, 180], got {self.dihedral_max}")
        if self.tau_quad <= 0.0 or self.tau_tri <= 0.0:
            raise ValueError("centroid tolerances must be positive")

    @classmethod
    def permissive(cls) -> "VerifyConfig":
        """A config under which every non-degenerate candidate passes; used as
        the 'prefiltering off' ablation mode."""
        return cls(theta_min=1e-9, theta_max=359.999999,
                   dihedral_max=180.0, tau_quad=1e9, tau_tri=1e9,
                   enable_convexity=False, enable_dihedral=False,
                   enable_centroid=False)

    def to_text(self) -> str:
        return "".join(f"{f.name} {getattr(self, f.name)}\n" for f in fields(self))

    @classmethod
    def from_text(cls, text: str) -> "VerifyConfig":
        kwargs = {}
        bool_fields = {"enable_convexity", "enable_dihedral", "enable_centroid"}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.replace("=", " ").partition(" ")
            value = value.strip()
            if key in bool_fields:
                kwargs[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                kwargs[key] = float(value)
        return cls(**kwargs)


@dataclass
class VerifyReport:
    """Outcome of the verification battery; ``passed`` iff nothing failed.

    Measured values are kept for every executed check so callers can report
    why a candidate died without re-running geometry.
    """

    passed: bool = True
    failed_checks: list[str] = field(default_factory=list)
    angles: tuple[float, ...] | None = None
    max_fold_deg: float | None = None
    centroid_distance: float | None = None

    def fail(self, check: str):
        self.passed = False
        self.failed_checks.append(check)


def _scalar_cycle(cycle):
    if isinstance(cycle, np.ndarray):
        return cycle.tolist()
    return [[float(c) for c in q] for q in cycle]


def interior_angles(cycle) -> tuple[float, ...]:
    """Interior angle at each vertex of a 3- or 4-cycle, measured between the
    raw 3D edge vectors (no planar projection), in degrees."""
    p = _scalar_cycle(cycle)
    n = len(p)
    out = []
    for i in range(n):
        xi, yi, zi = p[i]
        xa, ya, za = p[(i - 1) % n]
        xb, yb, zb = p[(i + 1) % n]
        ux, uy, uz = xa - xi, ya - yi, za - zi
        vx, vy, vz = xb - xi, yb - yi, zb - zi
        nu = math.sqrt(ux * ux + uy * uy + uz * uz)
        nv = math.sqrt(vx * vx + vy * vy + vz * vz)
        if nu <= _EPS or nv <= _EPS:
            raise DegenerateGeometryError("coincident adjacent vertices")
        c = (ux * vx + uy * vy + uz * vz) / (nu * nv)
        out.append(math.degrees(math.acos(max(-1.0, min(1.0, c)))))
    return tuple(out)


def check_angle_range(angles, cfg: VerifyConfig) -> bool:
    """Pass iff every angle lies in the closed interval [theta_min, theta_max]."""
    return all(cfg.theta_min <= a <= cfg.theta_max for a in angles)


def check_convexity(cycle) -> bool:
    """Cross-product sign consistency projected on the quad's Newell normal.

    All four successive-edge cross products must project strictly to one side;
    a zero projection (collinear corner) or a degenerate Newell vector fails.
    Rejects both concave and self-intersecting (bowtie) orderings.
    """
    p = _scalar_cycle(cycle)
    n = newell_vector(p)
    nx, ny, nz = float(n[0]), float(n[1]), float(n[2])
    if math.sqrt(nx * nx + ny * ny + nz * nz) <= _EPS:
        return False
    m = len(p)
    pos = neg = 0
    for i in range(m):
        ax, ay, az = p[i]
        bx, by, bz = p[(i + 1) % m]
        cx, cy, cz = p[(i + 2) % m]
        e0x, e0y, e0z = bx - ax, by - ay, bz - az
        e1x, e1y, e1z = cx - bx, cy - by, cz - bz
        crx = e0y * e1z - e0z * e1y
        cry = e0z * e1x - e0x * e1z
        crz = e0x * e1y - e0y * e1x
        s = crx * nx + cry * ny + crz * nz
        if s > 0.0:
            pos += 1
        elif s < 0.0:
            neg += 1
        else:
            return False
    return pos == m or neg == m


def _tri_normal_scalar(a, b, c):
    ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    nx = uy * vz - uz * vy
    ny = uz * vx - ux * vz
    nz = ux * vy - uy * vx
    mag = math.sqrt(nx * nx + ny * ny + nz * nz)
    if mag <= _EPS:
        return None
    return (nx / mag, ny / mag, nz / mag)


def fold_angle_deg(a, b, c, d) -> float | None:
    """Angle between the normals of triangles (a,b,c) and (a,c,d), i.e. the
    fold across diagonal a-c; 0 for a planar quad, None if a split triangle
    is degenerate."""
    n1 = _tri_normal_scalar(a, b, c)
    n2 = _tri_normal_scalar(a, c, d)
    if n1 is None or n2 is None:
        return None
    cosv = n1[0] * n2[0] + n1[1] * n2[1] + n1[2] * n2[2]
    return math.degrees(math.acos(max(-1.0, min(1.0, cosv))))


def check_dihedral(cycle, cfg: VerifyConfig) -> tuple[bool, float]:
    """Fold angles across both diagonal splits; pass iff max <= dihedral_max.

    Returns (pass, max fold in degrees). Degenerate split triangles fail with
    max fold reported as inf.
    """
    p = _scalar_cycle(cycle)
    f1 = fold_angle_deg(p[0], p[1], p[2], p[3])
    f2 = fold_angle_deg(p[1], p[2], p[3], p[0])
    if f1 is None or f2 is None:
        return False, math.inf
    worst = max(f1, f2)
    return worst <= cfg.dihedral_max, worst


def check_centroid_tolerance(cycle, c_gen, cfg: VerifyConfig) -> tuple[bool, float]:
    """Distance between the cycle's arithmetic centroid and the generated
    centroid, gated by tau_quad (4 points) or tau_tri (3 points)."""
    p = np.asarray(cycle, dtype=np.float64)
    tau = cfg.tau_quad if p.shape[0] == 4 else cfg.tau_tri
    dist = float(np.linalg.norm(p.mean(axis=0) - np.asarray(c_gen, float)))
    return dist <= tau, dist


def verify_quad(cycle, c_gen=None, cfg: VerifyConfig | None = None) -> VerifyReport:
    """Full battery for a 4-cycle: angle range, convexity, diagonal fold and
    (when ``c_gen`` is given and enabled) centroid tolerance.

    Checks do not short-circuit; every measured value is reported. Degenerate
    geometry is reported as a failed check, never raised.
    """
    cfg = cfg or VerifyConfig()
    report = VerifyReport()
    try:
        report.angles = interior_angles(cycle)
        if not check_angle_range(report.angles, cfg):
            report.fail("angle")
    except DegenerateGeometryError:
        report.fail("angle")
    if cfg.enable_convexity and not check_convexity(cycle):
        report.fail("convexity")
    if cfg.enable_dihedral:
        ok, worst = check_dihedral(cycle, cfg)
        report.max_fold_deg = worst
        if not ok:
            report.fail("dihedral")
    if c_gen is not None and cfg.enable_centroid:
        ok, dist = check_centroid_tolerance(cycle, c_gen, cfg)
        report.centroid_distance = dist
        if not ok:
            report.fail("centroid")
    return report


def verify_tri(cycle, c_gen=None, cfg: VerifyConfig | None = None) -> VerifyReport:
    """Streamlined battery for a 3-cycle: angle range plus centroid tolerance
    (tau_tri); convexity and fold checks do not apply to triangles."""
    cfg = cfg or VerifyConfig()
    report = VerifyReport()
    try:
        report.angles = interior_angles(cycle)
        if not check_angle_range(report.angles, cfg):
            report.fail("angle")
    except DegenerateGeometryError:
        report.fail("angle")
    if c_gen is not None and cfg.enable_centroid:
        ok, dist = check_centroid_tolerance(cycle, c_gen, cfg)
        report.centroid_distance = dist
        if not ok:
            report.fail("centroid")
    return report
