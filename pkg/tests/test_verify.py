import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadkit.verify import (VerifyConfig, check_angle_range,
                            check_centroid_tolerance, check_convexity,
                            check_dihedral, interior_angles, verify_quad,
                            verify_tri)

SQUARE = np.array([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], float)
BOWTIE = np.array([(0, 0, 0), (1, 1, 0), (1, 0, 0), (0, 1, 0)], float)


def folded_square(angle_deg):
    """Unit square folded along the diagonal v0-v2 by the given angle."""
    ang = math.radians(angle_deg)
    # v3 rotates around the diagonal axis (1,1,0)/sqrt(2) through origin
    axis = np.array([1.0, 1.0, 0.0]) / math.sqrt(2)
    p = np.array([0.0, 1.0, 0.0])
    c, s = math.cos(ang), math.sin(ang)
    rotated = (p * c + np.cross(axis, p) * s
               + axis * np.dot(axis, p) * (1 - c))
    return np.array([(0, 0, 0), (1, 0, 0), (1, 1, 0), tuple(rotated)], float)


def rigid_motion(points, seed):
    rng = np.random.default_rng(seed)
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    rot = np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)]])
    t = rng.uniform(-5, 5, 3)
    return np.asarray(points) @ rot.T + t


class TestInteriorAngles:
    def test_unit_square(self):
        assert np.allclose(interior_angles(SQUARE), (90, 90, 90, 90))

    def test_rectangle(self):
        rect = [(0, 0, 0), (2, 0, 0), (2, 1, 0), (0, 1, 0)]
        assert np.allclose(interior_angles(rect), (90, 90, 90, 90))

    def test_planar_kite_sums_to_360(self):
        kite = [(0.0, 0.0, 0.0), (1.0, -1.0, 0.0), (2.5, 0.0, 0.0), (1.0, 1.0, 0.0)]
        total = sum(interior_angles(kite))
        assert abs(total - 360.0) < 1e-9

    def test_degenerate_coincident(self):
        from quadkit.errors import DegenerateGeometryError
        with pytest.raises(DegenerateGeometryError):
            interior_angles([(0, 0, 0), (0, 0, 0), (1, 0, 0), (0, 1, 0)])


class TestAngleRange:
    def test_square_passes_defaults(self):
        assert check_angle_range((90, 90, 90, 90), VerifyConfig())

    def test_skewed_fails(self):
        assert not check_angle_range((150, 70, 70, 70), VerifyConfig())

    def test_boundaries_inclusive(self):
        assert check_angle_range((30, 140, 95, 95), VerifyConfig())


class TestConvexity:
    def test_square(self):
        assert check_convexity(SQUARE)

    def test_bowtie_fails(self):
        # hand oracle: project successive-edge crosses on +z and read signs
        signs = []
        for i in range(4):
            e0 = BOWTIE[(i + 1) % 4] - BOWTIE[i]
            e1 = BOWTIE[(i + 2) % 4] - BOWTIE[(i + 1) % 4]
            signs.append(np.sign(np.cross(e0, e1)[2]))
        assert len(set(signs)) > 1  # mixed signs: the oracle agrees it is invalid
        assert not check_convexity(BOWTIE)

    def test_concave_dart_fails(self):
        dart = [(0, 0, 0), (2, 0, 0), (0.3, 0.3, 0), (0, 2, 0)]
        assert not check_convexity(dart)

    def test_cyclic_rotation_and_reversal_invariance(self):
        for quad in (SQUARE, BOWTIE, folded_square(20)):
            base = check_convexity(quad)
            for r in range(4):
                rolled = np.roll(quad, r, axis=0)
                assert check_convexity(rolled) == base
                assert check_convexity(rolled[::-1]) == base

    def test_collinear_corner_fails(self):
        quad = [(0, 0, 0), (1, 0, 0), (2, 0, 0), (0, 1, 0)]
        assert not check_convexity(quad)


class TestDihedral:
    def test_planar_quad(self):
        ok, worst = check_dihedral(SQUARE, VerifyConfig())
        assert ok and abs(worst) < 1e-9

    def test_fold_90_fails(self):
        ok, worst = check_dihedral(folded_square(90), VerifyConfig())
        assert not ok
        assert abs(worst - 90.0) < 1e-9

    def test_fold_45_boundary_inclusive(self):
        ok, worst = check_dihedral(folded_square(45), VerifyConfig())
        assert ok
        assert abs(worst - 45.0) < 1e-9

    def test_fold_45_1_fails(self):
        ok, worst = check_dihedral(folded_square(45.1), VerifyConfig())
        assert not ok
        assert worst > 45.0


class TestCentroidTolerance:
    def test_exact_centroid(self):
        ok, dist = check_centroid_tolerance(SQUARE, SQUARE.mean(axis=0),
                                            VerifyConfig())
        assert ok and dist == 0.0

    def test_quad_offset_3e3_fails(self):
        c = SQUARE.mean(axis=0) + np.array([3e-3, 0, 0])
        ok, dist = check_centroid_tolerance(SQUARE, c, VerifyConfig())
        assert not ok
        assert abs(dist - 3e-3) < 1e-12

    def test_tri_offset_4e3_passes(self):
        tri = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0)], float)
        c = tri.mean(axis=0) + np.array([4e-3, 0, 0])
        ok, _ = check_centroid_tolerance(tri, c, VerifyConfig())
        assert ok


class TestVerifyQuad:
    def test_square_all_pass(self):
        rep = verify_quad(SQUARE, c_gen=SQUARE.mean(axis=0))
        assert rep.passed and rep.failed_checks == []

    def test_bowtie_reports_convexity(self):
        rep = verify_quad(BOWTIE)
        assert not rep.passed
        assert "convexity" in rep.failed_checks

    def test_folded_reports_dihedral(self):
        rep = verify_quad(folded_square(45.1))
        assert not rep.passed
        assert "dihedral" in rep.failed_checks
        assert rep.max_fold_deg > 45.0

    def test_no_short_circuit(self):
        # every check leaves its measurement even when an earlier one failed
        rep = verify_quad(folded_square(120), c_gen=(9.0, 9.0, 9.0))
        assert rep.angles is not None
        assert rep.max_fold_deg is not None
        assert rep.centroid_distance is not None

    def test_enable_flags(self):
        cfg = VerifyConfig(enable_convexity=False, enable_dihedral=False)
        rep = verify_quad(folded_square(60), cfg=cfg)
        assert "dihedral" not in rep.failed_checks

    def test_cyclic_rotation_preserves_outcome(self):
        c = SQUARE.mean(axis=0)
        base = verify_quad(SQUARE, c_gen=c).passed
        for r in range(1, 4):
            assert verify_quad(np.roll(SQUARE, r, axis=0), c_gen=c).passed == base


class TestVerifyTri:
    def test_equilateral(self):
        tri = [(0, 0, 0), (1, 0, 0), (0.5, math.sqrt(3) / 2, 0)]
        rep = verify_tri(tri)
        assert rep.passed
        assert np.allclose(rep.angles, (60, 60, 60))

    def test_sliver_fails(self):
        # 10-degree apex -> below theta_min
        apex = math.radians(10)
        tri = [(0, 0, 0), (1, 0, 0),
               (1 - math.cos(apex), math.sin(apex), 0)]
        rep = verify_tri(tri)
        assert not rep.passed and rep.failed_checks == ["angle"]

    def test_right_isoceles_passes(self):
        tri = [(0, 0, 0), (1, 0, 0), (0, 1, 0)]
        rep = verify_tri(tri)
        assert rep.passed
        assert sorted(round(a) for a in rep.angles) == [45, 45, 90]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rigid_motion_invariance(seed):
    cfg = VerifyConfig()
    for quad in (SQUARE, BOWTIE, folded_square(30), folded_square(60)):
        moved = rigid_motion(quad, seed)
        assert verify_quad(moved, cfg=cfg).passed == verify_quad(quad, cfg=cfg).passed
        a0 = interior_angles(quad)
        a1 = interior_angles(moved)
        assert np.allclose(a0, a1, atol=1e-9)


def test_planar_quads_sum_360():
    rng = np.random.default_rng(11)
    for _ in range(50):
        # cyclic quadrilaterals (vertices on a circle) are always convex
        angs = np.sort(rng.uniform(0, 2 * np.pi, 4))
        if np.any(np.diff(angs) < 0.2):
            continue
        quad = np.stack([np.cos(angs), np.sin(angs), np.zeros(4)], axis=1)
        assert abs(sum(interior_angles(quad)) - 360.0) < 1e-6


def test_config_validation():
    with pytest.raises(ValueError):
        VerifyConfig(theta_min=0)
    with pytest.raises(ValueError):
        VerifyConfig(theta_min=100, theta_max=50)
    with pytest.raises(ValueError):
        VerifyConfig(dihedral_max=0)
    with pytest.raises(ValueError):
        VerifyConfig(tau_quad=0)


def test_config_text_round_trip():
    cfg = VerifyConfig(theta_min=25, theta_max=150, dihedral_max=50,
                       tau_quad=1e-3, tau_tri=4e-3, enable_convexity=False)
    assert VerifyConfig.from_text(cfg.to_text()) == cfg
