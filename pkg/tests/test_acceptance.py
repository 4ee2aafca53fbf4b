"""Acceptance suite: one test per release criterion, each printing a
``[acceptance] criterion N: PASS`` line (run with ``pytest -s`` to see them).

Disclosure: the headline comparison numbers of the source evaluation
(CD 0.021, HD 0.056, IoU 0.995, QR 79.4%, EFR 0.714, and the assembly-rate
table with recon_rate 0.9971 / latent-space retrieval) were measured with
trained Stage-I/II neural models over a 400k-asset corpus. Neither the models
nor the corpus ship with this package, so those absolute values are not
reproducible here; criteria 1-9 below substitute exact, self-contained
checks of every deterministic component at its idealized limit.
"""

import math
import random
import time

import numpy as np
import pytest

from quadkit.assembly import (AssemblyConfig, EuclideanFeatureSpace,
                              IncidenceOracle, anchors_from_mesh,
                              assemble_mesh, retrieve_topk)
from quadkit.goldberg import GoldbergParams, goldberg, validate_counts
from quadkit.linkloss import (EmbeddingBatch, MiningSchedule, k_schedule,
                              margin_schedule, topk_hard_negatives,
                              triplet_loss)
from quadkit.matching import (WeightedGraph, brute_force_matching,
                              greedy_matching, max_weight_matching)
from quadkit.mesh import PolyMesh, normalize_unit_cube
from quadkit.metrics import (EfrConfig, chamfer, efc, efr,
                             extract_feature_lines, hausdorff, oep,
                             quad_ratio, sample_surface, voxel_iou)
from quadkit.tokenizer import (MODES, AnchorSet, TokenizerConfig, decode,
                               encode, quantized_anchor_set, vocab_size)
from quadkit.tri2quad import OperatorConfig, merge, merge_detail
from quadkit.verify import VerifyConfig

from helpers import (blob_tris, cube, folded_sheet_quads, folded_sheet_tris,
                     quad_grid, refine_midpoint, sphere_tris, torus_tris,
                     tri_grid)


def _passed(n, label):
    print(f"\n[acceptance] criterion {n} ({label}): PASS")


def test_criterion_1_matching_optimality():
    """1000 random graphs: exact agreement with brute force, greedy never
    better, one strict greedy gap witnessed, all under 10 seconds."""
    rng = random.Random(20240811)
    t0 = time.perf_counter()
    strict_gap_seen = False
    for _ in range(1000):
        n = rng.randint(2, 10)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        m = rng.randint(0, min(24, len(pairs)))
        chosen = rng.sample(pairs, m)
        g = WeightedGraph(n, [(u, v, rng.random()) for (u, v) in chosen])
        opt = max_weight_matching(g)
        ref = brute_force_matching(g)
        assert opt.total_weight == ref.total_weight
        gr = greedy_matching(g)
        assert gr.total_weight <= opt.total_weight
        if gr.total_weight < opt.total_weight:
            strict_gap_seen = True
    # the canonical witness: greedy grabs the 1.5 edge and strands both ends
    path = WeightedGraph(4, [(0, 1, 1.0), (1, 2, 1.5), (2, 3, 1.0)])
    assert max_weight_matching(path).total_weight == 2.0
    assert greedy_matching(path).total_weight == 1.5
    assert strict_gap_seen
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"matching sweep took {elapsed:.1f}s"
    _passed(1, "matching optimality")


def test_criterion_2_grid_round_trip():
    """Consistently triangulated N x N grids remerge into perfect quad grids
    with unchanged vertices; N=64 stays under 5 seconds."""
    for n in (4, 16, 64):
        mesh = tri_grid(n)
        t0 = time.perf_counter()
        result = merge_detail(mesh, OperatorConfig(mode="global"))
        elapsed = time.perf_counter() - t0
        out = result.mesh
        assert quad_ratio(out) == 1.0
        assert abs(oep(out) - 1.0) <= 1e-9
        assert abs(efc(out) - 1.0) <= 1e-9
        assert np.array_equal(out.vertices, mesh.vertices)
        assert out.vertices.tobytes() == mesh.vertices.tobytes()
        if n == 64:
            assert elapsed < 5.0, f"N=64 took {elapsed:.2f}s"
    _passed(2, "grid round-trip")


def _trend_suite():
    return {
        "sphere": sphere_tris(12, 24),
        "torus": torus_tris(18, 10),
        "folded_sheet": folded_sheet_tris(8, 120.0),
        "noisy_grid": tri_grid(10, diag="alternating", noise=0.04, seed=2),
        "blob": blob_tris(12, 24),
    }


def test_criterion_3_prefilter_and_weight_trend():
    """Qualitative reproduction of the operator ablation ordering: the
    prefiltered full-weight configuration dominates both the unfiltered and
    the alignment-only variants, non-strictly per mesh and strictly on the
    suite mean."""
    def evaluate(mesh, prefilter, alphas):
        vc = (VerifyConfig(enable_centroid=False) if prefilter
              else VerifyConfig.permissive())
        cfg = OperatorConfig(alpha1=alphas[0], alpha2=alphas[1], verify=vc)
        out = merge(mesh, cfg)
        return oep(out), efc(out)

    pre_both, no_both, pre_align = [], [], []
    for name, mesh in _trend_suite().items():
        mesh = normalize_unit_cube(mesh)
        pb = evaluate(mesh, True, (0.8, 0.2))
        nb = evaluate(mesh, False, (0.8, 0.2))
        pa = evaluate(mesh, True, (0.0, 1.0))
        for i, metric in enumerate(("OEP", "EFC")):
            assert pb[i] >= nb[i] - 1e-12, (
                f"{name}: {metric} prefiltered {pb[i]:.4f} < raw {nb[i]:.4f}")
            assert pb[i] >= pa[i] - 1e-12, (
                f"{name}: {metric} w_both {pb[i]:.4f} < w_align {pa[i]:.4f}")
        pre_both.append(pb)
        no_both.append(nb)
        pre_align.append(pa)
    pre_both = np.array(pre_both)
    no_both = np.array(no_both)
    pre_align = np.array(pre_align)
    for i in range(2):
        assert pre_both[:, i].mean() > no_both[:, i].mean()
        assert pre_both[:, i].mean() > pre_align[:, i].mean()
    _passed(3, "prefilter / weight ordering trend")


def _oracle_suite():
    """Ten verification-clean quad-dominant meshes."""
    meshes = [
        cube(),
        quad_grid(2),
        quad_grid(5),
        quad_grid(3, span=(-0.8, 0.8)),
        folded_sheet_quads(4, angle_deg=150.0),
        merge(tri_grid(4)),
        merge(tri_grid(8)),
        merge(tri_grid(16)),
    ]
    # quad grid with one cell split into two triangles (tri fallback path)
    g = quad_grid(2, span=(0.0, 1.0))
    faces = list(g.faces)
    a, b, c, d = faces.pop(0)
    meshes.append(PolyMesh(g.vertices, faces + [(a, b, c), (a, c, d)]))
    # 1 x 6 strip
    meshes.append(quad_grid(6, span=(-1.0, 1.0)))
    return meshes


def test_criterion_4_oracle_assembly_completeness():
    """With ground-truth incidence retrieval, assembly reconstructs every
    face of every suite mesh exactly (the idealized limit of the trained
    retrieval model, whose measured absolute rate is not reproducible)."""
    suite = _oracle_suite()
    assert len(suite) >= 10
    for mesh in suite:
        mesh = normalize_unit_cube(mesh)
        anchors = anchors_from_mesh(mesh)
        result = assemble_mesh(anchors, IncidenceOracle(anchors, mesh))
        assert result.recon_rate == 1.0
        assert result.unresolved == []
        lookup = {tuple(np.round(p, 12)): i
                  for i, p in enumerate(anchors.vertices)}
        for face in result.faces:
            gt = mesh.faces[face.centroid_index]
            gt_ids = {lookup[tuple(np.round(mesh.vertices[v], 12))] for v in gt}
            assert set(face.cycle) == gt_ids
    _passed(4, "oracle assembly completeness")


def _strut_and_blob():
    w = 0.01
    strut = [(-0.5, -w, 0.0), (0.5, -w, 0.0), (0.5, w, 0.0), (-0.5, w, 0.0)]
    blob_center = np.array([0.06, 0.05, 0.0])
    blob_pts = []
    for ring, (radius, count) in enumerate(((0.02, 12), (0.035, 12))):
        for i in range(count):
            ang = 2 * np.pi * (i + 0.5 * ring) / count
            blob_pts.append(blob_center
                            + radius * np.array([np.cos(ang), np.sin(ang), 0.0]))
    faces = [(0, 1, 2, 3)]
    for q in range(0, 12, 2):
        faces.append((4 + q, 4 + q + 1, 16 + q + 1, 16 + q))
    return PolyMesh(np.array(strut + [tuple(p) for p in blob_pts]), faces)


def test_criterion_5_euclidean_retrieval_failure_witness():
    """A thin strut whose centroid sits inside a dense vertex cluster:
    coordinate-space retrieval floods the shortlist with cluster points and
    cannot assemble the true face, while incidence retrieval can."""
    mesh = _strut_and_blob()
    anchors = anchors_from_mesh(mesh)
    top = retrieve_topk(0, EuclideanFeatureSpace(anchors), 20)
    assert not {0, 1, 2, 3}.issubset(set(top)), \
        "witness construction failed: strut corners inside euclidean top-20"
    euclid = assemble_mesh(anchors, EuclideanFeatureSpace(anchors),
                           AssemblyConfig(top_k=20))
    strut_faces = [f for f in euclid.faces if f.centroid_index == 0]
    if strut_faces:
        assert set(strut_faces[0].cycle) != {0, 1, 2, 3}
    else:
        assert 0 in euclid.unresolved
    oracle = assemble_mesh(anchors, IncidenceOracle(anchors, mesh),
                           AssemblyConfig(top_k=20))
    strut = next(f for f in oracle.faces if f.centroid_index == 0)
    assert set(strut.cycle) == {0, 1, 2, 3}
    assert oracle.recon_rate == 1.0
    _passed(5, "euclidean retrieval failure witness")


def test_criterion_6_tokenizer_round_trip():
    """1000 random anchor sets (<= 500 vertices, <= 300 centroids) survive
    encode/decode exactly under all 8 mode x per-axis combinations; the
    vocabulary sizes match the published table."""
    sizes = {vocab_size(TokenizerConfig(mode=m, per_axis_vocab=pa))
             for m in MODES for pa in (False, True)}
    assert sizes == {1024, 3072, 2048, 6144, 1025, 3073}
    configs = [TokenizerConfig(mode=m, per_axis_vocab=pa)
               for m in MODES for pa in (False, True)]
    rng = np.random.default_rng(61803)
    for _ in range(1000):
        nv = int(rng.integers(1, 501))
        nc = int(rng.integers(0, 301))
        anchors = AnchorSet(rng.uniform(-1, 1, (nv, 3)),
                            rng.uniform(-1, 1, (nc, 3)))
        for cfg in configs:
            assert decode(encode(anchors, cfg), cfg) == \
                quantized_anchor_set(anchors, cfg)
    _passed(6, "tokenizer round-trip")


def test_criterion_7_goldberg_counts():
    """Every frequency pair with T <= 100 plus T in {169, 256, 324} passes
    the closed-form count validation inside the time budget."""
    params = []
    for m in range(0, 20):
        for n in range(0, m + 1):
            if (m, n) == (0, 0):
                continue
            t = m * m + m * n + n * n
            if 1 <= t <= 100 or t in (169, 256, 324):
                params.append(GoldbergParams(m, n))
    assert len(params) >= 40
    assert {p.t for p in params} >= {169, 256, 324}
    t0 = time.perf_counter()
    for p in params:
        report = validate_counts(goldberg(p), p)
        assert report.passed, (p, report.lines())
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"goldberg sweep took {elapsed:.1f}s"
    _passed(7, f"goldberg counts ({len(params)} frequency pairs)")


def test_criterion_8_metric_identities():
    """Self-distances vanish, self-IoU and self-EFR are exactly 1, Hausdorff
    dominates Chamfer, and one refinement level keeps EFR above 0.95."""
    identity_suite = [cube(), quad_grid(4), folded_sheet_quads(4),
                      merge(tri_grid(4)), normalize_unit_cube(sphere_tris(10, 20))]
    for mesh in identity_suite:
        s1 = sample_surface(mesh, 20_000, seed=11)
        s2 = sample_surface(mesh, 20_000, seed=11)
        assert chamfer(s1, s2) == 0.0
        assert hausdorff(s1, s2) == 0.0
        assert voxel_iou(mesh, mesh, 32) == 1.0
    # EFR identity applies to the feature-bearing suite members
    efr_suite = [quad_grid(4), folded_sheet_quads(4), merge(tri_grid(4))]
    for mesh in efr_suite:
        assert extract_feature_lines(mesh)
        assert efr(mesh, mesh) == 1.0
    rng = np.random.default_rng(88)
    for _ in range(100):
        a = sample_surface(quad_grid(2), int(rng.integers(50, 200)),
                           seed=int(rng.integers(0, 10 ** 6)))
        shift = rng.normal(0, 0.4, 3)
        moved = PolyMesh(quad_grid(2).vertices + shift, quad_grid(2).faces,
                         validate=False)
        b = sample_surface(moved, int(rng.integers(50, 200)),
                           seed=int(rng.integers(0, 10 ** 6)))
        assert hausdorff(a, b) >= chamfer(a, b)
    for mesh in efr_suite:
        fine = refine_midpoint(mesh)
        assert efr(mesh, fine, EfrConfig(tau=0.02)) > 0.95
    _passed(8, "metric identities")


def test_criterion_9_link_loss_numerics():
    """Hand-computed hinge values, hard-mining dominance over 10,000 random
    batches, and exact schedule endpoints."""
    # worked example 1: hinge saturates (0.1 - 0.5 + 0.3 <= 0)
    b1 = EmbeddingBatch([[0.0]], [[math.sqrt(0.1)]], [[[math.sqrt(0.5)]]])
    assert triplet_loss(b1, k=1, margin=0.3) == 0.0
    # worked example 2: 0.1 - 0.2 + 0.3 = 0.2
    b2 = EmbeddingBatch([[0.0]], [[math.sqrt(0.1)]], [[[math.sqrt(0.2)]]])
    assert triplet_loss(b2, k=1, margin=0.3) == pytest.approx(0.2)
    # worked example 3: anchor == positive, negatives beyond the margin
    b3 = EmbeddingBatch([[0.0, 0.0]], [[0.0, 0.0]],
                        [[[1.0, 0.0], [0.0, 1.5]]])
    assert triplet_loss(b3, k=2, margin=0.3) == 0.0

    rng = np.random.default_rng(7777)
    for _ in range(10_000):
        pool = int(rng.integers(2, 24))
        k = int(rng.integers(1, pool + 1))
        d_ap = float(rng.uniform(0, 2))
        d_an = rng.uniform(0, 2, pool)
        margin = 0.3
        top = topk_hard_negatives(d_ap, d_an, k)
        top_mean = float(np.maximum(0.0, d_ap - d_an[top] + margin).mean())
        sub = rng.choice(pool, size=k, replace=False)
        sub_mean = float(np.maximum(0.0, d_ap - d_an[sub] + margin).mean())
        assert top_mean >= sub_mean - 1e-12

    sched = MiningSchedule(k_min=20, k_max=50, total_epochs=120,
                           margin_start=0.2, margin_end=0.3)
    assert k_schedule(0, sched) == 20
    assert k_schedule(10 ** 9, sched) == 50
    assert margin_schedule(0, sched) == 0.2
    assert margin_schedule(120, sched) == 0.3
    _passed(9, "link-loss numerics")


def test_criterion_10_non_reproducible_disclosure():
    """The published end-to-end numbers need the trained models and corpus;
    this suite documents that and substitutes criteria 1-9 (see the module
    docstring)."""
    doc = " ".join(__doc__.split())
    for token in ("CD 0.021", "HD 0.056", "IoU 0.995", "QR 79.4%",
                  "EFR 0.714", "0.9971", "400k", "not reproducible"):
        assert token in doc
    assert "criteria 1-9" in doc
    _passed(10, "non-reproducible results disclosed")
