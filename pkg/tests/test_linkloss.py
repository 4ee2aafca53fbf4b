import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadkit.linkloss import (EmbeddingBatch, MiningSchedule, fps_sample,
                              k_schedule, margin_schedule, sq_dist,
                              topk_hard_negatives, triplet_loss, violation)


class TestSqDist:
    def test_identity(self):
        assert sq_dist([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_three_four_five(self):
        assert sq_dist([0.0, 0.0], [3.0, 4.0]) == 25.0

    def test_symmetry(self):
        u, v = [0.2, -1.0, 3.0], [1.5, 0.5, -0.5]
        assert sq_dist(u, v) == sq_dist(v, u)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            sq_dist([1.0, 2.0], [1.0, 2.0, 3.0])


class TestViolation:
    def test_hard(self):
        assert violation(0.4, 0.1) == pytest.approx(0.3)

    def test_zero(self):
        assert violation(0.7, 0.7) == 0.0

    def test_easy(self):
        assert violation(0.1, 0.5) == pytest.approx(-0.4)


class TestTopK:
    def test_orders_by_violation(self):
        # violations: d_ap - d_an = (-0.1, 0.3, 0.2) for d_ap = 0.3
        idx = topk_hard_negatives(0.3, [0.4, 0.0, 0.1], 2)
        assert idx == [1, 2]

    def test_k_exceeds_pool(self):
        assert topk_hard_negatives(0.5, [0.1, 0.2], 10) == [0, 1]

    def test_tie_ascending_index(self):
        assert topk_hard_negatives(0.5, [0.2, 0.2, 0.2], 1) == [0]

    def test_empty(self):
        assert topk_hard_negatives(0.5, [], 3) == []


class TestTripletLoss:
    def test_saturated_hinge(self):
        # d_ap=0.1, d_an=0.5, m=0.3 -> max(0, -0.1) = 0
        batch = EmbeddingBatch(
            anchors=[[0.0]], positives=[[math.sqrt(0.1)]],
            negatives=[[[math.sqrt(0.5)]]])
        assert triplet_loss(batch, k=1, margin=0.3) == 0.0

    def test_active_hinge(self):
        # d_ap=0.1, d_an=0.2, m=0.3 -> 0.2
        batch = EmbeddingBatch(
            anchors=[[0.0]], positives=[[math.sqrt(0.1)]],
            negatives=[[[math.sqrt(0.2)]]])
        assert triplet_loss(batch, k=1, margin=0.3) == pytest.approx(0.2)

    def test_positive_equals_anchor(self):
        batch = EmbeddingBatch(
            anchors=[[0.0, 0.0]], positives=[[0.0, 0.0]],
            negatives=[[[1.0, 0.0], [0.0, 2.0]]])
        assert triplet_loss(batch, k=2, margin=0.3) == 0.0

    def test_zero_negative_anchor_excluded(self):
        batch = EmbeddingBatch(
            anchors=[[0.0], [0.0]],
            positives=[[1.0], [math.sqrt(0.1)]],
            negatives=[np.zeros((0, 1)), [[math.sqrt(0.2)]]])
        # only the second anchor contributes: hinge = 0.1 - 0.2 + 0.3 = 0.2
        assert triplet_loss(batch, k=1, margin=0.3) == pytest.approx(0.2)

    def test_all_empty_pools(self):
        batch = EmbeddingBatch(anchors=[[0.0]], positives=[[1.0]],
                               negatives=[np.zeros((0, 1))])
        assert triplet_loss(batch, k=3, margin=0.2) == 0.0

    def test_non_negative_always(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            m = rng.integers(1, 5)
            d = rng.integers(1, 4)
            batch = EmbeddingBatch(
                anchors=rng.normal(size=(m, d)),
                positives=rng.normal(size=(m, d)),
                negatives=[rng.normal(size=(rng.integers(0, 6), d))
                           for _ in range(m)])
            assert triplet_loss(batch, k=3, margin=0.25) >= 0.0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 8), st.integers(2, 30))
def test_hard_mining_dominance(seed, k, pool):
    """Top-k hinge mean >= the hinge mean of any random k-subset."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=3)
    p = rng.normal(size=3)
    negs = rng.normal(size=(pool, 3))
    d_ap = sq_dist(a, p)
    d_an = np.array([sq_dist(a, n) for n in negs])
    margin = 0.3
    k = min(k, pool)
    top = topk_hard_negatives(d_ap, d_an, k)
    top_mean = np.mean(np.maximum(0.0, d_ap - d_an[top] + margin))
    rand_subset = rng.choice(pool, size=k, replace=False)
    rand_mean = np.mean(np.maximum(0.0, d_ap - d_an[rand_subset] + margin))
    assert top_mean >= rand_mean - 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(0.21, 0.29), st.floats(0.01, 0.09))
def test_margin_monotonicity(seed, m_lo, dm):
    rng = np.random.default_rng(seed)
    count = int(rng.integers(1, 5))
    batch = EmbeddingBatch(
        anchors=rng.normal(size=(count, 4)),
        positives=rng.normal(size=(count, 4)),
        negatives=[rng.normal(size=(int(rng.integers(1, 7)), 4))
                   for _ in range(count)])
    lo = triplet_loss(batch, k=3, margin=m_lo)
    hi = triplet_loss(batch, k=3, margin=m_lo + dm)
    assert hi >= lo - 1e-12


class TestSchedules:
    def test_k_endpoints(self):
        sched = MiningSchedule(total_epochs=100)
        assert k_schedule(0, sched) == 20
        assert k_schedule(10 ** 6, sched) == 50

    def test_k_linear_segment(self):
        sched = MiningSchedule(k_min=20, k_max=50, total_epochs=100, alpha=1.0)
        assert k_schedule(7, sched) == 27

    def test_k_monotone(self):
        sched = MiningSchedule(total_epochs=80)
        vals = [k_schedule(t, sched) for t in range(0, 200)]
        assert vals == sorted(vals)
        assert vals[0] == 20 and vals[-1] == 50

    def test_k_reaches_max_at_60_percent(self):
        sched = MiningSchedule(total_epochs=100)
        assert k_schedule(60, sched) == 50
        assert k_schedule(59, sched) < 50

    def test_margin_endpoints(self):
        sched = MiningSchedule(total_epochs=100)
        assert margin_schedule(0, sched) == 0.2
        assert margin_schedule(100, sched) == 0.3
        assert margin_schedule(1000, sched) == 0.3

    def test_margin_midpoint(self):
        sched = MiningSchedule(total_epochs=100)
        assert margin_schedule(50, sched) == pytest.approx(0.25)

    def test_margin_monotone(self):
        sched = MiningSchedule(total_epochs=64)
        vals = [margin_schedule(t, sched) for t in range(0, 130)]
        assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


class TestFps:
    def test_collinear_trace(self):
        pts = [(0.0, 0, 0), (1.0, 0, 0), (10.0, 0, 0)]
        assert fps_sample(pts, 2, seed_index=0) == [0, 2]

    def test_full_selection_is_permutation(self):
        rng = np.random.default_rng(2)
        pts = rng.normal(size=(9, 3))
        sel = fps_sample(pts, 9, seed_index=4)
        assert sorted(sel) == list(range(9))

    def test_identical_points_tie_rule(self):
        pts = [(1.0, 1, 1)] * 5
        assert fps_sample(pts, 3, seed_index=0) == [0, 1, 2]

    def test_n_exceeds_pool(self):
        pts = [(0.0, 0, 0), (1.0, 0, 0)]
        assert sorted(fps_sample(pts, 10)) == [0, 1]

    def test_min_distance_non_increasing(self):
        rng = np.random.default_rng(7)
        pts = rng.normal(size=(40, 3))
        sel = fps_sample(pts, 15, seed_index=0)
        gaps = []
        for i in range(1, len(sel)):
            chosen = pts[sel[i]]
            prior = pts[sel[:i]]
            gaps.append(np.min(np.linalg.norm(prior - chosen, axis=1)))
        assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


def test_schedule_validation():
    with pytest.raises(ValueError):
        MiningSchedule(k_min=60, k_max=50)
    with pytest.raises(ValueError):
        MiningSchedule(margin_start=0.0)
