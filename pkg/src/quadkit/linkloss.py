"""Contrastive link-modeling mathematics as forward-only numeric operations:
squared-distance triplet hinge with hard-negative Top-K mining, the mining
schedules (k ramp, cosine margin warmup), and farthest-point sampling for
negative candidate pools.

No gradients here: training the encoder is out of scope, these functions
exist so the loss values and mining decisions are testable in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass
class EmbeddingBatch:
    """Paired anchor/positive embeddings plus per-anchor negative pools."""

    anchors: np.ndarray      # (M, D)
    positives: np.ndarray    # (M, D)
    negatives: list          # per anchor: (n_i, D) array, n_i may be 0

    def __post_init__(self):
        self.anchors = np.atleast_2d(np.asarray(self.anchors, dtype=np.float64))
        self.positives = np.atleast_2d(np.asarray(self.positives, dtype=np.float64))
        if self.anchors.shape != self.positives.shape:
            raise ValueError("anchors and positives must pair up 1:1")
        d = self.anchors.shape[1]
        self.negatives = [
            np.asarray(n, dtype=np.float64).reshape(-1, d) for n in self.negatives
        ]
        if len(self.negatives) != len(self.anchors):
            raise ValueError("need one negative pool per anchor")


@dataclass(frozen=True)
class MiningSchedule:
    """Hard-negative curriculum: Top-K ramps k_min -> k_max linearly in
    epochs, margin warms up 0.2 -> 0.3 on a half-cosine."""

    k_min: int = 20
    k_max: int = 50
    total_epochs: int = 100
    alpha: float | None = None
    margin_start: float = 0.2
    margin_end: float = 0.3

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise ValueError("k_min must be <= k_max")
        if not (0.0 < self.margin_start < 1.0 and 0.0 < self.margin_end < 1.0):
            raise ValueError("margins must lie in (0, 1)")
        if self.alpha is None:
            # only the endpoints are pinned; default rate reaches k_max at
            # 60% of the run
            object.__setattr__(
                self, "alpha",
                (self.k_max - self.k_min) / max(1.0, 0.6 * self.total_epochs))


def sq_dist(u, v) -> float:
    """Squared Euclidean distance between two embeddings."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch {u.shape} vs {v.shape}")
    d = u - v
    return float(np.dot(d, d))


def violation(d_ap: float, d_an: float) -> float:
    """Margin violation of a negative: larger means harder."""
    return d_ap - d_an


def topk_hard_negatives(d_ap: float, d_an_list: Sequence[float], k: int) -> list[int]:
    """Indices of the min(k, n) largest-violation negatives, ties broken by
    ascending index."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d_an = np.asarray(d_an_list, dtype=np.float64)
    if d_an.size == 0:
        return []
    viol = d_ap - d_an
    order = np.argsort(-viol, kind="stable")
    return [int(i) for i in order[:k]]


def triplet_loss(batch: EmbeddingBatch, k: int, margin: float) -> float:
    """Mean over anchors of the mean hinge over each anchor's Top-k hardest
    negatives. Anchors with an empty negative pool are excluded from the
    outer mean (the per-anchor average is undefined for them)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if margin <= 0.0:
        raise ValueError("margin must be positive")
    per_anchor = []
    for a, p, negs in zip(batch.anchors, batch.positives, batch.negatives):
        if len(negs) == 0:
            continue
        d_ap = sq_dist(a, p)
        diff = negs - a
        d_an = np.einsum("ij,ij->i", diff, diff)
        idx = topk_hard_negatives(d_ap, d_an, k)
        hinge = np.maximum(0.0, d_ap - d_an[idx] + margin)
        per_anchor.append(float(hinge.mean()))
    if not per_anchor:
        return 0.0
    return float(sum(per_anchor) / len(per_anchor))


def k_schedule(t: int, sched: MiningSchedule) -> int:
    """min(k_max, k_min + floor(alpha * t)) at epoch t."""
    if t < 0:
        raise ValueError("epoch must be >= 0")
    return min(sched.k_max, sched.k_min + math.floor(sched.alpha * t))


def margin_schedule(t: float, sched: MiningSchedule) -> float:
    """Cosine warmup from margin_start to margin_end over total_epochs;
    clamps to the end value beyond the schedule."""
    if t < 0:
        raise ValueError("epoch must be >= 0")
    if t >= sched.total_epochs:
        return sched.margin_end
    frac = (1.0 - math.cos(math.pi * t / sched.total_epochs)) / 2.0
    return sched.margin_start + (sched.margin_end - sched.margin_start) * frac


def fps_sample(points, n: int, seed_index: int = 0) -> list[int]:
    """Farthest point sampling: greedily add the point with the largest
    min-distance to the selected set; ties broken by ascending index.
    Returns all indices when n >= len(points)."""
    pts = np.asarray(points, dtype=np.float64)
    npts = len(pts)
    if npts == 0:
        return []
    if not (0 <= seed_index < npts):
        raise ValueError(f"seed index {seed_index} out of range")
    if n >= npts:
        n = npts
    selected = [seed_index]
    mind = np.linalg.norm(pts - pts[seed_index], axis=1)
    mind[seed_index] = -np.inf
    while len(selected) < n:
        nxt = int(np.argmax(mind))  # argmax takes the first max: tie rule
        selected.append(nxt)
        dist = np.linalg.norm(pts - pts[nxt], axis=1)
        np.minimum(mind, dist, out=mind)
        mind[nxt] = -np.inf
    return selected
