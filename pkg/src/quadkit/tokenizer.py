"""Anchor tokenization: quantize vertex/centroid point sets to discrete
coordinate tokens under four sequence-organization modes, with optional
axis-aware (disjoint per-axis) vocabularies, and decode back exactly.

Layout summary for resolution R (default 1024):

  mode            flat vocab        per-axis vocab
  single          R                 3R   (x +0, y +R, z +2R)
  dual            2R (centroids +R) 6R   (centroid axes shifted by +3R)
  dual_separate   2R                6R   (same vocab as dual, block order)
  single_separate R + 1 (<sep>)     3R + 1

Points always emit their three tokens in z, y, x order and are sorted by
the z-y-x lexicographic order of their quantized levels. Duplicate quantized
points collapse before sorting: the sequence encodes a set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import AxisAmbiguityError, TokenSequenceError

Mode = Literal["single", "dual", "dual_separate", "single_separate"]

MODES = ("single", "dual", "dual_separate", "single_separate")


@dataclass(frozen=True)
class AnchorSet:
    """Vertices plus face centroids in [-1, 1]^3."""

    vertices: np.ndarray
    centroids: np.ndarray

    def __init__(self, vertices, centroids, validate=True):
        v = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
        c = np.asarray(centroids, dtype=np.float64).reshape(-1, 3)
        if validate:
            for name, arr in (("vertices", v), ("centroids", c)):
                if arr.size and (arr.min() < -1.0 or arr.max() > 1.0):
                    raise ValueError(f"{name} outside [-1, 1]^3; normalize first")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "centroids", c)

    def __eq__(self, other):
        if not isinstance(other, AnchorSet):
            return NotImplemented
        return (self.vertices.shape == other.vertices.shape
                and self.centroids.shape == other.centroids.shape
                and bool(np.all(self.vertices == other.vertices))
                and bool(np.all(self.centroids == other.centroids)))


@dataclass(frozen=True)
class TokenizerConfig:
    mode: Mode = "single_separate"
    per_axis_vocab: bool = True
    resolution: int = 1024

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[int, ...]
    config: TokenizerConfig

    def __len__(self):
        return len(self.tokens)


def quantize(coord: float, resolution: int = 1024) -> int:
    """Map [-1, 1] to integer levels [0, resolution); round half up."""
    if not (-1.0 <= coord <= 1.0):
        raise ValueError(f"coordinate {coord} outside [-1, 1]")
    return int(np.floor((coord + 1.0) / 2.0 * (resolution - 1) + 0.5))


def dequantize(level: int, resolution: int = 1024) -> float:
    """Level back to [-1, 1]; exact inverse at level precision."""
    if not (0 <= level < resolution):
        raise ValueError(f"level {level} outside [0, {resolution})")
    return 2.0 * level / (resolution - 1) - 1.0


def _quantize_points(points: np.ndarray, resolution: int) -> np.ndarray:
    if points.size and (points.min() < -1.0 or points.max() > 1.0):
        raise ValueError("coordinates outside [-1, 1]")
    return np.floor((points + 1.0) / 2.0 * (resolution - 1) + 0.5).astype(np.int64)


def _dequantize_levels(levels: np.ndarray, resolution: int) -> np.ndarray:
    return 2.0 * levels.astype(np.float64) / (resolution - 1) - 1.0


def _sort_dedup(levels: np.ndarray) -> np.ndarray:
    """Unique quantized points in z-y-x lexicographic order."""
    if len(levels) == 0:
        return levels.reshape(0, 3)
    # lexsort: last key is primary, so feed x, y, z.
    order = np.lexsort((levels[:, 0], levels[:, 1], levels[:, 2]))
    s = levels[order]
    keep = np.ones(len(s), dtype=bool)
    keep[1:] = np.any(s[1:] != s[:-1], axis=1)
    return s[keep]


def vocab_size(cfg: TokenizerConfig) -> int:
    r = cfg.resolution
    axes = 3 if cfg.per_axis_vocab else 1
    if cfg.mode == "single":
        return axes * r
    if cfg.mode in ("dual", "dual_separate"):
        return 2 * axes * r
    return axes * r + 1  # single_separate: one extra separator slot


def sep_token(cfg: TokenizerConfig) -> int:
    if cfg.mode != "single_separate":
        raise ValueError("separator only exists in single_separate mode")
    return vocab_size(cfg) - 1


def _emit(levels: np.ndarray, cfg: TokenizerConfig, centroid_block: bool) -> np.ndarray:
    """Token triples (z, y, x per point) with vocabulary offsets applied."""
    r = cfg.resolution
    n = len(levels)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.empty((n, 3), dtype=np.int64)
    # emission order z, y, x; axis offsets x +0, y +r, z +2r when per-axis.
    if cfg.per_axis_vocab:
        out[:, 0] = levels[:, 2] + 2 * r
        out[:, 1] = levels[:, 1] + r
        out[:, 2] = levels[:, 0]
        span = 3 * r
    else:
        out[:, 0] = levels[:, 2]
        out[:, 1] = levels[:, 1]
        out[:, 2] = levels[:, 0]
        span = r
    if centroid_block and cfg.mode in ("dual", "dual_separate"):
        out += span
    return out.reshape(-1)


def encode(anchors: AnchorSet, cfg: TokenizerConfig | None = None) -> TokenSequence:
    """Serialize an anchor set to tokens; inverse of :func:`decode` at
    quantized precision."""
    cfg = cfg or TokenizerConfig()
    if len(anchors.vertices) == 0:
        raise ValueError("anchor set has no vertices; nothing to encode")
    vq = _sort_dedup(_quantize_points(anchors.vertices, cfg.resolution))
    cq = _sort_dedup(_quantize_points(anchors.centroids, cfg.resolution))

    if cfg.mode == "single":
        tokens = _emit(vq, cfg, False)
    elif cfg.mode == "dual":
        # joint z-y-x sort over both point types; vertices first on equal keys
        both = np.vstack([vq, cq])
        kind = np.concatenate([np.zeros(len(vq), np.int64),
                               np.ones(len(cq), np.int64)])
        order = np.lexsort((kind, both[:, 0], both[:, 1], both[:, 2]))
        trips = np.vstack([_emit(vq, cfg, False).reshape(-1, 3),
                           _emit(cq, cfg, True).reshape(-1, 3)])
        tokens = trips[order].reshape(-1)
    elif cfg.mode == "dual_separate":
        tokens = np.concatenate([_emit(vq, cfg, False), _emit(cq, cfg, True)])
    else:  # single_separate
        tokens = np.concatenate([
            _emit(vq, cfg, False),
            np.array([sep_token(cfg)], dtype=np.int64),
            _emit(cq, cfg, False),
        ])
    return TokenSequence(tokens=tuple(int(t) for t in tokens), config=cfg)


def _axis_check(triples: np.ndarray, cfg: TokenizerConfig, base: int) -> np.ndarray:
    """Validate per-axis ranges of raw token triples (z, y, x order) within
    one point-type span starting at ``base``; returns levels (n, 3) as x,y,z."""
    r = cfg.resolution
    t = triples - base
    if cfg.per_axis_vocab:
        zok = (t[:, 0] >= 2 * r) & (t[:, 0] < 3 * r)
        yok = (t[:, 1] >= r) & (t[:, 1] < 2 * r)
        xok = (t[:, 2] >= 0) & (t[:, 2] < r)
        if not bool(np.all(zok & yok & xok)):
            raise AxisAmbiguityError(
                "token outside the vocabulary range of its sequence axis")
        levels = np.stack([t[:, 2], t[:, 1] - r, t[:, 0] - 2 * r], axis=1)
    else:
        if t.size and (t.min() < 0 or t.max() >= r):
            raise TokenSequenceError("coordinate token outside vocabulary range")
        levels = np.stack([t[:, 2], t[:, 1], t[:, 0]], axis=1)
    return levels


def decode(seq: TokenSequence, cfg: TokenizerConfig | None = None) -> AnchorSet:
    """Tokens back to (dequantized) anchors. Raises on structural damage:
    wrong axis ranges, bad block order, missing/duplicated separator."""
    cfg = cfg or seq.config
    r = cfg.resolution
    tokens = np.asarray(seq.tokens, dtype=np.int64)
    if tokens.size and (tokens.min() < 0 or tokens.max() >= vocab_size(cfg)):
        raise TokenSequenceError("token outside vocabulary")

    if cfg.mode == "single_separate":
        sep = sep_token(cfg)
        positions = np.nonzero(tokens == sep)[0]
        if len(positions) != 1:
            raise TokenSequenceError(
                f"expected exactly one separator, found {len(positions)}")
        p = int(positions[0])
        vtok, ctok = tokens[:p], tokens[p + 1:]
        if len(vtok) % 3 or len(ctok) % 3:
            raise TokenSequenceError("block length not divisible by 3")
        vlv = _axis_check(vtok.reshape(-1, 3), cfg, 0)
        clv = _axis_check(ctok.reshape(-1, 3), cfg, 0)
    elif cfg.mode == "single":
        if len(tokens) % 3:
            raise TokenSequenceError("sequence length not divisible by 3")
        vlv = _axis_check(tokens.reshape(-1, 3), cfg, 0)
        clv = np.zeros((0, 3), dtype=np.int64)
    else:  # dual / dual_separate
        if len(tokens) % 3:
            raise TokenSequenceError("sequence length not divisible by 3")
        triples = tokens.reshape(-1, 3)
        span = 3 * r if cfg.per_axis_vocab else r
        is_centroid = triples[:, 0] >= span
        same = (triples[:, 1] >= span) == is_centroid
        same &= (triples[:, 2] >= span) == is_centroid
        if not bool(np.all(same)):
            raise TokenSequenceError("triple mixes vertex and centroid vocab")
        if cfg.mode == "dual_separate" and is_centroid.size:
            first_c = int(np.argmax(is_centroid)) if is_centroid.any() else len(triples)
            if np.any(~is_centroid[first_c:]):
                raise TokenSequenceError(
                    "vertex triple after centroid block in dual_separate")
        vlv = _axis_check(triples[~is_centroid], cfg, 0)
        clv = _axis_check(triples[is_centroid], cfg, span)

    return AnchorSet(
        vertices=_dequantize_levels(vlv, r),
        centroids=_dequantize_levels(clv, r),
        validate=False,
    )


def quantized_anchor_set(anchors: AnchorSet, cfg: TokenizerConfig) -> AnchorSet:
    """The canonical (sorted, deduplicated, level-precision) form that a
    round-trip through encode/decode reproduces exactly."""
    vq = _sort_dedup(_quantize_points(anchors.vertices, cfg.resolution))
    cq = _sort_dedup(_quantize_points(anchors.centroids, cfg.resolution))
    if cfg.mode == "single":
        cq = cq[:0]
    return AnchorSet(_dequantize_levels(vq, cfg.resolution),
                     _dequantize_levels(cq, cfg.resolution), validate=False)


def _fmt(x: float) -> str:
    return repr(float(x))


def save_anchors(anchors: AnchorSet, path) -> None:
    """Text format: header ``anchors <nv> <nc>``, then v/c lines."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"anchors {len(anchors.vertices)} {len(anchors.centroids)}\n")
        for p in anchors.vertices:
            fh.write(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}\n")
        for p in anchors.centroids:
            fh.write(f"c {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}\n")


def load_anchors(path) -> AnchorSet:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != "anchors":
            raise ValueError(f"{path}: bad anchor file header")
        nv, nc = int(header[1]), int(header[2])
        verts, cents = [], []
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "c":
                cents.append([float(x) for x in parts[1:4]])
            else:
                raise ValueError(f"{path}: unexpected line {line!r}")
    if len(verts) != nv or len(cents) != nc:
        raise ValueError(f"{path}: header counts do not match content")
    return AnchorSet(np.array(verts).reshape(-1, 3),
                     np.array(cents).reshape(-1, 3))


def save_token_sequences(seqs, path) -> None:
    """One whitespace-separated integer sequence per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for seq in seqs:
            fh.write(" ".join(str(t) for t in seq.tokens) + "\n")


def load_token_sequences(path, cfg: TokenizerConfig):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(TokenSequence(
                    tokens=tuple(int(t) for t in line.split()), config=cfg))
    return out
