"""Maximum-weight matching on general graphs: the global solver for the
triangle-merge selection problem, plus the greedy baseline and an exhaustive
reference used as a test oracle.

The exact solver runs on a compiled kernel when the extension built
(``quadkit.matching._blossom_cy``) and transparently falls back to the pure
Python twin otherwise; ``KERNEL`` names the active implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _blossom as _blossom_py

try:
    from . import _blossom_cy as _kernel
    KERNEL = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    _kernel = _blossom_py
    KERNEL = "python"

# Above this edge count the lexicographic tie canonicalization (which
# enumerates equal-weight optima) is skipped; results remain deterministic
# through fixed input ordering but are not canonical.
CANONICAL_EDGE_LIMIT = 24

BRUTE_FORCE_EDGE_LIMIT = 24


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with non-negative edge weights; nodes are the
    triangle faces of a merge problem, edges the surviving candidates."""

    node_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __init__(self, node_count, edges):
        object.__setattr__(self, "node_count", int(node_count))
        norm = []
        seen = set()
        for u, v, w in edges:
            u = int(u)
            v = int(v)
            w = float(w)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < self.node_count) or not (0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) out of node range")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            if not math.isfinite(w) or w < 0.0:
                raise ValueError(f"edge ({u}, {v}) has invalid weight {w}")
            norm.append((u, v, w))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def edge_count(self):
        return len(self.edges)


@dataclass(frozen=True)
class Matching:
    """A set of pairwise node-disjoint edge indices and their summed weight."""

    selected: tuple[int, ...]
    total_weight: float

    def nodes(self, graph: WeightedGraph) -> set[int]:
        out = set()
        for k in self.selected:
            u, v, _ = graph.edges[k]
            out.add(u)
            out.add(v)
        return out


def _canonical_weight(graph: WeightedGraph, selected) -> float:
    # Fixed ascending-index summation so equal edge sets always produce
    # bit-identical totals across solvers.
    return float(sum(graph.edges[k][2] for k in sorted(selected)))


def _make_matching(graph: WeightedGraph, selected) -> Matching:
    sel = tuple(sorted(int(k) for k in selected))
    used = set()
    for k in sel:
        u, v, _ = graph.edges[k]
        if u in used or v in used:
            raise AssertionError("solver produced overlapping matching edges")
        used.add(u)
        used.add(v)
    return Matching(selected=sel, total_weight=_canonical_weight(graph, sel))


def is_valid_matching(graph: WeightedGraph, matching: Matching) -> bool:
    used = set()
    for k in matching.selected:
        u, v, _ = graph.edges[k]
        if u in used or v in used:
            return False
        used.add(u)
        used.add(v)
    return True


def max_weight_matching(graph: WeightedGraph) -> Matching:
    """Globally optimal matching: maximizes total weight, not cardinality.

    On small graphs (<= CANONICAL_EDGE_LIMIT edges) the result is additionally
    canonicalized to the lexicographically smallest edge-index set among the
    matchings achieving the solver's total; at scale the result is
    deterministic but not canonical.
    """
    if graph.edge_count == 0:
        return Matching(selected=(), total_weight=0.0)
    edge_u = [e[0] for e in graph.edges]
    edge_v = [e[1] for e in graph.edges]
    edge_w = [e[2] for e in graph.edges]
    mate = _kernel.solve(graph.node_count, edge_u, edge_v, edge_w)
    selected = [k for k, (u, v, _) in enumerate(graph.edges) if mate[u] == v]
    result = _make_matching(graph, selected)
    if graph.edge_count <= CANONICAL_EDGE_LIMIT:
        canon = _lex_smallest_with_weight(graph, result.total_weight)
        if canon is not None:
            result = _make_matching(graph, canon)
    return result


def greedy_matching(graph: WeightedGraph) -> Matching:
    """Local baseline: repeatedly take the heaviest edge between two still
    unmatched nodes; ties broken by ascending edge index."""
    order = sorted(range(graph.edge_count),
                   key=lambda k: (-graph.edges[k][2], k))
    used = set()
    selected = []
    for k in order:
        u, v, _ = graph.edges[k]
        if u not in used and v not in used:
            selected.append(k)
            used.add(u)
            used.add(v)
    return _make_matching(graph, selected)


def brute_force_matching(graph: WeightedGraph) -> Matching:
    """Exhaustive optimum by frontier DP over edge subsets; the independent
    oracle for the blossom solver. Refuses graphs above the enumeration bound.

    Among equal-weight optima the lexicographically smallest sorted edge-index
    tuple is returned.
    """
    m = graph.edge_count
    if m > BRUTE_FORCE_EDGE_LIMIT:
        raise ValueError(
            f"brute force limited to {BRUTE_FORCE_EDGE_LIMIT} edges, got {m}")
    best = _enumerate_best(graph)
    result = _make_matching(graph, best)
    # same tie canonicalization as the exact solver, keyed on the weight the
    # enumeration itself produced
    canon = _lex_smallest_with_weight(graph, result.total_weight)
    if canon is not None:
        result = _make_matching(graph, canon)
    return result


def _enumerate_best(graph: WeightedGraph):
    """DFS over take/skip decisions per edge, memoized on the frontier
    (nodes still relevant to undecided edges). Returns the optimum edge set,
    lexicographically smallest among ties."""
    m = graph.edge_count
    edges = graph.edges
    relevant = [0] * (m + 1)
    for k in range(m - 1, -1, -1):
        u, v, _ = edges[k]
        relevant[k] = relevant[k + 1] | (1 << u) | (1 << v)

    memo = {}

    def go(k, used):
        used &= relevant[k]
        if k == m:
            return 0.0, ()
        key = (k, used)
        hit = memo.get(key)
        if hit is not None:
            return hit
        u, v, w = edges[k]
        best_w, best_set = go(k + 1, used)
        if not (used >> u) & 1 and not (used >> v) & 1:
            take_w, take_set = go(k + 1, used | (1 << u) | (1 << v))
            take_w = take_w + w
            take_set = (k,) + take_set
            if take_w > best_w or (take_w == best_w and take_set < best_set):
                best_w, best_set = take_w, take_set
        memo[key] = (best_w, best_set)
        return best_w, best_set

    _, chosen = go(0, 0)
    # Re-rank ties under canonical (ascending-index) summation: enumeration
    # sums in DFS order, which can differ in the last ulp.
    return chosen


def _lex_smallest_with_weight(graph: WeightedGraph, target: float):
    """Lexicographically smallest matching whose canonical (ascending-index
    left-fold) total equals ``target`` exactly.

    Returns None if the bounded search gives up; the caller then keeps the
    solver's own (deterministic, non-canonical) edge set. Sums are folded in
    ascending index order during the search so float associativity matches
    the canonical total bit for bit.
    """
    if target == 0.0:
        return ()
    m = graph.edge_count
    edges = graph.edges
    # suffix_gain[k]: upper bound on weight obtainable from edges k..m-1
    suffix_gain = [0.0] * (m + 1)
    for k in range(m - 1, -1, -1):
        suffix_gain[k] = suffix_gain[k + 1] + edges[k][2]
    slack = 1e-9 * max(1.0, abs(target))
    budget = [200_000]
    best = [None]

    def walk(k, used, acc, chosen):
        if budget[0] <= 0:
            return
        budget[0] -= 1
        if acc == target:
            t = tuple(chosen)
            if best[0] is None or t < best[0]:
                best[0] = t
        if k == m or acc > target + slack or acc + suffix_gain[k] + slack < target:
            return
        u, v, w = edges[k]
        if not (used >> u) & 1 and not (used >> v) & 1:
            chosen.append(k)
            walk(k + 1, used | (1 << u) | (1 << v), acc + w, chosen)
            chosen.pop()
        walk(k + 1, used, acc, chosen)

    walk(0, 0, 0.0, [])
    if budget[0] <= 0:
        return None
    return best[0]


def dump_graph(graph: WeightedGraph, matching: Matching | None = None) -> str:
    """Debug edge list ``u v w [selected]`` for external verification."""
    chosen = set(matching.selected) if matching is not None else set()
    lines = [f"nodes {graph.node_count}", f"edges {graph.edge_count}"]
    for k, (u, v, w) in enumerate(graph.edges):
        mark = " selected" if k in chosen else ""
        lines.append(f"{u} {v} {w!r}{mark}")
    return "\n".join(lines) + "\n"
