"""Exact optimal solvers for the four matching objectives.

Minimum cost is solved by the O(n^3) potentials method on bipartite
graphs and by the primal-dual blossom method on general graphs (with
complementary-slackness certification).  Bottleneck and uniform reduce
to feasibility questions over weight windows, answered by
maximum-cardinality matching (Hopcroft-Karp / blossom shrinking).
Minimum deviation reduces to one minimum-cost solve per candidate
minimum weight.

Every report satisfies ``value == evaluate(graph, matching, objective)``
with the same arithmetic path, so values are directly comparable with
the exhaustive oracle.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import blossom
from .graph import DenseGraph, Matching, Objective, evaluate

CERT_TOLERANCE_FACTOR = 1e-9
# Edges excluded from a weight-restricted subgraph get this penalty so the
# matrix stays complete; it exceeds any matching cost that avoids them.
PENALTY_FACTOR = 100.0


@dataclass(frozen=True)
class SolverReport:
    """Result of one exact or heuristic solve."""

    matching: Matching
    value: float
    iterations: int
    wall_time: float


def _hungarian_assign(cost):
    """Minimum-cost assignment on a square cost matrix (list of lists).

    Potentials method with O(n^3) total work; 1-indexed internally with
    row 0 / column 0 as scratch.  Returns ``assign`` with row i matched
    to column assign[i].
    """
    h = len(cost)
    INF = float("inf")
    u = [0.0] * (h + 1)
    v = [0.0] * (h + 1)
    p = [0] * (h + 1)
    way = [0] * (h + 1)
    for i in range(1, h + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (h + 1)
        used = [False] * (h + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, h + 1):
                if not used[j]:
                    cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(h + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [-1] * h
    for j in range(1, h + 1):
        assign[p[j] - 1] = j - 1
    return assign


def hungarian_mcm(graph: DenseGraph) -> SolverReport:
    """Minimum-cost perfect matching on a bipartite graph."""
    if not graph.bipartite:
        raise ValueError("hungarian requires bipartition")
    start = time.perf_counter()
    h = graph.half
    cost = graph.weights[:h, h:].tolist()
    assign = _hungarian_assign(cost)
    matching = Matching(tuple((i, h + assign[i]) for i in range(h)), graph.n)
    value = evaluate(graph, matching, Objective.MIN_COST)
    return SolverReport(matching=matching, value=value, iterations=h,
                        wall_time=time.perf_counter() - start)


def _blossom_mcm_pairs(weights: np.ndarray, certify: bool = True):
    """Minimum-cost perfect matching pairs on a complete weight matrix.

    Runs the blossom core in max-cardinality mode on inverted weights
    (max weight minus weight), then certifies the dual solution.
    """
    n = weights.shape[0]
    maxw = float(weights.max())
    inverted = (maxw - weights).tolist()
    neighbors = [[w for w in range(n) if w != v] for v in range(n)]
    state = blossom.max_weight_matching(n, neighbors, inverted,
                                        max_cardinality=True)
    if certify:
        inv_max = maxw - float(weights.min())
        blossom.verify_optimum(state, CERT_TOLERANCE_FACTOR * inv_max)
    return state.pairs(), state.stages


def blossom_mwpm(graph: DenseGraph) -> SolverReport:
    """Minimum-cost perfect matching on a general graph.

    The returned duals are re-checked against the complementary
    slackness conditions at tolerance 1e-9 times the maximum weight;
    a violation raises :class:`blossom.CertificationError`.
    """
    start = time.perf_counter()
    pairs, stages = _blossom_mcm_pairs(graph.weights)
    matching = Matching(tuple(pairs), graph.n)
    value = evaluate(graph, matching, Objective.MIN_COST)
    return SolverReport(matching=matching, value=value, iterations=stages,
                        wall_time=time.perf_counter() - start)


def _hopcroft_karp(h, adj, pair_left=None, pair_right=None):
    """Maximum-cardinality bipartite matching on adjacency lists.

    ``adj[i]`` lists right-side indices (0..h-1) adjacent to left vertex
    ``i``.  Optional pair arrays warm-start from an existing matching.
    """
    if pair_left is None:
        pair_left = [-1] * h
    if pair_right is None:
        pair_right = [-1] * h
    INF = float("inf")
    dist = [0.0] * h

    def bfs():
        q = deque()
        for i in range(h):
            if pair_left[i] == -1:
                dist[i] = 0
                q.append(i)
            else:
                dist[i] = INF
        found = INF
        while q:
            i = q.popleft()
            if dist[i] < found:
                for j in adj[i]:
                    k = pair_right[j]
                    if k == -1:
                        found = dist[i] + 1
                    elif dist[k] == INF:
                        dist[k] = dist[i] + 1
                        q.append(k)
        return found != INF

    def dfs(i):
        for j in adj[i]:
            k = pair_right[j]
            if k == -1 or (dist[k] == dist[i] + 1 and dfs(k)):
                pair_left[i] = j
                pair_right[j] = i
                return True
        dist[i] = INF
        return False

    while bfs():
        for i in range(h):
            if pair_left[i] == -1:
                dfs(i)
    return pair_left


def max_cardinality_matching(graph: DenseGraph, edge_filter=None,
                             initial: Matching = None) -> Matching:
    """Maximum-cardinality matching of a weight-restricted subgraph.

    ``edge_filter`` is a closed interval ``(low, high)``; only edges
    whose weight lies inside it exist in the subgraph (sentinel edges
    included, on equal terms).  ``None`` means no restriction.
    ``initial`` warm-starts from a matching whose pairs inside the
    interval are kept.
    """
    n = graph.n
    if edge_filter is None:
        lo, hi = -np.inf, np.inf
    else:
        lo, hi = edge_filter
    allowed = (graph.weights >= lo) & (graph.weights <= hi)
    np.fill_diagonal(allowed, False)

    mate = [-1] * n
    if initial is not None:
        for i, j in initial.pairs:
            if allowed[i, j]:
                mate[i] = j
                mate[j] = i

    if graph.bipartite:
        h = graph.half
        cross = allowed[:h, h:]
        adj = [np.flatnonzero(cross[i]).tolist() for i in range(h)]
        pair_left = [-1] * h
        pair_right = [-1] * h
        for i in range(h):
            if mate[i] != -1:
                pair_left[i] = mate[i] - h
                pair_right[mate[i] - h] = i
        pair_left = _hopcroft_karp(h, adj, pair_left, pair_right)
        pairs = tuple((i, h + pair_left[i]) for i in range(h)
                      if pair_left[i] != -1)
        return Matching(pairs, n)

    neighbors = [np.flatnonzero(allowed[v]).tolist() for v in range(n)]
    ones = [[1.0] * n for _ in range(n)]
    state = blossom.max_weight_matching(n, neighbors, ones,
                                        max_cardinality=True,
                                        initial_mate=mate)
    return Matching(tuple(state.pairs()), n)


def _distinct_weights(graph: DenseGraph) -> np.ndarray:
    iu, ju = np.triu_indices(graph.n, k=1)
    return np.unique(graph.weights[iu, ju])


def bottleneck_matching(graph: DenseGraph) -> SolverReport:
    """Perfect matching minimizing the largest edge weight.

    Binary search over the sorted distinct weights for the smallest
    threshold whose at-most-threshold subgraph has a perfect matching.
    Sentinel completion guarantees the largest threshold is feasible.
    """
    start = time.perf_counter()
    levels = _distinct_weights(graph)
    half = graph.n // 2

    def feasible(k):
        m = max_cardinality_matching(graph, (0.0, levels[k]))
        return m if len(m.pairs) == half else None

    lo, hi = 0, len(levels) - 1
    iterations = 0
    while lo < hi:
        mid = (lo + hi) // 2
        iterations += 1
        if feasible(mid) is not None:
            hi = mid
        else:
            lo = mid + 1
    matching = feasible(lo)
    iterations += 1
    assert matching is not None
    value = evaluate(graph, matching, Objective.BOTTLENECK)
    return SolverReport(matching=matching, value=value,
                        iterations=iterations,
                        wall_time=time.perf_counter() - start)


def uniform_matching(graph: DenseGraph) -> SolverReport:
    """Perfect matching minimizing max minus min edge weight.

    Two-pointer scan over the sorted distinct weights: for each window
    start, the window end only ever advances (a superset window stays
    feasible), and each feasibility check is warm-started from the
    previous window's matching restricted to the new window.
    """
    start = time.perf_counter()
    levels = _distinct_weights(graph)
    half = graph.n // 2
    weights = graph.weights

    best_width = None
    best_matching = None
    iterations = 0
    j = 0
    current = None
    for i in range(len(levels)):
        if j < i:
            j = i
        if current is not None:
            kept = tuple(p for p in current.pairs
                         if weights[p[0], p[1]] >= levels[i])
            current = Matching(kept, graph.n)
        exhausted = False
        while True:
            current = max_cardinality_matching(
                graph, (levels[i], levels[j]), initial=current)
            iterations += 1
            if len(current.pairs) == half:
                break
            j += 1
            if j == len(levels):
                exhausted = True
                break
        if exhausted:
            # Even the widest window starting here fails; later window
            # starts only shrink it further.
            break
        width = levels[j] - levels[i]
        if best_width is None or width < best_width:
            best_width = width
            best_matching = current
        if best_width == 0.0:
            break
    value = evaluate(graph, best_matching, Objective.UNIFORM)
    return SolverReport(matching=best_matching, value=value,
                        iterations=iterations,
                        wall_time=time.perf_counter() - start)


def min_deviation_matching(graph: DenseGraph) -> SolverReport:
    """Perfect matching minimizing (weight sum / n) minus min weight.

    For each candidate minimum w0 (every distinct weight, ascending),
    solve minimum cost on the subgraph of edges with weight >= w0 and
    score cost/n - w0.  A candidate equal to a matching's true minimum
    scores that matching exactly; any other candidate scores it no
    lower (the subtracted w0 can only be smaller than the true
    minimum), so the best candidate score is the true optimum.
    """
    start = time.perf_counter()
    n = graph.n
    weights = graph.weights
    levels = _distinct_weights(graph)
    penalty = PENALTY_FACTOR * n * max(float(weights.max()), 1.0)

    best_score = None
    best_matching = None
    iterations = 0
    for w0 in levels:
        restricted = weights.copy()
        low = restricted < w0
        np.fill_diagonal(low, False)
        restricted[low] = penalty
        if graph.bipartite:
            h = graph.half
            assign = _hungarian_assign(restricted[:h, h:].tolist())
            pairs = tuple((i, h + assign[i]) for i in range(h))
        else:
            pairs, _ = _blossom_mcm_pairs(restricted)
        iterations += 1
        matching = Matching(tuple(pairs), n)
        mw = matching.edge_weights(graph)
        if mw.min() < w0:
            # The subgraph has no perfect matching; raising w0 further
            # only removes more edges.
            break
        score = float(mw.sum() / n - w0)
        if best_score is None or score < best_score:
            best_score = score
            best_matching = matching
    value = evaluate(graph, best_matching, Objective.MIN_DEVIATION)
    return SolverReport(matching=best_matching, value=value,
                        iterations=iterations,
                        wall_time=time.perf_counter() - start)


def solve(graph: DenseGraph, objective) -> SolverReport:
    """Dispatch to the exact solver for the given objective (enum or key)."""
    if isinstance(objective, str):
        objective = Objective.from_key(objective)
    if objective is Objective.MIN_COST:
        if graph.bipartite:
            return hungarian_mcm(graph)
        return blossom_mwpm(graph)
    if objective is Objective.BOTTLENECK:
        return bottleneck_matching(graph)
    if objective is Objective.UNIFORM:
        return uniform_matching(graph)
    if objective is Objective.MIN_DEVIATION:
        return min_deviation_matching(graph)
    raise ValueError(f"unknown objective {objective!r}")
