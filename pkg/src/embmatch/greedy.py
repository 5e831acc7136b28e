"""Greedy matching baseline and its spatial-index Euclidean variant.

The baseline repeatedly matches the cheapest edge between two exposed
vertices.  Ties in weight are broken by a :class:`TiePolicy`: lowest
index pair by default, or a seeded pseudo-random order.

:func:`euclidean_greedy_match` produces the identical matching on point
sets without materialising the n^2 distance matrix, using a k-d tree
over the exposed points and a lazily revalidated nearest-pair heap.
Both code paths compute distances through the same float operations
(square, sequential sum over coordinates, square root), which is what
makes bit-identical agreement possible.
"""

from __future__ import annotations

import heapq
import time

import numpy as np
from scipy.spatial import cKDTree

from .exact import SolverReport
from .graph import DenseGraph, Matching, Objective, evaluate
from .rng import STREAM_TIEBREAK, mix64, mix64_pairs
from .validation import check_even_count, check_points


class TiePolicy:
    """Deterministic order among equal-weight edges."""

    def pair_key(self, i: int, j: int) -> int:
        raise NotImplementedError

    def pair_keys(self, i, j) -> np.ndarray:
        raise NotImplementedError


class ByIndex(TiePolicy):
    """Equal weights resolved by lexicographic (i, j); the default."""

    def pair_key(self, i: int, j: int) -> int:
        return 0

    def pair_keys(self, i, j) -> np.ndarray:
        return np.zeros(len(i), dtype=np.uint64)


class Randomized(TiePolicy):
    """Equal weights resolved by a seeded hash of the pair.

    The key of a pair depends only on (seed, i, j), not on the order
    edges are considered in, so dense and spatial-index greedy agree.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._base = mix64(self.seed, STREAM_TIEBREAK)

    def pair_key(self, i: int, j: int) -> int:
        a, b = (i, j) if i < j else (j, i)
        return mix64(self._base, a, b)

    def pair_keys(self, i, j) -> np.ndarray:
        return mix64_pairs(self._base, i, j)


def greedy_match(graph: DenseGraph, policy: TiePolicy = None,
                 objective: Objective = Objective.MIN_COST) -> SolverReport:
    """Repeatedly match the cheapest edge between two exposed vertices.

    The construction never looks at the objective; ``objective`` only
    selects which value to report for the finished matching.
    """
    if policy is None:
        policy = ByIndex()
    start = time.perf_counter()
    n = graph.n
    iu, ju = np.triu_indices(n, k=1)
    w = graph.weights[iu, ju]
    keys = policy.pair_keys(iu, ju)
    # Last key is the primary sort criterion.
    order = np.lexsort((ju, iu, keys, w))

    iu = iu.tolist()
    ju = ju.tolist()
    matched = bytearray(n)
    pairs = []
    want = n // 2
    iterations = 0
    for idx in order.tolist():
        iterations += 1
        i = iu[idx]
        j = ju[idx]
        if not (matched[i] or matched[j]):
            matched[i] = matched[j] = 1
            pairs.append((i, j))
            if len(pairs) == want:
                break
    matching = Matching(tuple(pairs), n)
    value = evaluate(graph, matching, objective)
    return SolverReport(matching=matching, value=value,
                        iterations=iterations,
                        wall_time=time.perf_counter() - start)


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix, canonical float path.

    Squared coordinate differences are summed along the last axis (a
    sequential reduction for the dimensions used here), then rooted;
    :func:`_pair_distance` repeats the identical operations for one
    pair, so the two agree bit for bit.
    """
    points = check_points(points)
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def euclidean_graph(points: np.ndarray) -> DenseGraph:
    """Complete graph whose weights are pairwise Euclidean distances."""
    return DenseGraph(weights=pairwise_distances(points))


def _pair_distance(points: np.ndarray, i: int, j: int) -> float:
    d = points[i] - points[j]
    return float(np.sqrt((d * d).sum()))


class _ExposedIndex:
    """k-d tree over the exposed points, rebuilt as vertices get matched.

    The tree may contain already-matched (stale) points between
    rebuilds; queries filter them out and escalate ``k`` until a live
    neighbour is found.
    """

    def __init__(self, points, exposed):
        self.points = points
        self.rebuild(exposed)

    def rebuild(self, exposed):
        self.members = np.array(sorted(exposed), dtype=np.intp)
        self.tree = cKDTree(self.points[self.members])

    def maybe_shrink(self, exposed):
        if len(exposed) * 2 <= len(self.members):
            self.rebuild(exposed)

    def nearest_exposed(self, v, exposed):
        """Index of an exposed vertex nearest to v (tree metric), or -1."""
        size = len(self.members)
        k = 2
        while True:
            k = min(k, size)
            dists, idxs = self.tree.query(self.points[v], k=k)
            if k == 1:
                dists, idxs = [dists], [idxs]
            for dist, idx in zip(dists, idxs):
                if not np.isfinite(dist):
                    break
                u = int(self.members[idx])
                if u != v and u in exposed:
                    return u
            if k == size:
                return -1
            k *= 2

    def exposed_within(self, v, radius, exposed):
        """Exposed vertices within an (inflated) radius of v, minus v."""
        idxs = self.tree.query_ball_point(self.points[v],
                                          radius * (1 + 1e-9) + 1e-300)
        out = []
        for idx in idxs:
            u = int(self.members[idx])
            if u != v and u in exposed:
                out.append(u)
        return out


def euclidean_greedy_match(points: np.ndarray,
                           policy: TiePolicy = None) -> Matching:
    """Greedy matching of points under Euclidean distance.

    Produces exactly the matching :func:`greedy_match` would return on
    the dense distance graph with the same tie policy.  Each exposed
    vertex keeps at least one heap entry holding a previously observed
    nearest-neighbour distance; since removing points only increases
    nearest-neighbour distances, the heap minimum with both endpoints
    still exposed is the current globally closest pair.  Equal-distance
    candidates are gathered explicitly and resolved by the tie policy
    on canonically recomputed distances.
    """
    points = check_points(points)
    n = check_even_count(points.shape[0])
    if policy is None:
        policy = ByIndex()

    exposed = set(range(n))
    index = _ExposedIndex(points, exposed)

    def entry(v):
        u = index.nearest_exposed(v, exposed)
        if u == -1:
            return None
        d = _pair_distance(points, v, u)
        a, b = (v, u) if v < u else (u, v)
        return (d, policy.pair_key(a, b), a, b, v)

    heap = [e for v in range(n) for e in [entry(v)] if e is not None]
    heapq.heapify(heap)
    pairs = []

    while exposed:
        d, key, a, b, owner = heapq.heappop(heap)
        if owner not in exposed:
            continue
        if a not in exposed or b not in exposed:
            # Stale: the recorded neighbour got matched.  The owner's
            # true nearest distance can only have grown; re-query.
            e = entry(owner)
            if e is not None:
                heapq.heappush(heap, e)
            continue
        # d is now the distance of the globally closest exposed pair.
        # Drain every other entry at the same distance: any vertex in a
        # tied pair has its own entry at exactly d (its recorded value
        # is sandwiched between d and its nearest distance d).
        owners = {owner}
        requeue = []
        while heap and heap[0][0] == d:
            e2 = heapq.heappop(heap)
            if e2[4] in exposed:
                owners.add(e2[4])
        candidates = set()
        for v in owners:
            for u in index.exposed_within(v, d, exposed):
                if _pair_distance(points, v, u) == d:
                    candidates.add((v, u) if v < u else (u, v))
        if not candidates:
            candidates.add((a, b))
        i, j = min(candidates,
                   key=lambda p: (policy.pair_key(p[0], p[1]), p))
        pairs.append((i, j))
        exposed.discard(i)
        exposed.discard(j)
        for v in owners:
            if v in exposed:
                requeue.append(v)
        index.maybe_shrink(exposed)
        for v in requeue:
            e = entry(v)
            if e is not None:
                heapq.heappush(heap, e)

    return Matching(tuple(pairs), n)
