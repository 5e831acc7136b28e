"""Dense weighted graphs, matchings, objectives, and the exhaustive oracle.

A :class:`DenseGraph` is a complete graph on an even number of vertices,
stored as a symmetric weight matrix.  Incomplete inputs are made complete
by :func:`complete_with_sentinels`, which fills the missing edges with a
large finite weight and remembers them in a mask; a solver result that
touches one of those edges signals that the genuine edges admit no
perfect matching.

:func:`brute_force_optimum` enumerates every perfect matching and is the
ground-truth oracle the exact solvers are validated against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .validation import check_even_count, check_weight_matrix

SENTINEL_FACTOR = 10.0
ORACLE_MAX_VERTICES = 16


class Objective(enum.Enum):
    """Scalar criteria a perfect matching is optimised for."""

    MIN_COST = "mcm"        # total edge weight
    BOTTLENECK = "bm"       # largest edge weight
    UNIFORM = "um"          # largest minus smallest edge weight
    MIN_DEVIATION = "mdm"   # weight sum / vertex count, minus smallest edge weight

    @classmethod
    def from_key(cls, key: str) -> "Objective":
        for obj in cls:
            if obj.value == key.lower():
                return obj
        raise ValueError(f"unknown objective {key!r}; expected one of "
                         f"{[o.value for o in cls]}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DenseGraph:
    """Complete weighted graph on an even vertex count.

    ``weights`` is symmetric with a zero diagonal; all entries are finite
    and non-negative.  ``sentinel_mask`` marks artificially completed
    edges.  If ``bipartite`` is set, the first half of the indices is one
    side and the second half the other, and every genuine (non-sentinel)
    edge joins the two halves.
    """

    weights: np.ndarray
    bipartite: bool = False
    sentinel_mask: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        w = check_weight_matrix(self.weights)
        n = check_even_count(w.shape[0])
        if self.sentinel_mask is None:
            mask = np.zeros((n, n), dtype=bool)
        else:
            mask = np.asarray(self.sentinel_mask, dtype=bool).copy()
            if mask.shape != (n, n):
                raise ValueError("sentinel mask shape must match the weight matrix")
            if not np.array_equal(mask, mask.T):
                raise ValueError("sentinel mask must be symmetric")
            np.fill_diagonal(mask, False)
        if self.bipartite:
            h = n // 2
            within = np.zeros((n, n), dtype=bool)
            within[:h, :h] = True
            within[h:, h:] = True
            np.fill_diagonal(within, False)
            if not mask[within].all():
                raise ValueError(
                    "bipartite graph has a genuine edge inside one half; "
                    "within-half edges must be sentinel-completed"
                )
        w.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "sentinel_mask", mask)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def half(self) -> int:
        return self.n // 2

    def max_genuine_weight(self) -> float:
        genuine = self.weights[~self.sentinel_mask]
        return float(genuine.max()) if genuine.size else 0.0

    def is_sentinel(self, i: int, j: int) -> bool:
        return bool(self.sentinel_mask[i, j])

    def relabel(self, permutation) -> "DenseGraph":
        """Graph with vertex ``v`` renamed to ``permutation[v]``."""
        perm = np.asarray(permutation, dtype=np.intp)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n)
        return DenseGraph(
            weights=self.weights[np.ix_(inv, inv)],
            bipartite=False,
            sentinel_mask=self.sentinel_mask[np.ix_(inv, inv)],
        )


@dataclass(frozen=True)
class Matching:
    """Disjoint vertex pairs on a graph with ``n`` vertices."""

    pairs: tuple
    n: int

    def __post_init__(self):
        canon = tuple(sorted((min(i, j), max(i, j)) for i, j in self.pairs))
        seen = set()
        for i, j in canon:
            if i == j:
                raise ValueError(f"self-pair ({i}, {j}) is not a matching edge")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"vertex index out of range in pair ({i}, {j})")
            if i in seen or j in seen:
                raise ValueError(f"vertex reused by pair ({i}, {j})")
            seen.update((i, j))
        object.__setattr__(self, "pairs", canon)

    @property
    def is_perfect(self) -> bool:
        return 2 * len(self.pairs) == self.n

    def covered(self) -> set:
        return {v for pair in self.pairs for v in pair}

    def uses_sentinel(self, graph: DenseGraph) -> bool:
        return any(graph.sentinel_mask[i, j] for i, j in self.pairs)

    def relabel(self, permutation) -> "Matching":
        perm = list(permutation)
        return Matching(tuple((perm[i], perm[j]) for i, j in self.pairs), self.n)

    def edge_weights(self, graph: DenseGraph) -> np.ndarray:
        if self.n != graph.n:
            raise ValueError(
                f"matching is on {self.n} vertices but the graph has {graph.n}"
            )
        return np.array([graph.weights[i, j] for i, j in self.pairs], dtype=np.float64)


def evaluate(graph: DenseGraph, matching: Matching, objective: Objective) -> float:
    """Objective value of a perfect matching on ``graph``.

    This is the single evaluation path used everywhere: solvers and the
    oracle both report values computed here, so equal matchings always
    produce bit-identical values.
    """
    if not matching.is_perfect:
        raise ValueError("incomplete matching")
    w = matching.edge_weights(graph)
    if objective is Objective.MIN_COST:
        return float(w.sum())
    if objective is Objective.BOTTLENECK:
        return float(w.max())
    if objective is Objective.UNIFORM:
        return float(w.max() - w.min())
    if objective is Objective.MIN_DEVIATION:
        return float(w.sum() / graph.n - w.min())
    raise ValueError(f"unknown objective {objective!r}")


def complete_with_sentinels(edges, n: int, bipartite: bool = False) -> DenseGraph:
    """Build a complete :class:`DenseGraph` from a partial edge list.

    ``edges`` is an iterable of ``(i, j, weight)`` triples (or a mapping
    ``{(i, j): weight}``).  Every missing off-diagonal pair receives the
    sentinel weight ``10 * n * max(listed weights)`` and is flagged in the
    sentinel mask.  Listing the same pair twice with different weights is
    an error.
    """
    n = check_even_count(n)
    if isinstance(edges, dict):
        items = [(i, j, w) for (i, j), w in edges.items()]
    else:
        items = [(i, j, w) for i, j, w in edges]

    listed: dict = {}
    for i, j, w in items:
        i, j, w = int(i), int(j), float(w)
        if i == j:
            raise ValueError(f"self-loop ({i}, {i}) is not allowed")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
        if not (np.isfinite(w) and w >= 0):
            raise ValueError(f"edge ({i}, {j}) weight must be finite and >= 0, got {w}")
        key = (min(i, j), max(i, j))
        if key in listed and listed[key] != w:
            raise ValueError(f"contradictory duplicate entries for edge {key}")
        listed[key] = w
    if bipartite:
        h = n // 2
        for i, j in listed:
            if (i < h) == (j < h):
                raise ValueError(f"edge ({i}, {j}) joins vertices on the same side")

    max_listed = max(listed.values(), default=0.0)
    # A zero base would make sentinels indistinguishable from real edges.
    sentinel_value = SENTINEL_FACTOR * n * (max_listed if max_listed > 0 else 1.0)

    weights = np.full((n, n), sentinel_value, dtype=np.float64)
    mask = np.ones((n, n), dtype=bool)
    np.fill_diagonal(weights, 0.0)
    np.fill_diagonal(mask, False)
    for (i, j), w in listed.items():
        weights[i, j] = weights[j, i] = w
        mask[i, j] = mask[j, i] = False
    return DenseGraph(weights=weights, bipartite=bipartite, sentinel_mask=mask)


def _oracle_bound(objective, n, acc_sum, acc_max, acc_min, count):
    # Lower bound on any completion of a partial matching: weights are
    # non-negative, so the sum only grows, the max only grows, and the min
    # only shrinks.
    if objective is Objective.MIN_COST:
        return acc_sum
    if objective is Objective.BOTTLENECK:
        return acc_max
    if count == 0:
        return -np.inf
    if objective is Objective.UNIFORM:
        return acc_max - acc_min
    return acc_sum / n - acc_min


def brute_force_optimum(graph: DenseGraph, objective: Objective):
    """Exhaustive minimum over all perfect matchings.

    Returns ``(matching, value)``.  Bipartite graphs enumerate only
    cross-side matchings.  Among ties the lexicographically smallest
    sorted pair list wins.  Limited to ``n <= 16`` (2,027,025 matchings).
    """
    n = graph.n
    if n > ORACLE_MAX_VERTICES:
        raise ValueError(f"instance too large for oracle (n={n} > {ORACLE_MAX_VERTICES})")
    W = graph.weights.tolist()

    best_value = np.inf
    best_pairs = None
    pairs: list = []

    if graph.bipartite:
        h = n // 2
        right_free = [True] * h

        def recurse_bip(i, acc_sum, acc_max, acc_min):
            nonlocal best_value, best_pairs
            if i == h:
                value = _oracle_bound(objective, n, acc_sum, acc_max, acc_min, h)
                if value < best_value:
                    best_value = value
                    best_pairs = list(pairs)
                return
            for r in range(h):
                if not right_free[r]:
                    continue
                w = W[i][h + r]
                s = acc_sum + w
                mx = w if w > acc_max else acc_max
                mn = w if w < acc_min else acc_min
                if _oracle_bound(objective, n, s, mx, mn, i + 1) >= best_value:
                    continue
                right_free[r] = False
                pairs.append((i, h + r))
                recurse_bip(i + 1, s, mx, mn)
                pairs.pop()
                right_free[r] = True

        recurse_bip(0, 0.0, -np.inf, np.inf)
    else:
        free = [True] * n

        def recurse(remaining, acc_sum, acc_max, acc_min):
            nonlocal best_value, best_pairs
            if remaining == 0:
                value = _oracle_bound(objective, n, acc_sum, acc_max, acc_min, n // 2)
                if value < best_value:
                    best_value = value
                    best_pairs = list(pairs)
                return
            i = free.index(True)
            free[i] = False
            row = W[i]
            for j in range(i + 1, n):
                if not free[j]:
                    continue
                w = row[j]
                s = acc_sum + w
                mx = w if w > acc_max else acc_max
                mn = w if w < acc_min else acc_min
                if _oracle_bound(objective, n, s, mx, mn, 1) >= best_value:
                    continue
                free[j] = False
                pairs.append((i, j))
                recurse(remaining - 2, s, mx, mn)
                pairs.pop()
                free[j] = True
            free[i] = True

        recurse(n, 0.0, -np.inf, np.inf)

    matching = Matching(tuple(best_pairs), n)
    return matching, evaluate(graph, matching, objective)


def save_graph(graph: DenseGraph, path) -> None:
    """Write the text format: ``n <count> [bipartite]`` then ``i j w`` lines.

    Sentinel edges are omitted; loading re-completes them with the same
    formula, so a save/load round trip reproduces the matrix exactly.
    """
    lines = [f"n {graph.n} bipartite" if graph.bipartite else f"n {graph.n}"]
    for i in range(graph.n):
        for j in range(i + 1, graph.n):
            if not graph.sentinel_mask[i, j]:
                lines.append(f"{i} {j} {float(graph.weights[i, j])!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_graph(path) -> DenseGraph:
    """Parse the text format written by :func:`save_graph`.

    Whitespace-separated fields, ``#`` starts a comment, decimal floats.
    Pairs not listed are sentinel-completed.
    """
    header = None
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if header is None:
                if fields[0] != "n" or len(fields) not in (2, 3):
                    raise ValueError(
                        f"line {lineno}: expected header 'n <count> [bipartite]', got {raw!r}"
                    )
                if len(fields) == 3 and fields[2] != "bipartite":
                    raise ValueError(f"line {lineno}: unknown header flag {fields[2]!r}")
                header = (int(fields[1]), len(fields) == 3)
                continue
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: expected 'i j w', got {raw!r}")
            i, j = int(fields[0]), int(fields[1])
            if i >= j:
                raise ValueError(f"line {lineno}: edges must be listed with i < j")
            edges.append((i, j, float(fields[2])))
    if header is None:
        raise ValueError("empty graph file")
    n, bipartite = header
    return complete_with_sentinels(edges, n, bipartite=bipartite)
