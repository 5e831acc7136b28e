"""End-to-end heuristic: embed the graph, match in Euclidean space, evaluate on the original weights.

The surrogate graph carries the pairwise distances of the embedded
points.  A matching found there is only a vertex pairing, so its quality
is always judged by evaluating the ORIGINAL weights; surrogate values
never leave this module.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .embedding import Embedding, embed_graph
from .exact import SolverReport, solve
from .graph import DenseGraph, Matching, Objective, evaluate
from .greedy import euclidean_greedy_match, pairwise_distances
from .validation import check_fitted, check_points
from .walks import EmbeddingConfig

MATCHERS = ("exact_on_surrogate", "euclidean_greedy")
_MATCHER_ALIASES = {"exact": "exact_on_surrogate", "greedy": "euclidean_greedy"}


def _matcher_name(matcher: str) -> str:
    name = _MATCHER_ALIASES.get(matcher, matcher)
    if name not in MATCHERS:
        raise ValueError(f"unknown surrogate matcher {matcher!r}; "
                         f"expected one of {MATCHERS}")
    return name


@dataclass(frozen=True)
class SurrogateGraph:
    """Embedded points plus the dense Euclidean graph they induce.

    Vertex i of the surrogate is vertex i of the source graph.  For a
    bipartite source the within-half distances are flagged as sentinels
    so the bipartite invariant holds and solvers stay on cross edges.
    """

    points: np.ndarray
    graph: DenseGraph


def build_surrogate(embedding, bipartite: bool = False) -> SurrogateGraph:
    """Dense w'(i,j) = Euclidean distance between embedded vertices i and j."""
    if isinstance(embedding, Embedding):
        points = embedding.vectors
    else:
        points = check_points(embedding)
    weights = pairwise_distances(points)
    mask = None
    if bipartite:
        n = points.shape[0]
        h = n // 2
        mask = np.zeros((n, n), dtype=bool)
        mask[:h, :h] = True
        mask[h:, h:] = True
        np.fill_diagonal(mask, False)
    graph = DenseGraph(weights, bipartite=bipartite, sentinel_mask=mask)
    return SurrogateGraph(points=points, graph=graph)


def match_surrogate(surrogate: SurrogateGraph, objective: Objective,
                    matcher: str = "exact_on_surrogate") -> Matching:
    """Solve the chosen objective on surrogate weights; returns only the pairing."""
    name = _matcher_name(matcher)
    if name == "euclidean_greedy":
        if surrogate.graph.bipartite:
            raise ValueError("euclidean greedy ignores bipartitions; "
                             "use the exact surrogate matcher on bipartite graphs")
        return euclidean_greedy_match(surrogate.points)
    return solve(surrogate.graph, objective).matching


def approx_match(graph: DenseGraph, objective, config: EmbeddingConfig | None = None,
                 matcher: str = "exact_on_surrogate", seed: int | None = None,
                 embedding=None) -> SolverReport:
    """embed_graph -> build_surrogate -> match -> evaluate on original weights.

    ``embedding`` injects a precomputed embedding (or raw point array) in
    place of the training stage, which pins down pipeline behaviour in
    tests independently of training stochasticity.
    """
    if isinstance(objective, str):
        objective = Objective.from_key(objective)
    config = EmbeddingConfig() if config is None else config
    name = _matcher_name(matcher)
    start = time.perf_counter()
    if embedding is None:
        embedding = embed_graph(graph, config, seed=seed)
    points = embedding.vectors if isinstance(embedding, Embedding) else check_points(embedding)
    if points.shape[0] != graph.n:
        raise ValueError(f"embedding has {points.shape[0]} rows for a graph with "
                         f"n={graph.n}")
    surrogate = build_surrogate(points, bipartite=graph.bipartite)
    matching = match_surrogate(surrogate, objective, name)
    value = evaluate(graph, matching, objective)
    wall = time.perf_counter() - start
    return SolverReport(matching=matching, value=value,
                        iterations=graph.n // 2, wall_time=wall)


class EmbeddingMatcher(BaseEstimator):
    """Estimator wrapper around :func:`approx_match`.

    ``fit`` runs the full pipeline on a :class:`DenseGraph` (or raw
    symmetric weight matrix); ``predict`` returns the matched pairs.
    """

    def __init__(self, objective="mcm", matcher="exact_on_surrogate",
                 config=None, seed=None):
        self.objective = objective
        self.matcher = matcher
        self.config = config
        self.seed = seed

    def fit(self, X, y=None):
        graph = X if isinstance(X, DenseGraph) else DenseGraph(np.asarray(X))
        report = approx_match(graph, self.objective, self.config,
                              matcher=self.matcher, seed=self.seed)
        self.report_ = report
        self.matching_ = report.matching
        self.value_ = report.value
        return self

    def predict(self, X=None):
        check_fitted(self, "matching_")
        return np.asarray(self.matching_.pairs, dtype=np.int64)

    def fit_predict(self, X, y=None):
        return self.fit(X, y).predict(X)
