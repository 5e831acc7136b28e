"""Synthetic instance generators.

Three families:

* an adversarial line construction that forces the greedy matcher into a
  cascade of bad choices, with a closed-form greedy/optimum ratio that
  grows like n^(log2 1.5);
* complete graphs with heavy-tailed Lomax edge weights;
* uniform-random graphs used as test fixtures.

All generators are bit-reproducible given (parameters, seed): random
weights are drawn in a canonical edge order from counter-derived
substreams, never from shared global state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import DenseGraph, complete_with_sentinels
from .rng import STREAM_LOMAX, STREAM_UNIFORM, substream
from .validation import check_even_count, check_positive


@dataclass(frozen=True)
class AdversarialInstance:
    """Level-``t`` greedy-adversarial instance: n = 2^(t-1) points on a line.

    Positions follow the doubling recursion Q_2 = {0, 1},
    Q_{k+1} = Q_k ∪ (Q_k + (2 - epsilon) * span_k), so the span grows by
    (3 - epsilon) per level and the largest distance approaches 3^(t-2).
    The slightly-too-small centre gap makes every greedy choice strict:
    greedy repeatedly matches across the newest gap and is finally left
    with the two extreme points.
    """

    t: int
    epsilon: float
    positions: np.ndarray
    graph: DenseGraph

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def predicted_optimum(self) -> float:
        """Limit (epsilon -> 0) of the minimum-cost matching: adjacent unit pairs."""
        return float(2 ** (self.t - 2))

    def predicted_greedy(self) -> float:
        """Limit of the greedy cost: 2 * 3^(t-2) - 2^(t-2)."""
        return float(2 * 3 ** (self.t - 2) - 2 ** (self.t - 2))

    def predicted_ratio(self) -> float:
        """Limit of greedy/optimum: 2 * (3/2)^(t-2) - 1."""
        return float(2 * 1.5 ** (self.t - 2) - 1)


def gen_adversarial(t: int, epsilon: float = 1e-6) -> AdversarialInstance:
    """Build the level-``t`` adversarial line instance.

    ``epsilon`` must lie in (0, 0.01): small enough that optimal values
    are undisturbed at reporting precision, large enough to dominate
    float rounding for t <= 12.
    """
    if not isinstance(t, (int, np.integer)) or t < 2:
        raise ValueError(f"level t must be an integer >= 2, got {t!r}")
    epsilon = float(epsilon)
    if not (0.0 < epsilon < 0.01):
        raise ValueError(f"epsilon must be in (0, 0.01), got {epsilon}")

    positions = np.array([0.0, 1.0])
    span = 1.0
    for _ in range(t - 2):
        positions = np.concatenate([positions, positions + (2.0 - epsilon) * span])
        span = (3.0 - epsilon) * span

    weights = np.abs(positions[:, None] - positions[None, :])
    graph = DenseGraph(weights=weights)
    pos = positions.copy()
    pos.setflags(write=False)
    return AdversarialInstance(t=int(t), epsilon=epsilon, positions=pos, graph=graph)


@dataclass(frozen=True)
class LomaxConfig:
    """Parameters for Lomax-weighted complete graphs.

    ``alpha`` is the shape (smaller means heavier tail), ``lam`` the
    scale.  With ``bipartite`` set, only cross-partition edges receive
    Lomax weights; within-partition edges are sentinel-completed.
    """

    alpha: float
    n: int
    lam: float = 1.0
    bipartite: bool = False

    def __post_init__(self):
        check_positive(self.alpha, "alpha")
        check_positive(self.lam, "lam")
        check_even_count(self.n)


def lomax_quantile(u, alpha: float, lam: float = 1.0):
    """Inverse CDF of the Lomax distribution: x = lam * ((1-u)^(-1/alpha) - 1)."""
    u = np.asarray(u, dtype=np.float64)
    return lam * ((1.0 - u) ** (-1.0 / alpha) - 1.0)


def gen_lomax(config: LomaxConfig, seed: int) -> DenseGraph:
    """Complete graph with i.i.d. Lomax(alpha, lam) edge weights.

    Weights come from inverse-CDF sampling of a counter-derived uniform
    stream, drawn in canonical edge order (upper triangle row by row;
    cross edges only when bipartite), so output is platform-independent
    for a given seed.
    """
    n = config.n
    rng = substream(seed, STREAM_LOMAX)
    if config.bipartite:
        h = n // 2
        u = rng.random((h, h))
        w = lomax_quantile(u, config.alpha, config.lam)
        edges = [(i, h + j, w[i, j]) for i in range(h) for j in range(h)]
        return complete_with_sentinels(edges, n, bipartite=True)
    iu, ju = np.triu_indices(n, k=1)
    w = lomax_quantile(rng.random(iu.shape[0]), config.alpha, config.lam)
    weights = np.zeros((n, n), dtype=np.float64)
    weights[iu, ju] = w
    weights[ju, iu] = w
    return DenseGraph(weights=weights)


def gen_uniform_random(n: int, seed: int, bipartite: bool = False) -> DenseGraph:
    """Complete graph with i.i.d. Uniform[0, 1) edge weights (test fixture)."""
    n = check_even_count(n)
    rng = substream(seed, STREAM_UNIFORM)
    if bipartite:
        h = n // 2
        u = rng.random((h, h))
        edges = [(i, h + j, u[i, j]) for i in range(h) for j in range(h)]
        return complete_with_sentinels(edges, n, bipartite=True)
    iu, ju = np.triu_indices(n, k=1)
    w = rng.random(iu.shape[0])
    weights = np.zeros((n, n), dtype=np.float64)
    weights[iu, ju] = w
    weights[ju, iu] = w
    return DenseGraph(weights=weights)
