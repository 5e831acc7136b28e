"""Random-walk corpus generation.

A dense distance-like graph is first sparsified to a k-nearest-neighbour
transition graph (low weight = strong link), then walked either
first-order (uniform over transition weights) or second-order with the
usual return / in-out bias.  Every walk draws from its own counter-based
substream keyed by the start vertex identity and walk index, so corpora
are reproducible and independent of scheduling.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import DenseGraph
from .rng import STREAM_WALK, substream
from .validation import check_positive

METHODS = ("deepwalk", "node2vec")
SIMILARITIES = ("inverse", "exp_decay", "uniform")

_INVERSE_EPS = 1e-12


@dataclass(frozen=True)
class EmbeddingConfig:
    """Hyper-parameters for the walk + skip-gram pipeline."""

    dimensions: int = 10
    walks_per_node: int = 20
    walk_length: int = 20
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    final_learning_rate: float = 1e-4
    method: str = "deepwalk"
    p: float = 0.5
    q: float = 2.0
    similarity: str = "inverse"
    knn_sparsify: int = 10
    seed: int = 0

    def __post_init__(self):
        for name in ("dimensions", "walks_per_node", "walk_length", "window",
                     "negatives", "epochs", "knn_sparsify"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {v!r}")
        check_positive(self.p, "p")
        check_positive(self.q, "q")
        check_positive(self.learning_rate, "learning_rate")
        check_positive(self.final_learning_rate, "final_learning_rate")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.similarity not in SIMILARITIES:
            raise ValueError(
                f"similarity must be one of {SIMILARITIES}, got {self.similarity!r}")


@dataclass(frozen=True)
class WalkGraph:
    """Sparsified transition graph: per-vertex neighbour ids and probabilities."""

    n: int
    neighbors: tuple  # tuple of int64 arrays, ascending vertex ids
    probs: tuple      # tuple of float64 arrays aligned with neighbors, each sums to 1

    def to_matrix(self) -> np.ndarray:
        """Dense n x n transition-probability matrix (rows sum to 1)."""
        mat = np.zeros((self.n, self.n))
        for v in range(self.n):
            mat[v, self.neighbors[v]] = self.probs[v]
        return mat


@dataclass(frozen=True)
class WalkCorpus:
    """Fixed-length vertex sequences, one row per walk, canonical order."""

    walks: np.ndarray  # (count, length) int64
    n: int

    def __post_init__(self):
        w = np.asarray(self.walks, dtype=np.int64)
        if w.ndim != 2:
            raise ValueError(f"walks must be a 2-D array, got ndim={w.ndim}")
        if w.size and (w.min() < 0 or w.max() >= self.n):
            raise ValueError("walk contains an out-of-range vertex index")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "walks", w)

    @property
    def count(self) -> int:
        return self.walks.shape[0]

    @property
    def length(self) -> int:
        return self.walks.shape[1]


def build_walk_graph(graph: DenseGraph, config: EmbeddingConfig) -> WalkGraph:
    """Sparsify to k lowest-weight genuine edges per vertex and convert to probabilities.

    Kept edges are union-symmetrised.  Similarity maps a distance-like
    weight to a transition weight: inverse -> 1/(w + 1e-12), exp_decay ->
    exp(-w / mean kept weight), uniform -> 1.  Rows are normalised.
    """
    n = graph.n
    k = min(int(config.knn_sparsify), n - 1)
    w = graph.weights
    genuine = ~graph.sentinel_mask.copy()
    np.fill_diagonal(genuine, False)

    kept = np.zeros((n, n), dtype=bool)
    for v in range(n):
        idx = np.flatnonzero(genuine[v])
        if idx.size:
            order = np.argsort(w[v, idx], kind="stable")  # ties: lower index first
            kept[v, idx[order[:k]]] = True
    kept |= kept.T

    ii, jj = np.nonzero(np.triu(kept, k=1))
    kept_weights = w[ii, jj]
    if config.similarity == "inverse":
        def sim(x):
            return 1.0 / (x + _INVERSE_EPS)
    elif config.similarity == "exp_decay":
        wbar = float(kept_weights.mean()) if kept_weights.size else 0.0
        if wbar > 0:
            def sim(x):
                return np.exp(-x / wbar)
        else:
            def sim(x):
                return np.ones_like(x)
    else:
        def sim(x):
            return np.ones_like(x)

    neighbors = []
    probs = []
    for v in range(n):
        ids = np.flatnonzero(kept[v]).astype(np.int64)
        if ids.size == 0:
            # no genuine incident edge at all: walks from v stay put
            ids = np.array([v], dtype=np.int64)
            pr = np.array([1.0])
        else:
            s = np.asarray(sim(w[v, ids]), dtype=np.float64)
            total = s.sum()
            pr = s / total if total > 0 else np.full(ids.size, 1.0 / ids.size)
        pr.setflags(write=False)
        ids.setflags(write=False)
        neighbors.append(ids)
        probs.append(pr)

    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in neighbors[v]:
            if not seen[u]:
                seen[u] = True
                queue.append(u)
    if not seen.all():
        warnings.warn("walk graph is disconnected; walks stay within their components",
                      stacklevel=2)

    return WalkGraph(n=n, neighbors=tuple(neighbors), probs=tuple(probs))


def alias_setup(probs) -> tuple[np.ndarray, np.ndarray]:
    """Build an alias table for O(1) draws from a discrete distribution."""
    pr = np.asarray(probs, dtype=np.float64)
    k = pr.size
    scaled = pr * k
    accept = np.ones(k, dtype=np.float64)
    alias = np.arange(k, dtype=np.int64)
    small = [i for i in range(k) if scaled[i] < 1.0]
    large = [i for i in range(k) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        g = large.pop()
        accept[s] = scaled[s]
        alias[s] = g
        scaled[g] -= 1.0 - scaled[s]
        (small if scaled[g] < 1.0 else large).append(g)
    return accept, alias


def alias_draw(accept: np.ndarray, alias: np.ndarray, rng: np.random.Generator) -> int:
    """Draw one column index using two uniforms."""
    col = int(rng.integers(accept.size))
    if rng.random() < accept[col]:
        return col
    return int(alias[col])


def generate_walks(walk_graph: WalkGraph, config: EmbeddingConfig,
                   seed: int | None = None, vertex_keys=None) -> WalkCorpus:
    """Run walks_per_node walks of walk_length vertices from every vertex.

    deepwalk steps first-order by transition probability; node2vec applies
    the second-order bias (1/p back to the previous vertex, 1 to its
    neighbours, 1/q otherwise) with alias tables memoised per (prev, cur).

    ``vertex_keys`` carries stable vertex identities: substreams are keyed
    by them, candidate lists are enumerated in key order, and walk rows
    are emitted in key order, so a relabelled graph with carried-over keys
    yields exactly the relabelled corpus.
    """
    wg = walk_graph
    n = wg.n
    use_seed = config.seed if seed is None else int(seed)
    if vertex_keys is None:
        keys = np.arange(n, dtype=np.uint64)
    else:
        keys = np.asarray(vertex_keys, dtype=np.uint64)
        if keys.shape != (n,) or np.unique(keys).size != n:
            raise ValueError("vertex_keys must be n distinct integers")

    cand = []
    cprob = []
    for v in range(n):
        order = np.argsort(keys[wg.neighbors[v]], kind="stable")
        cand.append(wg.neighbors[v][order])
        cprob.append(wg.probs[v][order])

    first_tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    second_tables: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    def first_order(v: int):
        table = first_tables.get(v)
        if table is None:
            table = alias_setup(cprob[v])
            first_tables[v] = table
        return table

    def second_order(t: int, v: int):
        table = second_tables.get((t, v))
        if table is None:
            ids = cand[v]
            bias = np.full(ids.size, 1.0 / config.q)
            bias[np.isin(ids, wg.neighbors[t], assume_unique=True)] = 1.0
            bias[ids == t] = 1.0 / config.p
            unnorm = cprob[v] * bias
            table = alias_setup(unnorm / unnorm.sum())
            second_tables[(t, v)] = table
        return table

    r = config.walks_per_node
    length = config.walk_length
    biased = config.method == "node2vec"
    walks = np.empty((n * r, length), dtype=np.int64)
    row = 0
    for start in np.argsort(keys, kind="stable"):
        start = int(start)
        for widx in range(r):
            rng = substream(use_seed, STREAM_WALK, int(keys[start]), widx)
            walk = walks[row]
            walk[0] = start
            prev, cur = -1, start
            for pos in range(1, length):
                if biased and prev >= 0:
                    table = second_order(prev, cur)
                else:
                    table = first_order(cur)
                nxt = int(cand[cur][alias_draw(*table, rng)])
                walk[pos] = nxt
                prev, cur = cur, nxt
            row += 1
    return WalkCorpus(walks=walks, n=n)
