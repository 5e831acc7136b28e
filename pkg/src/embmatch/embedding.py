"""Vertex embeddings: walk corpus -> skip-gram training -> n x d matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .graph import DenseGraph
from .sgns import train_input_vectors
from .validation import check_fitted
from .walks import EmbeddingConfig, WalkCorpus, build_walk_graph, generate_walks


@dataclass(frozen=True)
class Embedding:
    """Map from vertex index to a row of ``vectors``."""

    vectors: np.ndarray  # (n, dimensions) float64
    config: EmbeddingConfig
    loss: float
    epoch_losses: tuple

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"vectors must be 2-D, got ndim={v.ndim}")
        if not np.all(np.isfinite(v)):
            raise ValueError("embedding contains non-finite entries")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "epoch_losses", tuple(float(x) for x in self.epoch_losses))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dimensions(self) -> int:
        return self.vectors.shape[1]


def train_sgns(corpus: WalkCorpus, config: EmbeddingConfig,
               seed: int | None = None, vertex_keys=None) -> Embedding:
    """Train on the corpus and return the input-vector matrix as the embedding."""
    vectors, epoch_losses = train_input_vectors(corpus, config, seed, vertex_keys)
    return Embedding(vectors=vectors, config=config,
                     loss=float(epoch_losses[-1]), epoch_losses=tuple(epoch_losses))


def embed_graph(graph: DenseGraph, config: EmbeddingConfig,
                seed: int | None = None, vertex_keys=None) -> Embedding:
    """build_walk_graph -> generate_walks -> train_sgns, one seed for all stages."""
    walk_graph = build_walk_graph(graph, config)
    corpus = generate_walks(walk_graph, config, seed=seed, vertex_keys=vertex_keys)
    return train_sgns(corpus, config, seed=seed, vertex_keys=vertex_keys)


def save_embedding(embedding: Embedding, path) -> None:
    """Text format: header ``n d``, then one ``index v_1 ... v_d`` line per vertex."""
    lines = [f"{embedding.n} {embedding.dimensions}"]
    for i in range(embedding.n):
        coords = " ".join(repr(float(x)) for x in embedding.vectors[i])
        lines.append(f"{i} {coords}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_embedding(path) -> np.ndarray:
    """Read the vector matrix back from :func:`save_embedding` output."""
    with open(path, "r", encoding="ascii") as fh:
        raw = [line.strip() for line in fh]
    rows = [line for line in raw if line and not line.startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty embedding file")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError(f"{path}: header must be 'n d', got {rows[0]!r}")
    n, d = int(head[0]), int(head[1])
    if len(rows) - 1 != n:
        raise ValueError(f"{path}: expected {n} vertex lines, found {len(rows) - 1}")
    vectors = np.empty((n, d), dtype=np.float64)
    seen = np.zeros(n, dtype=bool)
    for line in rows[1:]:
        parts = line.split()
        if len(parts) != d + 1:
            raise ValueError(f"{path}: bad vertex line {line!r}")
        idx = int(parts[0])
        if not 0 <= idx < n or seen[idx]:
            raise ValueError(f"{path}: bad or repeated vertex index {idx}")
        seen[idx] = True
        vectors[idx] = [float(x) for x in parts[1:]]
    return vectors


class RandomWalkEmbedding(BaseEstimator, TransformerMixin):
    """Estimator wrapper around :func:`embed_graph`.

    ``fit`` takes a :class:`DenseGraph` (or a raw symmetric weight matrix)
    and learns vectors for exactly those vertices; ``transform`` returns
    the learned matrix, so it only applies to the fitted graph.
    """

    def __init__(self, dimensions=10, walks_per_node=20, walk_length=20,
                 window=5, negatives=5, epochs=5, learning_rate=0.025,
                 final_learning_rate=1e-4, method="deepwalk", p=0.5, q=2.0,
                 similarity="inverse", knn_sparsify=10, seed=0):
        self.dimensions = dimensions
        self.walks_per_node = walks_per_node
        self.walk_length = walk_length
        self.window = window
        self.negatives = negatives
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.final_learning_rate = final_learning_rate
        self.method = method
        self.p = p
        self.q = q
        self.similarity = similarity
        self.knn_sparsify = knn_sparsify
        self.seed = seed

    def _config(self) -> EmbeddingConfig:
        return EmbeddingConfig(
            dimensions=self.dimensions, walks_per_node=self.walks_per_node,
            walk_length=self.walk_length, window=self.window,
            negatives=self.negatives, epochs=self.epochs,
            learning_rate=self.learning_rate,
            final_learning_rate=self.final_learning_rate, method=self.method,
            p=self.p, q=self.q, similarity=self.similarity,
            knn_sparsify=self.knn_sparsify, seed=self.seed)

    def fit(self, X, y=None):
        graph = X if isinstance(X, DenseGraph) else DenseGraph(np.asarray(X))
        result = embed_graph(graph, self._config())
        self.embedding_ = result
        self.vectors_ = result.vectors
        self.loss_ = result.loss
        self.epoch_losses_ = result.epoch_losses
        return self

    def transform(self, X=None):
        check_fitted(self, "vectors_")
        return self.vectors_

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)
