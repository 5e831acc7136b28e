"""Skip-gram with negative sampling, trained by plain SGD.

The hot loop is a numba kernel over pre-drawn index arrays: per-epoch
shuffles, negative samples, and row initialisers all come from
counter-based substreams, so training is bit-reproducible and the kernel
itself contains no randomness.  ``pair_loss`` / ``pair_gradients`` are
slow numpy twins of the kernel's per-pair math, used as the oracle for
finite-difference checks.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .rng import STREAM_INIT, STREAM_NEGATIVE, STREAM_SHUFFLE, substream
from .walks import EmbeddingConfig, WalkCorpus


class TrainingDivergedError(RuntimeError):
    """Raised when an epoch produces a non-finite loss."""


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def log_sigmoid(x):
    """log(sigmoid(x)) = min(x, 0) - log1p(exp(-|x|)), overflow-safe."""
    x = np.asarray(x, dtype=np.float64)
    out = np.minimum(x, 0.0) - np.log1p(np.exp(-np.abs(x)))
    return out if out.ndim else float(out)


def pair_loss(center_vec, context_vec, negative_vecs) -> float:
    """-log s(c.ctx) - sum -log s(-c.neg): one positive, k negatives."""
    c = np.asarray(center_vec, dtype=np.float64)
    ctx = np.asarray(context_vec, dtype=np.float64)
    negs = np.atleast_2d(np.asarray(negative_vecs, dtype=np.float64))
    loss = -log_sigmoid(float(c @ ctx))
    loss -= log_sigmoid(-(negs @ c)).sum()
    return float(loss)


def pair_gradients(center_vec, context_vec, negative_vecs):
    """Analytic gradients of pair_loss w.r.t. (center, context, negatives)."""
    c = np.asarray(center_vec, dtype=np.float64)
    ctx = np.asarray(context_vec, dtype=np.float64)
    negs = np.atleast_2d(np.asarray(negative_vecs, dtype=np.float64))
    g_pos = sigmoid(float(c @ ctx)) - 1.0
    g_neg = sigmoid(negs @ c)  # one scalar per negative
    d_center = g_pos * ctx + g_neg @ negs
    d_context = g_pos * c
    d_negs = g_neg[:, None] * c[None, :]
    return d_center, d_context, d_negs


@njit(cache=True)
def _sigmoid_scalar(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    ex = math.exp(x)
    return ex / (1.0 + ex)


@njit(cache=True)
def _log_sigmoid_scalar(x):
    if x >= 0.0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


@njit(cache=True)
def _run_epoch(win, wout, centers, contexts, negatives, lrs):
    """One SGD pass; returns the summed pair loss.

    Per pair: gradient w.r.t. the center row is accumulated while each
    output row (context, then every negative) is updated immediately with
    the pre-update center row; the center row is updated last.
    """
    total = 0.0
    d = win.shape[1]
    k = negatives.shape[1]
    grad = np.empty(d, dtype=np.float64)
    for idx in range(centers.shape[0]):
        c = centers[idx]
        ctx = contexts[idx]
        lr = lrs[idx]
        dot = 0.0
        for a in range(d):
            dot += win[c, a] * wout[ctx, a]
        g = _sigmoid_scalar(dot) - 1.0
        loss = -_log_sigmoid_scalar(dot)
        for a in range(d):
            grad[a] = g * wout[ctx, a]
            wout[ctx, a] -= lr * g * win[c, a]
        for nn in range(k):
            neg = negatives[idx, nn]
            dot = 0.0
            for a in range(d):
                dot += win[c, a] * wout[neg, a]
            g = _sigmoid_scalar(dot)
            loss -= _log_sigmoid_scalar(-dot)
            for a in range(d):
                grad[a] += g * wout[neg, a]
                wout[neg, a] -= lr * g * win[c, a]
        for a in range(d):
            win[c, a] -= lr * grad[a]
        total += loss
    return total


def _context_pattern(length: int, window: int):
    pat_i = []
    pat_j = []
    for i in range(length):
        for j in range(max(0, i - window), min(length, i + window + 1)):
            if j != i:
                pat_i.append(i)
                pat_j.append(j)
    return pat_i, pat_j


def _vertex_keys(n: int, vertex_keys) -> np.ndarray:
    if vertex_keys is None:
        return np.arange(n, dtype=np.uint64)
    keys = np.asarray(vertex_keys, dtype=np.uint64)
    if keys.shape != (n,) or np.unique(keys).size != n:
        raise ValueError("vertex_keys must be n distinct integers")
    return keys


def train_input_vectors(corpus: WalkCorpus, config: EmbeddingConfig,
                        seed: int | None = None, vertex_keys=None):
    """Fit the two parameter matrices; returns (input matrix, epoch mean losses).

    Input rows start uniform in [-0.5/d, 0.5/d] from per-vertex substreams,
    output rows start at zero.  Negatives come from the corpus unigram
    distribution raised to 3/4, inverted by searchsorted on its cumulative
    table.  The table, the initial rows, and the walk order are all keyed
    by vertex identity, so training commutes with relabelling.
    """
    n = corpus.n
    d = config.dimensions
    use_seed = config.seed if seed is None else int(seed)
    keys = _vertex_keys(n, vertex_keys)
    key_order = np.argsort(keys, kind="stable").astype(np.int64)

    win = np.empty((n, d), dtype=np.float64)
    for v in range(n):
        win[v] = substream(use_seed, STREAM_INIT, int(keys[v])).uniform(
            -0.5 / d, 0.5 / d, d)
    wout = np.zeros((n, d), dtype=np.float64)

    pat_i, pat_j = _context_pattern(corpus.length, config.window)
    centers_all = corpus.walks[:, pat_i].reshape(-1)
    contexts_all = corpus.walks[:, pat_j].reshape(-1)
    pairs = centers_all.shape[0]
    if pairs == 0:
        return win, [0.0] * config.epochs

    freq = np.bincount(corpus.walks.reshape(-1), minlength=n).astype(np.float64)
    cum = np.cumsum(freq[key_order] ** 0.75)
    cum /= cum[-1]

    total_steps = config.epochs * pairs
    lr_all = np.linspace(config.learning_rate, config.final_learning_rate, total_steps)

    epoch_losses = []
    for epoch in range(config.epochs):
        perm = substream(use_seed, STREAM_SHUFFLE, epoch).permutation(pairs)
        centers = np.ascontiguousarray(centers_all[perm])
        contexts = np.ascontiguousarray(contexts_all[perm])
        u = substream(use_seed, STREAM_NEGATIVE, epoch).random((pairs, config.negatives))
        negatives = key_order[np.searchsorted(cum, u, side="right")]
        negatives = np.ascontiguousarray(negatives)
        lrs = np.ascontiguousarray(lr_all[epoch * pairs:(epoch + 1) * pairs])
        total = _run_epoch(win, wout, centers, contexts, negatives, lrs)
        mean_loss = total / pairs
        if not math.isfinite(mean_loss):
            raise TrainingDivergedError(
                f"divergence: non-finite loss in epoch {epoch} "
                f"(learning rate {config.learning_rate} too high?)")
        epoch_losses.append(mean_loss)
    return win, epoch_losses
