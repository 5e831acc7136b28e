import numpy as np
import pytest
from scipy.stats import spearmanr
from sklearn.base import clone

from embmatch import (Embedding, EmbeddingConfig, RandomWalkEmbedding,
                      embed_graph, gen_adversarial, load_embedding,
                      save_embedding)

SMALL = EmbeddingConfig(dimensions=6, walks_per_node=8, walk_length=10,
                        epochs=3)


def test_shape_and_finiteness():
    inst = gen_adversarial(4)
    emb = embed_graph(inst.graph, SMALL, seed=0)
    assert emb.vectors.shape == (inst.n, 6)
    assert np.isfinite(emb.vectors).all()
    assert len(emb.epoch_losses) == 3
    assert emb.loss == emb.epoch_losses[-1]


def test_bit_identical_given_seed():
    inst = gen_adversarial(4)
    for method in ("deepwalk", "node2vec"):
        cfg = EmbeddingConfig(dimensions=6, walks_per_node=8, walk_length=10,
                              epochs=3, method=method)
        a = embed_graph(inst.graph, cfg, seed=7)
        b = embed_graph(inst.graph, cfg, seed=7)
        c = embed_graph(inst.graph, cfg, seed=8)
        assert np.array_equal(a.vectors, b.vectors)
        assert not np.array_equal(a.vectors, c.vectors)


@pytest.mark.parametrize("method", ["deepwalk", "node2vec"])
def test_relabeling_equivariance_by_construction(method):
    # relabel the graph, key every substream by original identity, and the
    # embedding rows come back exactly permuted
    inst = gen_adversarial(4)
    cfg = EmbeddingConfig(dimensions=5, walks_per_node=6, walk_length=8,
                          epochs=2, method=method)
    base = embed_graph(inst.graph, cfg, seed=3)

    rng = np.random.default_rng(0)
    perm = rng.permutation(inst.n)
    relabeled = inst.graph.relabel(perm)
    keys = np.empty(inst.n, dtype=np.int64)
    keys[perm] = np.arange(inst.n)       # key of new label = original label
    moved = embed_graph(relabeled, cfg, seed=3, vertex_keys=keys)
    assert np.array_equal(moved.vectors[perm], base.vectors)


def test_adversarial_neighborhoods_survive_embedding():
    inst = gen_adversarial(5)
    x = inst.positions
    iu, ju = np.triu_indices(inst.n, k=1)
    line = np.abs(x[iu] - x[ju])

    unit_hits = 0
    spearman_hits = 0
    for seed in range(5):
        emb = embed_graph(inst.graph, EmbeddingConfig(), seed=seed)
        d = np.linalg.norm(emb.vectors[iu] - emb.vectors[ju], axis=1)
        rho = spearmanr(line, d).statistic
        if rho > 0.3:
            spearman_hits += 1
        near = d[np.isclose(line, 1.0)].mean()
        far = d[line > 0.5 * line.max()].mean()
        if near < far:
            unit_hits += 1
    assert spearman_hits >= 4
    assert unit_hits >= 4


def test_save_load_round_trip(tmp_path):
    inst = gen_adversarial(3)
    emb = embed_graph(inst.graph, SMALL, seed=1)
    path = tmp_path / "emb.txt"
    save_embedding(emb, path)
    loaded = load_embedding(path)
    assert np.array_equal(loaded, emb.vectors)   # repr round-trips exactly
    first = path.read_text().splitlines()[0]
    assert first == f"{inst.n} 6"


def test_load_embedding_rejects_malformed(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("2 2\n0 0.0 0.0\n")
    with pytest.raises(ValueError):
        load_embedding(path)                      # missing vertex line
    path.write_text("2 2\n0 0.0 0.0\n0 1.0 1.0\n")
    with pytest.raises(ValueError):
        load_embedding(path)                      # duplicate index


def test_embedding_rejects_non_finite():
    with pytest.raises(ValueError):
        Embedding(vectors=np.array([[np.nan, 0.0]]), config=SMALL,
                  loss=0.0, epoch_losses=(0.0,))


def test_estimator_interface():
    inst = gen_adversarial(4)
    est = RandomWalkEmbedding(dimensions=5, walks_per_node=6, walk_length=8,
                              epochs=2, seed=11)
    params = est.get_params()
    assert params["dimensions"] == 5 and params["method"] == "deepwalk"

    out = est.fit_transform(inst.graph)
    assert out.shape == (inst.n, 5)
    assert np.array_equal(out, est.transform(inst.graph))
    assert est.loss_ == est.epoch_losses_[-1]

    twin = clone(est).fit(inst.graph)
    assert np.array_equal(twin.vectors_, est.vectors_)

    est.set_params(method="node2vec")
    other = est.fit(inst.graph).vectors_
    assert not np.array_equal(other, out)


def test_estimator_accepts_raw_matrix():
    inst = gen_adversarial(3)
    est = RandomWalkEmbedding(dimensions=4, walks_per_node=4, walk_length=6,
                              epochs=2)
    est.fit(np.asarray(inst.graph.weights))
    assert est.vectors_.shape == (inst.n, 4)
