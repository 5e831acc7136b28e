import numpy as np
import pytest

from embmatch import (DenseGraph, Matching, Objective, brute_force_optimum,
                      complete_with_sentinels, evaluate, load_graph, save_graph)


def square(entries):
    return np.array(entries, dtype=float)


def test_sentinel_completion():
    g = complete_with_sentinels([(0, 1, 2.0), (2, 3, 5.0)], 4)
    # sentinel = 10 * n * max listed weight
    assert g.weights[0, 2] == 10 * 4 * 5.0
    assert g.sentinel_mask[0, 2] and not g.sentinel_mask[0, 1]
    assert g.weights[1, 0] == 2.0
    assert np.all(np.diag(g.weights) == 0.0)


def test_completion_rejects_bad_edges():
    with pytest.raises(ValueError):
        complete_with_sentinels([(0, 0, 1.0)], 4)            # self loop
    with pytest.raises(ValueError):
        complete_with_sentinels([(0, 5, 1.0)], 4)            # out of range
    with pytest.raises(ValueError):
        complete_with_sentinels([(0, 1, 1.0), (1, 0, 2.0)], 4)  # contradiction
    with pytest.raises(ValueError):
        complete_with_sentinels([(0, 1, 1.0)], 4, bipartite=True)  # same side


def test_weight_matrix_validation():
    with pytest.raises(ValueError):
        DenseGraph(square([[0, 1], [2, 0]]))               # asymmetric
    with pytest.raises(ValueError):
        DenseGraph(square([[0, -1], [-1, 0]]))             # negative
    with pytest.raises(ValueError):
        DenseGraph(square([[0, np.inf], [np.inf, 0]]))     # non-finite
    with pytest.raises(ValueError):
        DenseGraph(np.zeros((3, 3)))                       # odd n


def test_matching_validation():
    with pytest.raises(ValueError):
        Matching(((0, 1), (1, 2)), 4)     # vertex 1 twice
    m = Matching(((2, 3), (1, 0)), 4)
    assert m.pairs == ((0, 1), (2, 3))    # canonical order
    assert m.is_perfect
    assert not Matching(((0, 1),), 4).is_perfect


def test_evaluate_objectives():
    g = DenseGraph(square([[0, 1, 2, 3],
                           [1, 0, 4, 5],
                           [2, 4, 0, 6],
                           [3, 5, 6, 0]]))
    m = Matching(((0, 1), (2, 3)), 4)     # weights 1 and 6
    assert evaluate(g, m, Objective.MIN_COST) == 7.0
    assert evaluate(g, m, Objective.BOTTLENECK) == 6.0
    assert evaluate(g, m, Objective.UNIFORM) == 5.0
    # mean term divides by the vertex count, not the pair count
    assert evaluate(g, m, Objective.MIN_DEVIATION) == pytest.approx(7 / 4 - 1)
    with pytest.raises(ValueError):
        evaluate(g, Matching(((0, 1),), 4), Objective.MIN_COST)


def test_brute_force_optimum_enumerates_all_pairings():
    g = DenseGraph(square([[0, 1, 2, 3],
                           [1, 0, 4, 5],
                           [2, 4, 0, 6],
                           [3, 5, 6, 0]]))
    # pairings: {01,23}=7, {02,13}=7, {03,12}=7 for MCM; bottlenecks 6,5,4
    matching, value = brute_force_optimum(g, Objective.MIN_COST)
    assert value == 7.0
    matching, value = brute_force_optimum(g, Objective.BOTTLENECK)
    assert value == 4.0
    assert matching.pairs == ((0, 3), (1, 2))


def test_brute_force_bipartite_stays_cross_side():
    g = complete_with_sentinels([(0, 2, 1.0), (0, 3, 2.0),
                                 (1, 2, 3.0), (1, 3, 4.0)], 4, bipartite=True)
    matching, value = brute_force_optimum(g, Objective.MIN_COST)
    assert value == 5.0
    assert matching.pairs == ((0, 2), (1, 3))


def test_brute_force_size_limit():
    g = DenseGraph(np.zeros((18, 18)))
    with pytest.raises(ValueError):
        brute_force_optimum(g, Objective.MIN_COST)


def test_relabel_permutes_weights():
    rng = np.random.default_rng(5)
    w = rng.random((6, 6))
    w = np.triu(w, 1) + np.triu(w, 1).T
    g = DenseGraph(w)
    perm = np.array([3, 0, 5, 1, 2, 4])
    h = g.relabel(perm)
    for i in range(6):
        for j in range(6):
            assert h.weights[perm[i], perm[j]] == g.weights[i, j]


def test_save_load_round_trip(tmp_path):
    g = complete_with_sentinels([(0, 1, 0.125), (2, 3, 7.25), (4, 5, 1e-9)], 6)
    path = tmp_path / "g.txt"
    save_graph(g, path)
    h = load_graph(path)
    assert np.array_equal(g.weights, h.weights)
    assert np.array_equal(g.sentinel_mask, h.sentinel_mask)
    assert g.bipartite == h.bipartite


def test_load_rejects_out_of_range_edge(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("n 4\n0 1 1.0\n0 9 2.0\n")
    with pytest.raises(ValueError):
        load_graph(path)
