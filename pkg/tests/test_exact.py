import numpy as np
import pytest

from embmatch import (DenseGraph, Matching, Objective, blossom_mwpm,
                      bottleneck_matching, brute_force_optimum,
                      gen_uniform_random, hungarian_mcm,
                      max_cardinality_matching, min_deviation_matching, solve,
                      uniform_matching)
from embmatch.generators import LomaxConfig, gen_lomax

SOLVERS = {
    Objective.MIN_COST: blossom_mwpm,
    Objective.BOTTLENECK: bottleneck_matching,
    Objective.UNIFORM: uniform_matching,
    Objective.MIN_DEVIATION: min_deviation_matching,
}


def random_graph(n, seed, bipartite=False):
    return gen_uniform_random(n, seed=seed, bipartite=bipartite)


@pytest.mark.parametrize("objective", list(Objective))
def test_solvers_match_oracle_on_random_instances(objective):
    for seed in range(25):
        g = random_graph(8, seed)
        _, want = brute_force_optimum(g, objective)
        got = SOLVERS[objective](g).value
        assert got == pytest.approx(want, abs=1e-12), f"seed {seed}"


@pytest.mark.parametrize("objective", list(Objective))
def test_solve_dispatch_bipartite(objective):
    for seed in range(10):
        g = random_graph(8, seed, bipartite=True)
        _, want = brute_force_optimum(g, objective)
        report = solve(g, objective)
        assert report.value == pytest.approx(want, abs=1e-12)
        # all pairs cross the bipartition
        assert all((i < 4) != (j < 4) for i, j in report.matching.pairs)


def test_solve_accepts_objective_keys():
    g = random_graph(8, seed=4)
    for objective in Objective:
        assert solve(g, objective.value).value == solve(g, objective).value
    with pytest.raises(ValueError, match="unknown objective"):
        solve(g, "shortest")


def test_hungarian_equals_blossom_on_bipartite():
    for seed in range(10):
        g = random_graph(12, seed, bipartite=True)
        assert hungarian_mcm(g).value == pytest.approx(blossom_mwpm(g).value)


def test_hungarian_requires_bipartition():
    with pytest.raises(ValueError):
        hungarian_mcm(random_graph(6, 0))


def test_mcm_scales_linearly():
    g = random_graph(10, 1)
    base = blossom_mwpm(g).value
    scaled = DenseGraph(g.weights * 7.0)
    assert blossom_mwpm(scaled).value == pytest.approx(7.0 * base)


def test_value_invariant_under_relabeling():
    rng = np.random.default_rng(11)
    g = random_graph(10, 4)
    for objective in Objective:
        want = SOLVERS[objective](g).value
        for _ in range(20):
            perm = rng.permutation(10)
            h = g.relabel(perm)
            assert SOLVERS[objective](h).value == pytest.approx(want)


def test_bottleneck_value_is_a_graph_weight():
    g = random_graph(12, 9)
    report = bottleneck_matching(g)
    assert report.value in g.weights
    weights = report.matching.edge_weights(g)
    assert weights.max() == report.value


def test_solutions_are_perfect_matchings():
    g = gen_lomax(LomaxConfig(alpha=2.0, n=14), seed=2)
    for objective in Objective:
        m = SOLVERS[objective](g).matching
        assert m.is_perfect
        assert m.covered() == set(range(14))


def test_max_cardinality_respects_edge_filter():
    g = DenseGraph(np.array([[0.0, 1.0, 5.0, 5.0],
                             [1.0, 0.0, 5.0, 2.0],
                             [5.0, 5.0, 0.0, 3.0],
                             [5.0, 2.0, 3.0, 0.0]]))
    # only weights <= 3 exist: edges 01, 13, 23 -> best is {01, 23}
    m = max_cardinality_matching(g, edge_filter=(0.0, 3.0))
    assert len(m.pairs) == 2
    assert all(g.weights[i, j] <= 3.0 for i, j in m.pairs)
    # tighten to weights <= 1: single edge
    m = max_cardinality_matching(g, edge_filter=(0.0, 1.0))
    assert m.pairs == ((0, 1),)


def test_certification_rejects_corrupted_duals():
    from embmatch import blossom as blossom_mod
    g = random_graph(8, 3)
    maxw = float(g.weights.max())
    inverted = (maxw - g.weights).tolist()
    neighbors = [[w for w in range(8) if w != v] for v in range(8)]
    state = blossom_mod.max_weight_matching(8, neighbors, inverted,
                                            max_cardinality=True)
    blossom_mod.verify_optimum(state, 1e-9 * maxw)   # genuine duals pass
    state.dualvar[0] += 0.5 * maxw                   # corrupt one dual
    with pytest.raises(blossom_mod.CertificationError):
        blossom_mod.verify_optimum(state, 1e-9 * maxw)


def test_solve_rejects_unknown_objective():
    with pytest.raises(ValueError):
        Objective.from_key("nope")
