"""Matching solvers for dense weighted graphs, plus an embedding heuristic.

Exact solvers (Hungarian, blossom, bottleneck, uniform, min-deviation),
the greedy baseline, adversarial and random instance generators, a
random-walk + skip-gram embedding stack, the Euclidean-surrogate
matching pipeline, and a seeded benchmark harness with CSV/SVG output.
"""

from .graph import (DenseGraph, Matching, Objective, brute_force_optimum,
                    complete_with_sentinels, evaluate, load_graph, save_graph)
from .generators import (AdversarialInstance, LomaxConfig, gen_adversarial,
                         gen_lomax, gen_uniform_random, lomax_quantile)
from .exact import (SolverReport, blossom_mwpm, bottleneck_matching,
                    hungarian_mcm, max_cardinality_matching,
                    min_deviation_matching, solve, uniform_matching)
from .greedy import (ByIndex, Randomized, TiePolicy, euclidean_graph,
                     euclidean_greedy_match, greedy_match, pairwise_distances)
from .walks import (EmbeddingConfig, WalkCorpus, WalkGraph, alias_draw,
                    alias_setup, build_walk_graph, generate_walks)
from .sgns import (TrainingDivergedError, pair_gradients, pair_loss,
                   train_input_vectors)
from .embedding import (Embedding, RandomWalkEmbedding, embed_graph,
                        load_embedding, save_embedding, train_sgns)
from .pipeline import (EmbeddingMatcher, SurrogateGraph, approx_match,
                       build_surrogate, match_surrogate)
from .bench import (ALGORITHMS, GENERATORS, SWEEPS, ExperimentSpec,
                    SummaryRow, TrialRecord, read_records_csv, render,
                    run_experiment, summarize, write_records_csv,
                    write_summary_csv, write_summary_svg)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "AdversarialInstance", "ByIndex", "DenseGraph", "Embedding",
    "EmbeddingConfig", "EmbeddingMatcher", "ExperimentSpec", "GENERATORS",
    "LomaxConfig", "Matching", "Objective", "RandomWalkEmbedding",
    "Randomized", "SWEEPS", "SolverReport", "SummaryRow", "SurrogateGraph",
    "TiePolicy", "TrainingDivergedError", "TrialRecord", "WalkCorpus",
    "WalkGraph", "alias_draw", "alias_setup", "approx_match",
    "blossom_mwpm", "bottleneck_matching", "brute_force_optimum",
    "build_surrogate", "build_walk_graph", "complete_with_sentinels",
    "embed_graph", "euclidean_graph",
    "euclidean_greedy_match", "evaluate", "gen_adversarial", "gen_lomax",
    "gen_uniform_random", "generate_walks", "greedy_match", "hungarian_mcm",
    "load_embedding", "load_graph", "lomax_quantile",
    "match_surrogate", "max_cardinality_matching", "min_deviation_matching",
    "pair_gradients", "pair_loss", "pairwise_distances", "read_records_csv",
    "render", "run_experiment", "save_embedding", "save_graph", "solve",
    "summarize", "train_input_vectors", "train_sgns", "uniform_matching",
    "write_records_csv", "write_summary_csv", "write_summary_svg",
]
