import numpy as np
import pytest
from scipy import stats

from embmatch import (EmbeddingConfig, ExperimentSpec, SummaryRow,
                      read_records_csv, render, run_experiment, summarize,
                      write_records_csv)
from embmatch.bench import CSV_COLUMNS, SUMMARY_COLUMNS

TINY = EmbeddingConfig(dimensions=4, walks_per_node=4, walk_length=6, epochs=2)


def adversarial_spec(**overrides):
    base = dict(name="adv", generator="adversarial", objective="mcm",
                algorithms=("greedy",), sweep="t", grid=(3.0, 4.0, 5.0),
                trials=2, seed=0, embedding=TINY)
    base.update(overrides)
    return ExperimentSpec(**base)


def test_spec_validation():
    with pytest.raises(ValueError):
        adversarial_spec(trials=1)
    with pytest.raises(ValueError):
        adversarial_spec(grid=())
    with pytest.raises(ValueError):
        adversarial_spec(algorithms=("simplex",))
    with pytest.raises(ValueError):
        adversarial_spec(generator="lomax")          # t sweep needs adversarial
    with pytest.raises(ValueError):
        adversarial_spec(sweep="alpha")              # alpha sweep needs lomax
    with pytest.raises(ValueError):
        adversarial_spec(sweep="n")                  # adversarial sized by t


def test_exact_algorithm_ratio_is_one():
    spec = adversarial_spec(algorithms=("exact",), grid=(3.0, 4.0))
    records = run_experiment(spec, timings=False)
    assert len(records) == 4
    assert all(r.ratio == 1.0 and r.error is None for r in records)


def test_greedy_t_sweep_reproduces_closed_form():
    spec = adversarial_spec(grid=(3.0, 4.0, 5.0))
    records = run_experiment(spec, timings=False)
    for r in records:
        want = 2 * 1.5 ** (r.sweep_value - 2) - 1
        assert r.ratio == pytest.approx(want, rel=1e-4)


def test_adversarial_cells_identical_across_trials():
    # the adversarial instance ignores the trial seed by construction
    spec = adversarial_spec(trials=3, grid=(4.0,))
    values = {r.value for r in run_experiment(spec, timings=False)}
    assert len(values) == 1


def test_summary_of_constant_cell_has_zero_width():
    rows = summarize(run_experiment(adversarial_spec(grid=(3.0,)),
                                    timings=False))
    assert len(rows) == 1
    assert rows[0].metric == "ratio"
    assert rows[0].half_width == 0.0
    assert rows[0].lo == rows[0].hi == rows[0].mean


def test_student_t_half_width_two_samples():
    # ratios {1, 3}: mean 2, s = sqrt(2), half-width = t(.975, 1) * s / sqrt(2)
    spec = adversarial_spec(grid=(3.0,), algorithms=("exact",))
    records = run_experiment(spec, timings=False)
    doctored = [r.__class__(**{**r.__dict__, "ratio": v})
                for r, v in zip(records, (1.0, 3.0))]
    row = summarize(doctored)[0]
    assert row.mean == pytest.approx(2.0)
    assert row.half_width == pytest.approx(12.706, rel=1e-3)


def test_student_t_half_width_five_trials():
    spec = ExperimentSpec(name="u", generator="uniform", objective="mcm",
                          algorithms=("greedy",), sweep="n", grid=(12.0,),
                          trials=5, seed=1, embedding=TINY)
    records = run_experiment(spec, timings=False)
    row = summarize(records)[0]
    ratios = np.array([r.ratio for r in records])
    s = ratios.std(ddof=1)
    crit = stats.t.ppf(0.975, 4)
    assert crit == pytest.approx(2.776, rel=1e-3)
    assert row.half_width == pytest.approx(crit * s / np.sqrt(5))
    assert row.lo == pytest.approx(row.mean - row.half_width)
    assert row.hi == pytest.approx(row.mean + row.half_width)


def test_zero_optimum_reports_differences():
    # adversarial t=2 is a single pair, so the UM optimum is exactly 0
    spec = adversarial_spec(objective="um", grid=(2.0,))
    records = run_experiment(spec, timings=False)
    assert all(r.optimal == 0.0 and r.ratio is None for r in records)
    row = summarize(records)[0]
    assert row.metric == "difference"
    assert row.mean == pytest.approx(records[0].difference)


def test_single_record_cell_rejected_by_summarize():
    records = run_experiment(adversarial_spec(grid=(3.0,)), timings=False)
    with pytest.raises(ValueError):
        summarize(records[:1])


def test_seed_derivation_differs_per_trial_and_cell():
    records = run_experiment(adversarial_spec(), timings=False)
    seeds = {r.seed for r in records}
    assert len(seeds) == len(records)     # one algorithm: all distinct


def test_csv_round_trip_exact(tmp_path):
    spec = adversarial_spec(algorithms=("greedy", "deepwalk"), grid=(3.0, 4.0))
    records = run_experiment(spec, timings=False)
    path = tmp_path / "records.csv"
    write_records_csv(records, path)
    again = read_records_csv(path)
    assert again == records
    header = path.read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)


def test_byte_identity_across_worker_counts(tmp_path):
    spec = adversarial_spec(algorithms=("greedy", "node2vec"), grid=(3.0, 4.0))
    blobs = []
    for workers in (1, 2, 8):
        records = run_experiment(spec, workers=workers, timings=False)
        path = tmp_path / f"w{workers}.csv"
        write_records_csv(records, path)
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]


def test_timings_do_not_change_results(tmp_path):
    spec = adversarial_spec(grid=(3.0,))
    timed = run_experiment(spec, timings=True)
    bare = run_experiment(spec, timings=False)
    for a, b in zip(timed, bare):
        assert (a.value, a.optimal, a.ratio, a.seed) == \
               (b.value, b.optimal, b.ratio, b.seed)
        assert a.solve_ms >= 0.0 and b.solve_ms == 0.0


def test_per_trial_errors_recorded_and_run_continues():
    diverging = EmbeddingConfig(dimensions=4, walks_per_node=4, walk_length=6,
                                epochs=2, learning_rate=1e12,
                                final_learning_rate=1e12)
    spec = adversarial_spec(algorithms=("greedy", "deepwalk"), grid=(4.0,),
                            embedding=diverging)
    with pytest.warns(UserWarning, match="failed"):
        records = run_experiment(spec, timings=False)
    by_algo = {r.algorithm: r for r in records}
    assert by_algo["greedy"].error is None
    assert "divergence" in by_algo["deepwalk"].error
    assert by_algo["deepwalk"].value is None


def test_render_writes_requested_formats(tmp_path):
    spec = adversarial_spec(algorithms=("greedy", "exact"), grid=(3.0, 4.0))
    records = run_experiment(spec, timings=False)
    paths = render(records, tmp_path / "out", formats=("csv", "svg"),
                   title="adv")
    names = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert names == ["plot.svg", "records.csv", "summary.csv"]
    svg = (tmp_path / "out" / "plot.svg").read_text()
    assert svg.startswith("<svg")
    assert "greedy" in svg and "polyline" in svg
    summary_header = (tmp_path / "out" / "summary.csv").read_text().splitlines()[0]
    assert summary_header == ",".join(SUMMARY_COLUMNS)
    assert len(paths) == 3


def test_summary_rows_are_summary_row_instances():
    records = run_experiment(adversarial_spec(grid=(3.0,)), timings=False)
    row = summarize(records)[0]
    assert isinstance(row, SummaryRow)
    assert row.trials == 2
