import json

import numpy as np
import pytest

from embmatch import load_embedding, load_graph, read_records_csv
from embmatch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_writes_loadable_graph(tmp_path, capsys):
    path = tmp_path / "adv.txt"
    code, out, _ = run(capsys, "gen", "--generator", "adversarial",
                       "--t", "4", "--out", str(path))
    assert code == 0
    g = load_graph(path)
    assert g.n == 8


def test_gen_lomax_seed_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        code, _, _ = run(capsys, "gen", "--generator", "lomax", "--alpha", "3",
                         "--n", "10", "--seed", "5", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_exact_prints_value_and_pairs(tmp_path, capsys):
    path = tmp_path / "g.txt"
    run(capsys, "gen", "--generator", "adversarial", "--t", "3",
        "--out", str(path))
    code, out, _ = run(capsys, "solve", "--input", str(path),
                       "--objective", "mcm", "--exact")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].startswith("value ")
    assert float(lines[0].split()[1]) == pytest.approx(2.0, rel=1e-4)
    pairs = [tuple(map(int, ln.split())) for ln in lines[1:]]
    assert sorted(v for p in pairs for v in p) == list(range(4))


def test_solve_heuristic_paths(tmp_path, capsys):
    path = tmp_path / "g.txt"
    run(capsys, "gen", "--generator", "uniform", "--n", "10", "--seed", "2",
        "--out", str(path))
    for extra in (["--heuristic", "greedy"],
                  ["--heuristic", "deepwalk", "--epochs", "2",
                   "--walks-per-node", "4", "--walk-length", "6"],
                  ["--heuristic", "node2vec", "--epochs", "2",
                   "--walks-per-node", "4", "--walk-length", "6",
                   "--surrogate-matcher", "greedy"]):
        code, out, _ = run(capsys, "solve", "--input", str(path), *extra)
        assert code == 0
        assert out.startswith("value ")


def test_embed_writes_embedding_file(tmp_path, capsys):
    gpath, epath = tmp_path / "g.txt", tmp_path / "e.txt"
    run(capsys, "gen", "--generator", "adversarial", "--t", "3",
        "--out", str(gpath))
    code, _, _ = run(capsys, "embed", "--input", str(gpath), "--method",
                     "node2vec", "--dimensions", "4", "--epochs", "2",
                     "--out", str(epath))
    assert code == 0
    vectors = load_embedding(epath)
    assert vectors.shape == (4, 4)


def test_bench_flags_and_report_round_trip(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, out, _ = run(capsys, "bench", "--generator", "adversarial",
                       "--objective", "mcm", "--algorithms", "exact,greedy",
                       "--sweep", "t=3,4", "--trials", "2", "--seed", "1",
                       "--no-timings", "--out", str(out_dir),
                       "--format", "csv,svg")
    assert code == 0
    records = read_records_csv(out_dir / "records.csv")
    assert {r.algorithm for r in records} == {"exact", "greedy"}
    assert (out_dir / "plot.svg").exists()

    rep_dir = tmp_path / "rep"
    code, _, _ = run(capsys, "report", "--input", str(out_dir / "records.csv"),
                     "--out", str(rep_dir))
    assert code == 0
    assert read_records_csv(rep_dir / "records.csv") == records


def test_bench_spec_file_with_flag_override(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "generator": "adversarial", "objective": "mcm", "sweep": "t=3",
        "algorithms": ["greedy"], "trials": 2, "seed": 0}))
    out_dir = tmp_path / "run"
    code, _, _ = run(capsys, "bench", "--spec", str(spec_path), "--trials",
                     "3", "--no-timings", "--out", str(out_dir))
    assert code == 0
    records = read_records_csv(out_dir / "records.csv")
    assert len(records) == 3      # the command-line flag wins


def test_bench_spec_file_accepts_comma_separated_algorithms(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "generator": "adversarial", "sweep": "t=3",
        "algorithms": "greedy,exact", "trials": 2, "seed": 0}))
    out_dir = tmp_path / "run"
    code, _, _ = run(capsys, "bench", "--spec", str(spec_path),
                     "--no-timings", "--out", str(out_dir))
    assert code == 0
    records = read_records_csv(out_dir / "records.csv")
    assert {r.algorithm for r in records} == {"greedy", "exact"}


def test_usage_errors_exit_1(tmp_path, capsys):
    bad = [
        ["solve", "--input", "x", "--objective", "nope", "--exact"],
        ["gen", "--generator", "what", "--out", "x"],
        ["bench", "--out", "x"],                         # no generator/sweep
        ["bench", "--generator", "adversarial", "--sweep", "t=",
         "--out", str(tmp_path)],                        # empty grid
        ["bench", "--generator", "adversarial", "--sweep", "alpha=2",
         "--out", str(tmp_path)],                        # incompatible sweep
        ["nonsense"],
    ]
    for argv in bad:
        code, _, err = run(capsys, *argv)
        assert code == 1, argv
        assert err.startswith("error:"), argv


def test_runtime_errors_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "solve", "--input",
                       str(tmp_path / "missing.txt"), "--exact")
    assert code == 2
    assert "error:" in err

    bad_graph = tmp_path / "bad.txt"
    bad_graph.write_text("n 4\n0 9 1.0\n")
    code, _, _ = run(capsys, "embed", "--input", str(bad_graph),
                     "--out", str(tmp_path / "e.txt"))
    assert code == 2


def test_malformed_spec_file_exits_1(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text("{not json")
    code, _, err = run(capsys, "bench", "--spec", str(spec_path),
                       "--out", str(tmp_path / "o"))
    assert code == 1
    spec_path.write_text(json.dumps({"generator": "adversarial",
                                     "sweep": "t=3", "mystery": 1}))
    code, _, err = run(capsys, "bench", "--spec", str(spec_path),
                       "--out", str(tmp_path / "o"))
    assert code == 1
    assert "mystery" in err


def test_console_script_installed():
    import shutil
    import subprocess
    exe = shutil.which("embmatch")
    assert exe is not None
    proc = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "bench" in proc.stdout
