"""Benchmark harness: seeded sweeps, ratio statistics, CSV and SVG artifacts.

Every trial's randomness is derived from (master seed, cell index, trial
index) and, inside a trial, per-algorithm substreams, so results do not
depend on execution order or worker count.  Records are assembled in
canonical (cell, trial, algorithm) order before rendering.
"""

from __future__ import annotations

import csv
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np
from scipy import stats

from .embedding import embed_graph
from .exact import solve
from .generators import LomaxConfig, gen_adversarial, gen_lomax, gen_uniform_random
from .graph import DenseGraph, Objective, evaluate
from .greedy import greedy_match
from .pipeline import build_surrogate, match_surrogate
from .rng import STREAM_ALGORITHM, STREAM_TRIAL, mix64
from .walks import EmbeddingConfig

ALGORITHMS = ("exact", "greedy", "deepwalk", "node2vec")
GENERATORS = ("adversarial", "lomax", "uniform")
SWEEPS = ("t", "n", "alpha", "walks_per_node", "walk_length", "dimensions")

_EMBED_SWEEPS = ("walks_per_node", "walk_length", "dimensions")


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: a generator, an objective, algorithms, and a value grid."""

    name: str
    generator: str
    objective: str
    algorithms: tuple
    sweep: str
    grid: tuple
    trials: int = 5
    seed: int = 0
    n: int = 100
    t: int = 6
    alpha: float = 2.0
    epsilon: float = 1e-6
    bipartite: bool = False
    matcher: str = "exact_on_surrogate"
    embedding: EmbeddingConfig = EmbeddingConfig()

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        Objective.from_key(self.objective)
        algos = tuple(self.algorithms)
        if not algos:
            raise ValueError("algorithm list is empty")
        for a in algos:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")
        object.__setattr__(self, "algorithms", algos)
        if self.sweep not in SWEEPS:
            raise ValueError(f"unknown sweep variable {self.sweep!r}")
        grid = tuple(self.grid)
        if not grid:
            raise ValueError("sweep grid is empty")
        object.__setattr__(self, "grid", grid)
        if self.trials < 2:
            raise ValueError("need at least 2 trials per cell for a confidence interval")
        if self.sweep == "t" and self.generator != "adversarial":
            raise ValueError("sweeping t requires the adversarial generator")
        if self.sweep == "alpha" and self.generator != "lomax":
            raise ValueError("sweeping alpha requires the lomax generator")
        if self.sweep == "n" and self.generator == "adversarial":
            raise ValueError("the adversarial generator is sized by t, not n")


@dataclass(frozen=True)
class TrialRecord:
    """One (cell, trial, algorithm) outcome; column order is the field order."""

    experiment: str
    generator: str
    sweep_value: float
    objective: str
    algorithm: str
    trial: int
    seed: int
    value: float | None
    optimal: float | None
    ratio: float | None       # None when the optimum is 0 or the trial failed
    difference: float | None  # value - optimal
    embed_ms: float
    solve_ms: float
    error: str | None


CSV_COLUMNS = tuple(f.name for f in fields(TrialRecord))


@dataclass(frozen=True)
class SummaryRow:
    """Per (cell, algorithm) mean and 95% Student-t confidence interval."""

    experiment: str
    generator: str
    objective: str
    algorithm: str
    sweep_value: float
    trials: int
    metric: str  # "ratio", or "difference" when any optimum in the cell is 0
    mean: float
    half_width: float
    lo: float
    hi: float


SUMMARY_COLUMNS = tuple(f.name for f in fields(SummaryRow))


def _generator_descriptor(spec: ExperimentSpec) -> str:
    if spec.generator == "adversarial":
        return f"adversarial(epsilon={spec.epsilon!r})"
    side = ",bipartite" if spec.bipartite else ""
    if spec.generator == "lomax":
        alpha = "sweep" if spec.sweep == "alpha" else repr(spec.alpha)
        n = "sweep" if spec.sweep == "n" else spec.n
        return f"lomax(alpha={alpha},n={n}{side})"
    n = "sweep" if spec.sweep == "n" else spec.n
    return f"uniform(n={n}{side})"


def _make_instance(spec: ExperimentSpec, sweep_value, instance_seed: int) -> DenseGraph:
    t = int(sweep_value) if spec.sweep == "t" else spec.t
    n = int(sweep_value) if spec.sweep == "n" else spec.n
    alpha = float(sweep_value) if spec.sweep == "alpha" else spec.alpha
    if spec.generator == "adversarial":
        return gen_adversarial(t, spec.epsilon).graph
    if spec.generator == "lomax":
        return gen_lomax(LomaxConfig(alpha=alpha, n=n, bipartite=spec.bipartite),
                         seed=instance_seed)
    return gen_uniform_random(n, seed=instance_seed, bipartite=spec.bipartite)


def _cell_config(spec: ExperimentSpec, sweep_value) -> EmbeddingConfig:
    if spec.sweep in _EMBED_SWEEPS:
        return replace(spec.embedding, **{spec.sweep: int(sweep_value)})
    return spec.embedding


def _error_record(spec, sweep_value, algo, trial, seed, message) -> TrialRecord:
    return TrialRecord(
        experiment=spec.name, generator=_generator_descriptor(spec),
        sweep_value=float(sweep_value), objective=spec.objective, algorithm=algo,
        trial=trial, seed=seed, value=None, optimal=None, ratio=None,
        difference=None, embed_ms=0.0, solve_ms=0.0, error=message)


def _run_trial(spec: ExperimentSpec, cell_idx: int, trial_idx: int,
               timings: bool) -> list:
    sweep_value = spec.grid[cell_idx]
    instance_seed = mix64(spec.seed, STREAM_TRIAL, cell_idx, trial_idx)
    objective = Objective.from_key(spec.objective)
    clock = time.perf_counter if timings else (lambda: 0.0)
    try:
        graph = _make_instance(spec, sweep_value, instance_seed)
        config = _cell_config(spec, sweep_value)
        start = clock()
        optimal = solve(graph, objective).value
        optimal_ms = (clock() - start) * 1e3
    except Exception as exc:
        return [_error_record(spec, sweep_value, algo, trial_idx, instance_seed,
                              f"instance/optimum stage: {exc}")
                for algo in spec.algorithms]

    records = []
    for algo in spec.algorithms:
        embed_ms = 0.0
        try:
            if algo == "exact":
                value, solve_ms = optimal, optimal_ms
            elif algo == "greedy":
                start = clock()
                value = greedy_match(graph, objective=objective).value
                solve_ms = (clock() - start) * 1e3
            else:
                algo_seed = mix64(instance_seed, STREAM_ALGORITHM, ALGORITHMS.index(algo))
                algo_config = replace(config, method=algo)
                start = clock()
                emb = embed_graph(graph, algo_config, seed=algo_seed)
                embed_ms = (clock() - start) * 1e3
                start = clock()
                surrogate = build_surrogate(emb, bipartite=graph.bipartite)
                matching = match_surrogate(surrogate, objective, spec.matcher)
                value = evaluate(graph, matching, objective)
                solve_ms = (clock() - start) * 1e3
            ratio = value / optimal if optimal != 0 else None
            records.append(TrialRecord(
                experiment=spec.name, generator=_generator_descriptor(spec),
                sweep_value=float(sweep_value), objective=spec.objective,
                algorithm=algo, trial=trial_idx, seed=instance_seed, value=value,
                optimal=optimal, ratio=ratio, difference=value - optimal,
                embed_ms=embed_ms, solve_ms=solve_ms, error=None))
        except Exception as exc:
            records.append(_error_record(spec, sweep_value, algo, trial_idx,
                                         instance_seed, str(exc)))
    return records


def run_experiment(spec: ExperimentSpec, workers: int = 1,
                   timings: bool = True) -> list:
    """All (cell, trial, algorithm) records, in canonical order.

    Per-trial failures land in the record's error column and the run
    continues; a cell whose every record failed additionally raises a
    warning.  Worker count affects scheduling only, never content.
    """
    tasks = [(ci, ti) for ci in range(len(spec.grid)) for ti in range(spec.trials)]
    if workers <= 1:
        chunks = {task: _run_trial(spec, *task, timings) for task in tasks}
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {task: pool.submit(_run_trial, spec, *task, timings)
                       for task in tasks}
            chunks = {task: fut.result() for task, fut in futures.items()}
    records = []
    for ci in range(len(spec.grid)):
        cell_records = []
        for ti in range(spec.trials):
            cell_records.extend(chunks[(ci, ti)])
        for algo in spec.algorithms:
            series = [r for r in cell_records if r.algorithm == algo]
            if series and all(r.error is not None for r in series):
                warnings.warn(f"cell {spec.sweep}={spec.grid[ci]}: "
                              f"every {algo} trial failed", stacklevel=2)
        records.extend(cell_records)
    return records


def summarize(records) -> list:
    """Mean and 95% CI per (sweep value, algorithm), Student-t critical values.

    Cells where some optimum is 0 fall back from ratios to raw
    value-optimum differences for every trial in the cell.
    """
    groups: dict[tuple, list] = {}
    order = []
    for rec in records:
        key = (rec.experiment, rec.generator, rec.objective,
               rec.sweep_value, rec.algorithm)
        if key not in groups:
            groups[key] = []
            order.append(key)
        if rec.error is None:
            groups[key].append(rec)
    rows = []
    for key in order:
        experiment, generator, objective, sweep_value, algorithm = key
        cell = groups[key]
        if len(cell) < 2:
            raise ValueError(
                f"cell {sweep_value}/{algorithm}: {len(cell)} valid trials; "
                "a confidence interval needs at least 2")
        metric = "ratio" if all(r.ratio is not None for r in cell) else "difference"
        values = np.array([r.ratio if metric == "ratio" else r.difference
                           for r in cell], dtype=np.float64)
        k = values.size
        mean = float(values.mean())
        sd = float(values.std(ddof=1))
        half = float(stats.t.ppf(0.975, k - 1) * sd / math.sqrt(k))
        rows.append(SummaryRow(
            experiment=experiment, generator=generator, objective=objective,
            algorithm=algorithm, sweep_value=sweep_value, trials=k, metric=metric,
            mean=mean, half_width=half, lo=mean - half, hi=mean + half))
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow([_format_cell(getattr(rec, col)) for col in CSV_COLUMNS])


def read_records_csv(path) -> list:
    """Inverse of :func:`write_records_csv`."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        records = []
        for row in reader:
            vals = dict(zip(CSV_COLUMNS, row))
            records.append(TrialRecord(
                experiment=vals["experiment"], generator=vals["generator"],
                sweep_value=float(vals["sweep_value"]), objective=vals["objective"],
                algorithm=vals["algorithm"], trial=int(vals["trial"]),
                seed=int(vals["seed"]),
                value=float(vals["value"]) if vals["value"] else None,
                optimal=float(vals["optimal"]) if vals["optimal"] else None,
                ratio=float(vals["ratio"]) if vals["ratio"] else None,
                difference=float(vals["difference"]) if vals["difference"] else None,
                embed_ms=float(vals["embed_ms"]), solve_ms=float(vals["solve_ms"]),
                error=vals["error"] if vals["error"] else None))
    return records


def write_summary_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow([_format_cell(getattr(row, col)) for col in SUMMARY_COLUMNS])


_PALETTE = {"exact": "#555555", "greedy": "#d62728",
            "deepwalk": "#1f77b4", "node2vec": "#2ca02c"}


def _svg_color(algorithm: str) -> str:
    return _PALETTE.get(algorithm, "#9467bd")


def write_summary_svg(rows, path, title="") -> None:
    """Static line plot: x = sweep value, y = cell mean, whiskers = 95% CI."""
    if not rows:
        raise ValueError("nothing to plot")
    width, height = 640, 420
    left, right, top, bottom = 70, 480, 50, 360
    xs = sorted({row.sweep_value for row in rows})
    algos = []
    for row in rows:
        if row.algorithm not in algos:
            algos.append(row.algorithm)
    ymin = min(row.lo for row in rows)
    ymax = max(row.hi for row in rows)
    pad = (ymax - ymin) * 0.08 or max(abs(ymax), 1.0) * 0.05
    ymin, ymax = ymin - pad, ymax + pad
    xmin, xmax = min(xs), max(xs)
    xspan = (xmax - xmin) or 1.0

    def px(x):
        return left + (x - xmin) / xspan * (right - left)

    def py(y):
        return bottom - (y - ymin) / (ymax - ymin) * (bottom - top)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{(left + right) / 2:.1f}" y="24" text-anchor="middle" '
           f'font-size="14">{title}</text>']
    # axes and ticks
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" '
               'stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" '
               'stroke="black"/>')
    for x in xs:
        out.append(f'<line x1="{px(x):.2f}" y1="{bottom}" x2="{px(x):.2f}" '
                   f'y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{px(x):.2f}" y="{bottom + 20}" text-anchor="middle">'
                   f'{x:g}</text>')
    for i in range(5):
        y = ymin + (ymax - ymin) * i / 4
        out.append(f'<line x1="{left - 5}" y1="{py(y):.2f}" x2="{left}" '
                   f'y2="{py(y):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py(y) + 4:.2f}" text-anchor="end">'
                   f'{y:.3g}</text>')
    metrics = sorted({row.metric for row in rows})
    out.append(f'<text x="20" y="{(top + bottom) / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {(top + bottom) / 2:.1f})">'
               f'{"/".join(metrics)}</text>')
    # one series per algorithm, with CI whiskers
    for algo in algos:
        series = sorted((r.sweep_value, r.mean, r.lo, r.hi)
                        for r in rows if r.algorithm == algo)
        color = _svg_color(algo)
        points = " ".join(f"{px(x):.2f},{py(m):.2f}" for x, m, _, _ in series)
        out.append(f'<polyline points="{points}" fill="none" stroke="{color}" '
                   'stroke-width="1.8"/>')
        for x, m, lo, hi in series:
            out.append(f'<line x1="{px(x):.2f}" y1="{py(lo):.2f}" x2="{px(x):.2f}" '
                       f'y2="{py(hi):.2f}" stroke="{color}"/>')
            for yy in (lo, hi):
                out.append(f'<line x1="{px(x) - 4:.2f}" y1="{py(yy):.2f}" '
                           f'x2="{px(x) + 4:.2f}" y2="{py(yy):.2f}" stroke="{color}"/>')
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(m):.2f}" r="3" '
                       f'fill="{color}"/>')
    # legend
    for i, algo in enumerate(algos):
        y = top + 18 * i
        out.append(f'<rect x="{right + 14}" y="{y - 9}" width="12" height="12" '
                   f'fill="{_svg_color(algo)}"/>')
        out.append(f'<text x="{right + 32}" y="{y + 2}">{algo}</text>')
    out.append('</svg>')
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def render(records, out_dir, formats=("csv",), title="") -> list:
    """Write records.csv (always with csv), summary.csv, and plot.svg; returns paths."""
    if not records:
        raise ValueError("no records to render")
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if "csv" in formats:
        rec_path = os.path.join(out_dir, "records.csv")
        write_records_csv(records, rec_path)
        written.append(rec_path)
        sum_path = os.path.join(out_dir, "summary.csv")
        write_summary_csv(summarize(records), sum_path)
        written.append(sum_path)
    if "svg" in formats:
        svg_path = os.path.join(out_dir, "plot.svg")
        write_summary_svg(summarize(records), svg_path, title=title)
        written.append(svg_path)
    return written
