"""Replicated mixing sweeps with deterministic per-replicate streams."""

from __future__ import annotations

import json
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .engine import DEFAULT_WINDOW, run
from .metrics import MetricsRow, component_census, metrics_row, write_metrics_csv
from .params import ModelParams, format_config, validate_params
from .rng import derive_seed

log = logging.getLogger(__name__)

METRICS = ("avg_team_size", "pct_giant", "pct_interdisciplinary",
           "active_agents", "active_basic", "active_clinical")


@dataclass(frozen=True)
class ExperimentSpec:
    params: ModelParams
    ticks: int
    replicates: int
    mixing_values: tuple[float, ...]
    metrics_window: int = DEFAULT_WINDOW

    def problems(self) -> list[str]:
        out = []
        if not (isinstance(self.ticks, int) and self.ticks >= 1):
            out.append(f"ticks must be >= 1 (got {self.ticks!r})")
        if not (isinstance(self.replicates, int) and self.replicates >= 1):
            out.append(f"replicates must be >= 1 (got {self.replicates!r})")
        if not self.mixing_values:
            out.append("mixing_values must be non-empty")
        for m in self.mixing_values:
            if not 0.0 <= m <= 1.0:
                out.append(f"mixing value {m!r} out of [0,1]")
        if len(set(self.mixing_values)) != len(self.mixing_values):
            out.append("mixing_values must be distinct")
        if not (isinstance(self.metrics_window, int) and self.metrics_window >= 1):
            out.append(f"metrics_window must be >= 1 (got {self.metrics_window!r})")
        return out


@dataclass
class ReplicateResult:
    mixing_index: int
    replicate: int
    rows: list[MetricsRow]
    census: list[tuple[int, int, int]]
    edges: list[tuple[int, int, int]]
    cultures: dict[int, str]


@dataclass(frozen=True)
class AggregateRow:
    tick: int
    mean: tuple[float, ...]
    sd: tuple[float, ...]


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    replicates: dict[tuple[int, int], ReplicateResult]
    aggregates: dict[int, list[AggregateRow]] = field(default_factory=dict)

    def series(self, mixing_index: int, replicate: int) -> list[MetricsRow]:
        return self.replicates[mixing_index, replicate].rows

    def seeds(self) -> dict[str, int]:
        return {f"{mixing_label(m)}/{r}": derive_seed(self.spec.params.seed, i, r)
                for i, m in enumerate(self.spec.mixing_values) for r in range(self.spec.replicates)}


def mixing_label(m: float) -> str:
    return f"{m:g}"


def run_replicate(params: ModelParams, mixing_index: int, replicate: int, ticks: int,
                  window: int = DEFAULT_WINDOW) -> ReplicateResult:
    """One replicate; its stream depends only on (seed, mixing index, replicate)."""
    rows: list[MetricsRow] = []
    state = run(params, ticks, lambda team, s: rows.append(metrics_row(s)),
                window=window, stream_key=(mixing_index, replicate))
    return ReplicateResult(
        mixing_index=mixing_index,
        replicate=replicate,
        rows=rows,
        census=component_census(state.graph, state.cultures()),
        edges=list(state.edges()),
        cultures={i: a.culture.tag for i, a in sorted(state.agents.items())},
    )


def _task(args) -> ReplicateResult:
    params, mi, r, ticks, window = args
    result = run_replicate(params, mi, r, ticks, window)
    log.info("mixing=%s replicate=%d done", mixing_label(params.mixing), r)
    return result


def _mean_sd(values: Sequence[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd


def aggregate(series: Sequence[Sequence[MetricsRow]]) -> list[AggregateRow]:
    """Cross-replicate mean and sample standard deviation per tick."""
    out = []
    for rows in zip(*series):
        means, sds = [], []
        for name in METRICS:
            m, s = _mean_sd([getattr(r, name) for r in rows])
            means.append(m)
            sds.append(s)
        out.append(AggregateRow(rows[0].tick, tuple(means), tuple(sds)))
    return out


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> ExperimentResult:
    """Run every (mixing value, replicate) pair; ``jobs`` never affects the output."""
    problems = spec.problems()
    if problems:
        raise ValueError("; ".join(problems))
    validate_params(spec.params)
    tasks = [(spec.params.with_mixing(m), i, r, spec.ticks, spec.metrics_window)
             for i, m in enumerate(spec.mixing_values) for r in range(spec.replicates)]
    for p, *_ in tasks:
        validate_params(p)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_task, tasks, chunksize=1))
    else:
        done = [_task(t) for t in tasks]
    result = ExperimentResult(spec, {(d.mixing_index, d.replicate): d for d in done})
    for i in range(len(spec.mixing_values)):
        result.aggregates[i] = aggregate([result.series(i, r) for r in range(spec.replicates)])
    return result


def ls_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Ordinary least-squares slope of ys on xs."""
    n = len(xs)
    if n < 2:
        return 0.0
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    num = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = math.fsum((x - mx) * (x - mx) for x in xs)
    return num / den if den else 0.0


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    sd: float
    slope: float


def summarize_series(series: Sequence[Sequence[MetricsRow]], burn_in: int) -> dict[str, MetricSummary]:
    """Pooled mean/sd over ticks > burn_in, and the slope of the cross-replicate mean series."""
    tail = [[r for r in rows if r.tick > burn_in] for rows in series]
    if not tail or not tail[0]:
        raise ValueError("no ticks after burn-in")
    ticks = [r.tick for r in tail[0]]
    out = {}
    for name in METRICS:
        pooled = [getattr(r, name) for rows in tail for r in rows]
        mean_series = [statistics.fmean(getattr(rows[k], name) for rows in tail) for k in range(len(ticks))]
        mean, sd = _mean_sd(pooled)
        out[name] = MetricSummary(mean, sd, ls_slope(ticks, mean_series))
    return out


def summarize(result: ExperimentResult, burn_in: int = 500) -> dict[float, dict[str, MetricSummary]]:
    if burn_in >= result.spec.ticks:
        raise ValueError(f"burn_in ({burn_in}) must be < ticks ({result.spec.ticks})")
    return {
        m: summarize_series([result.series(i, r) for r in range(result.spec.replicates)], burn_in)
        for i, m in enumerate(result.spec.mixing_values)
    }


# -- output files -------------------------------------------------------------

def aggregate_csv(rows: Iterable[AggregateRow]) -> str:
    header = ["tick"] + [f"{m}_{s}" for m in METRICS for s in ("mean", "sd")]
    lines = [",".join(header)]
    for row in rows:
        fields = [str(row.tick)]
        for mean, sd in zip(row.mean, row.sd):
            fields += [repr(mean), repr(sd)]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def census_csv(census: Iterable[tuple[int, int, int]]) -> str:
    lines = ["size,basic_count,clinical_count"] + [f"{s},{b},{c}" for s, b, c in census]
    return "\n".join(lines) + "\n"


def edges_csv(edges: Iterable[tuple[int, int, int]]) -> str:
    lines = ["source,target,weight"] + [f"{a},{b},{w}" for a, b, w in edges]
    return "\n".join(lines) + "\n"


def nodes_csv(cultures: dict[int, str]) -> str:
    lines = ["node,culture"] + [f"{n},{c}" for n, c in sorted(cultures.items())]
    return "\n".join(lines) + "\n"


def summary_dict(result: ExperimentResult, burn_in: int) -> dict:
    spec = result.spec
    summaries = summarize(result, burn_in)
    return {
        "params": format_config(spec.params).splitlines(),
        "ticks": spec.ticks,
        "replicates": spec.replicates,
        "mixing_values": list(spec.mixing_values),
        "metrics_window": spec.metrics_window,
        "burn_in": burn_in,
        "seeds": result.seeds(),
        "summary": {
            mixing_label(m): {name: vars(s) for name, s in per.items()}
            for m, per in summaries.items()
        },
    }


def write_experiment(result: ExperimentResult, out_dir: str | Path, burn_in: int = 500,
                     summary: bool = True) -> list[Path]:
    """Write the experiment file set into ``out_dir`` and return the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name: str, text: str) -> None:
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    spec = result.spec
    for i, m in enumerate(spec.mixing_values):
        label = mixing_label(m)
        for r in range(spec.replicates):
            rep = result.replicates[i, r]
            put(f"series_{label}_{r}.csv", write_metrics_csv(rep.rows))
            put(f"census_{label}_{r}.csv", census_csv(rep.census))
            put(f"edges_{label}_{r}.csv", edges_csv(rep.edges))
            put(f"nodes_{label}_{r}.csv", nodes_csv(rep.cultures))
        if summary:
            put(f"aggregate_{label}.csv", aggregate_csv(result.aggregates[i]))
    if summary:
        effective_burn_in = min(burn_in, spec.ticks - 1)
        put("summary.json", json.dumps(summary_dict(result, effective_burn_in), indent=2, sort_keys=True) + "\n")
    return written
