"""Network observables: team size, giant component, interdisciplinarity.

Graphs are adjacency mappings ``node -> {neighbour: weight}`` over active
agents; cultures come as a ``node -> Culture`` mapping. Percentages are
taken over every node present in the graph.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .params import Culture

Graph = Mapping[int, Mapping[int, int]]

CSV_HEADER = ("tick", "avg_team_size", "pct_giant", "pct_interdisciplinary",
              "active_agents", "active_basic", "active_clinical")


@dataclass(frozen=True)
class MetricsRow:
    tick: int
    avg_team_size: float
    pct_giant: float
    pct_interdisciplinary: float
    active_agents: int
    active_basic: int
    active_clinical: int

    def as_csv_fields(self) -> list[str]:
        return [str(self.tick), _fmt(self.avg_team_size), _fmt(self.pct_giant),
                _fmt(self.pct_interdisciplinary), str(self.active_agents),
                str(self.active_basic), str(self.active_clinical)]


def _fmt(x: float) -> str:
    # repr round-trips exactly; fixed formatting keeps files byte-stable
    return repr(float(x))


def connected_components(graph: Graph) -> list[list[int]]:
    """Components as node lists, found by iterative BFS in node order."""
    seen: set[int] = set()
    out = []
    for start in graph:
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in graph[u]:
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            comp.extend(nxt)
            frontier = nxt
        out.append(comp)
    return out


def largest_component_size(graph: Graph) -> int:
    seen: set[int] = set()
    best = 0
    remaining = len(graph)
    for start in graph:
        if start in seen:
            continue
        if remaining <= best:
            break
        seen.add(start)
        stack = [start]
        size = 0
        while stack:
            u = stack.pop()
            size += 1
            for v in graph[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        remaining -= size
        if size > best:
            best = size
    return best


def giant_component_pct(graph: Graph) -> float:
    n = len(graph)
    if n == 0:
        return 0.0
    return 100.0 * largest_component_size(graph) / n


def interdisciplinary_pct(graph: Graph, cultures: Mapping[int, Culture]) -> float:
    """Percentage of nodes with at least one neighbour of the other culture."""
    n = len(graph)
    if n == 0:
        return 0.0
    count = 0
    for u, nbrs in graph.items():
        cu = cultures[u]
        for v in nbrs:
            if cultures[v] is not cu:
                count += 1
                break
    return 100.0 * count / n


def avg_team_size(team_log: Iterable) -> float:
    sizes = [len(t.members) for t in team_log]
    return sum(sizes) / len(sizes) if sizes else 0.0


def component_census(graph: Graph, cultures: Mapping[int, Culture]) -> list[tuple[int, int, int]]:
    """(size, basic_count, clinical_count) per component, largest first."""
    census = []
    for comp in connected_components(graph):
        basic = sum(1 for x in comp if cultures[x] is Culture.BASIC)
        census.append((len(comp), basic, len(comp) - basic))
    census.sort(reverse=True)
    return census


@dataclass(frozen=True)
class CompositionStats:
    avg_size: float
    avg_incumbent_fraction: float
    pct_teams_with_2plus_incumbents: float


def team_composition_stats(team_log: Iterable, culture: Culture) -> CompositionStats:
    """Size and incumbent statistics over teams originating in ``culture``."""
    teams = [t for t in team_log if t.origin_culture is culture]
    if not teams:
        return CompositionStats(0.0, 0.0, 0.0)
    n = len(teams)
    return CompositionStats(
        avg_size=sum(len(t.members) for t in teams) / n,
        avg_incumbent_fraction=sum(t.incumbent_count / len(t.members) for t in teams) / n,
        pct_teams_with_2plus_incumbents=100.0 * sum(1 for t in teams if t.incumbent_count >= 2) / n,
    )


def metrics_row(state) -> MetricsRow:
    """Snapshot the observables of a running simulation.

    Uses the state's incrementally maintained interdisciplinary count; it is
    checked against :func:`interdisciplinary_pct` in the tests.
    """
    n = len(state.agents)
    basic = state.active_count(Culture.BASIC)
    return MetricsRow(
        tick=state.tick,
        avg_team_size=avg_team_size(state.team_log),
        pct_giant=100.0 * largest_component_size(state.graph) / n if n else 0.0,
        pct_interdisciplinary=100.0 * state.interdisciplinary_count / n if n else 0.0,
        active_agents=n,
        active_basic=basic,
        active_clinical=n - basic,
    )


def write_metrics_csv(rows: Sequence[MetricsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.as_csv_fields())
    return buf.getvalue()


def read_metrics_csv(text: str) -> list[MetricsRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected metrics header {header}")
    return [MetricsRow(int(r[0]), float(r[1]), float(r[2]), float(r[3]), int(r[4]), int(r[5]), int(r[6]))
            for r in reader]
