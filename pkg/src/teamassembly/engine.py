"""Tick-by-tick team assembly over two coexisting cultures.

Each tick assembles one team. Slots are filled by newcomers (fresh agents),
random incumbents, or previous collaborators of incumbents already on the
team. A per-team mixing value is the chance that a slot ignores the team's
own culture and picks one of the two cultures at random, so mixing 0 keeps
cultures apart and mixing 1 blends them completely. Agents idle for longer than
``max_downtime`` ticks retire and leave the collaboration graph.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator

from .params import Culture, ModelParams, validate_params
from .rng import RngStream

DEFAULT_WINDOW = 100


@dataclass(frozen=True)
class Team:
    tick: int
    origin_culture: Culture
    members: tuple[int, ...]
    newcomer_count: int
    incumbent_count: int
    effective_mixing: float

    @property
    def size(self) -> int:
        return len(self.members)


class Agent:
    __slots__ = ("id", "culture", "last_active_tick", "collaborators")

    def __init__(self, id: int, culture: Culture, last_active_tick: int):
        self.id = id
        self.culture = culture
        self.last_active_tick = last_active_tick
        # neighbour id -> number of shared teams
        self.collaborators: dict[int, int] = {}

    def __repr__(self) -> str:
        return f"Agent({self.id}, {self.culture.tag}, last={self.last_active_tick}, deg={len(self.collaborators)})"


class _Pool:
    """Active agents of one culture with O(1) uniform pick and removal."""

    __slots__ = ("items", "pos")

    def __init__(self) -> None:
        self.items: list[int] = []
        self.pos: dict[int, int] = {}

    def add(self, x: int) -> None:
        self.pos[x] = len(self.items)
        self.items.append(x)

    def remove(self, x: int) -> None:
        i = self.pos.pop(x)
        last = self.items.pop()
        if last != x:
            self.items[i] = last
            self.pos[last] = i

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, x: int) -> bool:
        return x in self.pos


class SimState:
    """Mutable simulation state for one run.

    ``graph`` maps each active agent id to its collaborator-weight dict; it
    shares those dicts with the agents themselves, so the two never diverge.
    """

    def __init__(self, rng: RngStream, window: int = DEFAULT_WINDOW):
        self.tick = 0
        self.agents: dict[int, Agent] = {}
        self.graph: dict[int, dict[int, int]] = {}
        self.retired_count = 0
        self.created_count = 0
        self.team_log: deque[Team] = deque(maxlen=window)
        self.rng = rng
        self._pools = {c: _Pool() for c in Culture}
        # active agents with at least one opposite-culture collaborator
        self._cross_degree: dict[int, int] = {}
        self.interdisciplinary_count = 0

    @classmethod
    def initial(cls, params: ModelParams, replicate: int = 0, *, window: int = DEFAULT_WINDOW,
                stream_key: tuple[int, ...] | None = None) -> "SimState":
        key = stream_key if stream_key is not None else (replicate,)
        return cls(RngStream(params.seed, *key), window=window)

    # -- registry -------------------------------------------------------------

    def add_agent(self, culture: Culture, tick: int | None = None) -> Agent:
        agent = Agent(self.created_count, culture, self.tick if tick is None else tick)
        self.created_count += 1
        self.agents[agent.id] = agent
        self.graph[agent.id] = agent.collaborators
        self._pools[culture].add(agent.id)
        return agent

    def active_count(self, culture: Culture | None = None) -> int:
        if culture is None:
            return len(self.agents)
        return len(self._pools[culture])

    def cultures(self) -> dict[int, Culture]:
        return {i: a.culture for i, a in self.agents.items()}

    def link(self, a: int, b: int) -> None:
        """Add one co-membership between two active agents."""
        agents = self.agents
        ca, cb = agents[a].collaborators, agents[b].collaborators
        w = ca.get(b, 0)
        ca[b] = w + 1
        cb[a] = w + 1
        if w == 0 and agents[a].culture is not agents[b].culture:
            self._bump_cross(a, 1)
            self._bump_cross(b, 1)

    def _bump_cross(self, x: int, delta: int) -> None:
        old = self._cross_degree.get(x, 0)
        new = old + delta
        if new:
            self._cross_degree[x] = new
        else:
            del self._cross_degree[x]
        if old == 0 and new > 0:
            self.interdisciplinary_count += 1
        elif old > 0 and new == 0:
            self.interdisciplinary_count -= 1

    def remove_agent(self, x: int) -> None:
        agent = self.agents.pop(x)
        del self.graph[x]
        self._pools[agent.culture].remove(x)
        for y in agent.collaborators:
            del self.agents[y].collaborators[x]
            if self.agents[y].culture is not agent.culture:
                self._bump_cross(y, -1)
        if self._cross_degree.pop(x, 0):
            self.interdisciplinary_count -= 1
        self.retired_count += 1

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Each undirected edge once, as (low id, high id, weight), sorted."""
        for a in sorted(self.graph):
            for b, w in sorted(self.graph[a].items()):
                if a < b:
                    yield a, b, w


def draw_team_size(mean: float, jitter: int, rng: RngStream) -> int:
    """Split a fractional mean between its two neighbouring integers, then jitter.

    E[size] equals ``mean`` exactly; with ``jitter`` > 0 a uniform integer
    offset in [-jitter, jitter] is added on top.
    """
    base = math.floor(mean)
    frac = mean - base
    if frac > 0.0 and rng.random() < frac:
        base += 1
    if jitter:
        base += rng.randint(-jitter, jitter)
    return base


def draw_mixing(params: ModelParams, rng: RngStream) -> float:
    if params.mixing_jitter <= 0:
        return params.mixing
    m = rng.uniform(params.mixing - params.mixing_jitter, params.mixing + params.mixing_jitter)
    return min(1.0, max(0.0, m))


def assemble_team(state: SimState, params: ModelParams, tick: int) -> tuple[list[int], list[Agent], Culture, float, int]:
    """Draw one team's members without mutating the graph.

    Returns (members, newcomer agents, origin culture, effective mixing,
    incumbent count). Newcomers are already registered in ``state``.
    """
    rng = state.rng
    agents = state.agents
    pools = state._pools

    origin = Culture.BASIC if rng.random() < params.team_culture_weight_basic else Culture.CLINICAL
    mixing = draw_mixing(params, rng)
    origin_params = params.per_culture[origin]
    size = draw_team_size(origin_params.mean_team_size, origin_params.team_size_jitter, rng)

    members: list[int] = []
    on_team: set[int] = set()
    incumbents: list[int] = []
    newcomers: list[Agent] = []
    # members of each culture already on the team; all of them sit in the pool
    taken = {Culture.BASIC: 0, Culture.CLINICAL: 0}

    for _ in range(size):
        if rng.random() < mixing:
            culture = Culture.BASIC if rng.random() < 0.5 else Culture.CLINICAL
        else:
            culture = origin
        cp = params.per_culture[culture]
        pick = None
        if rng.random() < cp.p_incumbent:
            if incumbents and rng.random() < cp.q_repeat:
                anchor = incumbents[rng.randbelow(len(incumbents))]
                eligible = [y for y in agents[anchor].collaborators
                            if y not in on_team and agents[y].culture is culture]
                if eligible:
                    pick = eligible[rng.randbelow(len(eligible))]
            else:
                pool = pools[culture]
                if len(pool) > taken[culture]:
                    items = pool.items
                    while True:
                        y = items[rng.randbelow(len(items))]
                        if y not in on_team:
                            pick = y
                            break
        if pick is None:
            agent = state.add_agent(culture, tick)
            newcomers.append(agent)
            pick = agent.id
        else:
            incumbents.append(pick)
        taken[culture] += 1
        members.append(pick)
        on_team.add(pick)
    return members, newcomers, origin, mixing, len(incumbents)


def retire_inactive(state: SimState, params: ModelParams) -> SimState:
    """Remove agents idle for more than ``max_downtime`` ticks."""
    cutoff = state.tick - params.max_downtime
    stale = [x for x, a in state.agents.items() if a.last_active_tick < cutoff]
    for x in stale:
        state.remove_agent(x)
    return state


def step(state: SimState, params: ModelParams) -> tuple[SimState, Team]:
    """Advance one tick: assemble a team, link its members, retire idle agents."""
    state.tick += 1
    tick = state.tick
    members, newcomers, origin, mixing, n_incumbents = assemble_team(state, params, tick)

    agents = state.agents
    for x in members:
        agents[x].last_active_tick = tick
    for i in range(len(members)):
        a = members[i]
        for j in range(i + 1, len(members)):
            state.link(a, members[j])

    team = Team(
        tick=tick,
        origin_culture=origin,
        members=tuple(members),
        newcomer_count=len(newcomers),
        incumbent_count=n_incumbents,
        effective_mixing=mixing,
    )
    state.team_log.append(team)
    retire_inactive(state, params)
    return state, team


Observer = Callable[[Team, SimState], None]


def run(params: ModelParams, ticks: int, observer: Observer | None = None, *,
        replicate: int = 0, window: int = DEFAULT_WINDOW,
        stream_key: tuple[int, ...] | None = None) -> SimState:
    """Run ``ticks`` steps from an empty state, calling ``observer`` after each."""
    validate_params(params)
    if ticks < 1:
        raise ValueError("ticks must be >= 1")
    state = SimState.initial(params, replicate, window=window, stream_key=stream_key)
    for _ in range(ticks):
        state, team = step(state, params)
        if observer is not None:
            observer(team, state)
    return state
