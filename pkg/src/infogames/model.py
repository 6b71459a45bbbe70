"""The intrinsic game model: agents, Nature, information fields, strategies.

A model couples a configuration space (Nature factors followed by one action
factor per agent) with one information partition per agent.  Construction
validates absence of self-information: no agent's partition may distinguish
two configurations that differ only in his own action coordinate.

Strategies map information atoms to action indices, so measurability holds by
construction.  Playability (the closed-loop equation ``u = strategy(nature, u)``
having exactly one solution) is checked either by fixed-point enumeration or,
when an agent ordering compatible with the information structure exists, by
the sequential fast path.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import CapacityExceeded, NotPlayable, SelfInformationViolation
from .spaces import (
    FiniteFactor,
    Partition,
    Point,
    ProductSpace,
    cylinder_partition,
    make_product_space,
    refines,
)

DEFAULT_STRATEGY_CAP = 10**7


@dataclass(frozen=True)
class AgentId:
    """A decision-maker taking exactly one decision.

    ``stage`` distinguishes the successive agents of a player acting over
    time; single-decision players leave it ``None``.
    """

    player: str
    stage: int | None = None

    def __str__(self) -> str:
        if self.stage is None:
            return self.player
        return f"{self.player}.{self.stage}"


# An information spec is either a collection of visible factor ids (cylinder
# form) or an explicit partition over the configuration space.
InfoSpec = Union[Iterable[str], Partition]


@dataclass(frozen=True)
class WModel:
    nature_factors: tuple[FiniteFactor, ...]
    agents: tuple[AgentId, ...]
    action_factors: Mapping[AgentId, FiniteFactor]
    configuration: ProductSpace
    nature_space: ProductSpace
    info: Mapping[AgentId, Partition]

    def agent_axis(self, agent: AgentId) -> int:
        """Index of the agent's action coordinate in the configuration space."""
        return len(self.nature_factors) + self.agents.index(agent)

    def nature_points(self) -> Iterator[Point]:
        return self.nature_space.points()


def _check_self_information(
    configuration: ProductSpace, axis: int, partition: Partition
):
    """Return a witness pair if the partition sees the coordinate ``axis``."""
    stride = configuration._strides[axis]
    size = configuration.factors[axis].size
    for idx in range(configuration.size):
        coord = (idx // stride) % size
        if coord == 0:
            continue
        base = idx - coord * stride
        if partition.atom_of[idx] != partition.atom_of[base]:
            return configuration.point_at(base), configuration.point_at(idx)
    return None


def build_wmodel(
    nature_factors: Sequence[FiniteFactor],
    agents: Sequence[AgentId],
    action_factors: Mapping[AgentId, FiniteFactor],
    info_specs: Mapping[AgentId, InfoSpec],
) -> WModel:
    """Assemble and validate a model.

    ``info_specs`` maps each agent either to an iterable of visible factor
    ids (cylinder form) or to an explicit :class:`Partition` over the
    configuration space.  Raises :class:`SelfInformationViolation` with a
    witness pair when an agent's information depends on his own action.
    """
    nature_factors = tuple(nature_factors)
    agents = tuple(agents)
    if not agents:
        raise ValueError("a model needs at least one agent")
    if len(set(agents)) != len(agents):
        raise ValueError("duplicate (player, stage) agent id")
    for f in nature_factors:
        if f.kind == "action":
            raise ValueError(f"nature factor {f.id!r} has kind 'action'")
    for a in agents:
        if a not in action_factors:
            raise ValueError(f"missing action factor for agent {a}")
        if action_factors[a].kind != "action":
            raise ValueError(f"action factor for agent {a} must have kind 'action'")

    ordered_actions = tuple(action_factors[a] for a in agents)
    configuration = make_product_space(nature_factors + ordered_actions)
    nature_space = make_product_space(nature_factors) if nature_factors else None
    if nature_space is None:
        raise ValueError("a model needs at least one nature factor")

    info: dict[AgentId, Partition] = {}
    for a in agents:
        spec = info_specs.get(a)
        if spec is None:
            raise ValueError(f"missing information spec for agent {a}")
        if isinstance(spec, Partition):
            if spec.space != configuration:
                raise ValueError(
                    f"information partition for agent {a} is over a different space"
                )
            part = spec
        else:
            part = cylinder_partition(configuration, spec)
        info[a] = part

    model = WModel(
        nature_factors=nature_factors,
        agents=agents,
        action_factors=dict(action_factors),
        configuration=configuration,
        nature_space=nature_space,
        info=info,
    )
    for a in agents:
        witness = _check_self_information(configuration, model.agent_axis(a), info[a])
        if witness is not None:
            raise SelfInformationViolation(a, witness)
    return model


@dataclass(frozen=True)
class Strategy:
    """Per-agent map from information atom id to action element index."""

    agent: AgentId
    table: tuple[int, ...]


@dataclass(frozen=True)
class StrategyProfile:
    """One strategy per agent, in model agent order."""

    strategies: tuple[Strategy, ...]

    def strategy_for(self, agent: AgentId) -> Strategy:
        for s in self.strategies:
            if s.agent == agent:
                return s
        raise ValueError(f"no strategy for agent {agent}")


def validate_strategy(model: WModel, strategy: Strategy):
    part = model.info[strategy.agent]
    size = model.action_factors[strategy.agent].size
    if len(strategy.table) != part.atom_count:
        raise ValueError(
            f"strategy table for {strategy.agent} has {len(strategy.table)} "
            f"entries, information field has {part.atom_count} atoms"
        )
    for v in strategy.table:
        if not 0 <= v < size:
            raise ValueError(f"action index {v} out of range for {strategy.agent}")


def make_profile(model: WModel, strategies: Iterable[Strategy]) -> StrategyProfile:
    by_agent: dict[AgentId, Strategy] = {}
    for s in strategies:
        if s.agent in by_agent:
            raise ValueError(f"duplicate strategy for agent {s.agent}")
        by_agent[s.agent] = s
    if set(by_agent) != set(model.agents):
        raise ValueError("profile must contain exactly one strategy per agent")
    for s in by_agent.values():
        validate_strategy(model, s)
    return StrategyProfile(tuple(by_agent[a] for a in model.agents))


def count_strategies(model: WModel, agent: AgentId) -> int:
    """Number of measurable strategies: |actions| ** (information atoms)."""
    return model.action_factors[agent].size ** model.info[agent].atom_count


def enumerate_strategies(
    model: WModel, agent: AgentId, cap: int = DEFAULT_STRATEGY_CAP
) -> Iterator[Strategy]:
    """All strategies of the agent in lexicographic table order."""
    n = count_strategies(model, agent)
    if n > cap:
        raise CapacityExceeded(n, cap, f"strategies of agent {agent}")
    k = model.action_factors[agent].size
    m = model.info[agent].atom_count
    for table in itertools.product(range(k), repeat=m):
        yield Strategy(agent, table)


def check_sequential(model: WModel) -> tuple[AgentId, ...] | None:
    """Greedy search for an agent ordering where each agent's information is
    determined by Nature and by the actions of his predecessors.

    Eligibility is monotone in the placed set, so the greedy construction
    (earliest eligible agent in declaration order) finds an ordering whenever
    one exists.  Returns ``None`` otherwise.
    """
    nature_ids = [f.id for f in model.nature_factors]
    placed: list[AgentId] = []
    remaining = list(model.agents)
    known_cyl = cylinder_partition(model.configuration, nature_ids)
    while remaining:
        chosen = None
        for a in remaining:
            if refines(known_cyl, model.info[a]):
                chosen = a
                break
        if chosen is None:
            return None
        placed.append(chosen)
        remaining.remove(chosen)
        visible = nature_ids + [model.action_factors[b].id for b in placed]
        known_cyl = cylinder_partition(model.configuration, visible)
    return tuple(placed)


def _fixed_points(
    model: WModel, profile: StrategyProfile, nature_point: Point
) -> list[Point]:
    """All action tuples solving the closed-loop equation at one nature state."""
    sizes = [model.action_factors[a].size for a in model.agents]
    solutions = []
    for actions in itertools.product(*(range(s) for s in sizes)):
        config = nature_point + actions
        idx = model.configuration.point_index(config)
        ok = True
        for pos, a in enumerate(model.agents):
            atom = model.info[a].atom_of[idx]
            if profile.strategies[pos].table[atom] != actions[pos]:
                ok = False
                break
        if ok:
            solutions.append(config)
    return solutions


@dataclass(frozen=True)
class PlayabilityFailure:
    nature_point: Point
    profile: StrategyProfile
    solution_count: int
    solutions: tuple[Point, ...]


@dataclass(frozen=True)
class PlayabilityReport:
    playable: bool
    mode: str
    profiles_checked: int
    failures: tuple[PlayabilityFailure, ...]
    sequential_order: tuple[AgentId, ...] | None = None


def _random_profile(model: WModel, rng: random.Random) -> StrategyProfile:
    strategies = []
    for a in model.agents:
        k = model.action_factors[a].size
        m = model.info[a].atom_count
        strategies.append(Strategy(a, tuple(rng.randrange(k) for _ in range(m))))
    return StrategyProfile(tuple(strategies))


def _all_profiles(model: WModel, cap: int) -> Iterator[StrategyProfile]:
    total = 1
    for a in model.agents:
        total *= count_strategies(model, a)
    if total > cap:
        raise CapacityExceeded(total, cap, "strategy profiles")
    per_agent = [list(enumerate_strategies(model, a, cap)) for a in model.agents]
    for combo in itertools.product(*per_agent):
        yield StrategyProfile(tuple(combo))


def check_playability(
    model: WModel,
    profiles: str | tuple[int, int] | Sequence[StrategyProfile] = "all",
    cap: int = 10**6,
) -> PlayabilityReport:
    """Count fixed points of the closed-loop equation over selected profiles.

    ``profiles`` is ``"all"``, a ``(n, seed)`` pair for random sampling, or an
    explicit list.  In ``"all"`` mode a sequential information structure
    short-circuits to playable (sequential implies playable) with zero
    profiles checked and the ordering recorded as justification.
    """
    if profiles == "all":
        order = check_sequential(model)
        if order is not None:
            return PlayabilityReport(True, "sequential", 0, (), order)
        selected: Iterable[StrategyProfile] = _all_profiles(model, cap)
        mode = "all"
    elif isinstance(profiles, tuple) and len(profiles) == 2 and isinstance(profiles[0], int):
        n, seed = profiles
        rng = random.Random(seed)
        selected = [_random_profile(model, rng) for _ in range(n)]
        mode = f"sample(n={n}, seed={seed})"
    else:
        selected = list(profiles)  # type: ignore[arg-type]
        for p in selected:
            if not isinstance(p, StrategyProfile):
                raise ValueError("explicit profiles must be StrategyProfile values")
            for s in p.strategies:
                validate_strategy(model, s)
        mode = "explicit"

    failures = []
    checked = 0
    for profile in selected:
        checked += 1
        for omega in model.nature_points():
            sols = _fixed_points(model, profile, omega)
            if len(sols) != 1:
                failures.append(
                    PlayabilityFailure(omega, profile, len(sols), tuple(sols))
                )
    return PlayabilityReport(not failures, mode, checked, tuple(failures))


def solution_map(
    model: WModel,
    profile: StrategyProfile,
    brute_force: bool = False,
    order: tuple[AgentId, ...] | None = None,
) -> dict[Point, Point]:
    """Map each nature state to the unique outcome under the profile.

    Uses forward substitution along a sequential agent ordering when one
    exists (each agent's information atom is already determined by Nature and
    by the decisions taken so far); falls back to fixed-point enumeration and
    raises :class:`NotPlayable` if some nature state has zero or several
    solutions.  A precomputed ordering from :func:`check_sequential` may be
    passed to skip recomputing it.
    """
    if not brute_force and order is None:
        order = check_sequential(model)
    result: dict[Point, Point] = {}
    if order is not None and not brute_force:
        axes = {a: model.agent_axis(a) for a in model.agents}
        pos = {a: i for i, a in enumerate(model.agents)}
        config = model.configuration
        for omega in model.nature_points():
            coords = list(omega) + [0] * len(model.agents)
            for a in order:
                idx = config.point_index(coords)
                atom = model.info[a].atom_of[idx]
                coords[axes[a]] = profile.strategies[pos[a]].table[atom]
            result[omega] = tuple(coords)
        return result
    for omega in model.nature_points():
        sols = _fixed_points(model, profile, omega)
        if len(sols) != 1:
            raise NotPlayable(omega, len(sols))
        result[omega] = sols[0]
    return result
