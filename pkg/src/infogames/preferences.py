"""Players, objectives, beliefs, and risk measures.

Objectives are extended-real tables over the configuration space; the adverse
infinity (+inf for a cost, -inf for a payoff) encodes impossible
configurations, and the favorable infinity is rejected at construction.

Beliefs are probability masses over Nature, either joint or as a product of
per-factor vectors (a Dirac factor encodes a known component).  Risk measures
map Nature-indexed value tables to a number: expectation, worst case over the
belief support, or CVaR at level alpha (adverse-tail mean with fractional
boundary atom, the standard discrete form).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import IndeterminateValue
from .model import AgentId, WModel
from .spaces import FiniteFactor, Point, ProductSpace

MASS_TOL = 1e-12


class Sense(enum.Enum):
    COST = "cost"
    PAYOFF = "payoff"

    @property
    def adverse(self) -> float:
        return math.inf if self is Sense.COST else -math.inf

    def better(self, a: float, b: float) -> bool:
        """True iff value ``a`` is strictly preferred to ``b``."""
        return a < b if self is Sense.COST else a > b

    def best(self, values):
        return min(values) if self is Sense.COST else max(values)

    def worst(self, values):
        return max(values) if self is Sense.COST else min(values)


@dataclass(frozen=True)
class Objective:
    """A player's preference table over configurations."""

    player: str
    sense: Sense
    values: tuple[float, ...]

    def __post_init__(self):
        favorable = -self.sense.adverse
        for v in self.values:
            if math.isnan(v):
                raise ValueError("objective values must not be NaN")
            if v == favorable:
                raise ValueError(
                    f"a {self.sense.value} table must not contain {favorable} "
                    "(the favorable infinity); only the adverse infinity marks "
                    "impossible configurations"
                )

    @staticmethod
    def from_function(space: ProductSpace, player: str, sense: Sense, fn) -> "Objective":
        return Objective(player, sense, tuple(float(fn(pt)) for pt in space.points()))


def _check_mass_vector(vec: Sequence[float], what: str):
    for m in vec:
        if m < 0:
            raise ValueError(f"{what} has a negative mass {m}")
    if abs(math.fsum(vec) - 1.0) > MASS_TOL:
        raise ValueError(f"{what} sums to {math.fsum(vec)}, expected 1")


@dataclass(frozen=True)
class Belief:
    """Probability mass over Nature, joint or product-of-factors."""

    space: ProductSpace
    joint: tuple[float, ...] | None = None
    factors: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if (self.joint is None) == (self.factors is None):
            raise ValueError("a belief is either joint or product, not both")
        if self.joint is not None:
            if len(self.joint) != self.space.size:
                raise ValueError("joint belief length does not match Nature size")
            _check_mass_vector(self.joint, "joint belief")
        else:
            assert self.factors is not None
            if len(self.factors) != len(self.space.factors):
                raise ValueError("product belief needs one vector per Nature factor")
            for vec, f in zip(self.factors, self.space.factors):
                if len(vec) != f.size:
                    raise ValueError(f"belief vector for factor {f.id!r} has wrong length")
                _check_mass_vector(vec, f"belief vector for factor {f.id!r}")

    @staticmethod
    def product(space: ProductSpace, vectors: Sequence[Sequence[float]]) -> "Belief":
        return Belief(space, factors=tuple(tuple(float(m) for m in v) for v in vectors))

    @staticmethod
    def joint_over(space: ProductSpace, vector: Sequence[float]) -> "Belief":
        return Belief(space, joint=tuple(float(m) for m in vector))

    @staticmethod
    def uniform(space: ProductSpace) -> "Belief":
        n = space.size
        return Belief(space, joint=(1.0 / n,) * n)

    def mass(self, omega: Point) -> float:
        if self.joint is not None:
            return self.joint[self.space.point_index(omega)]
        assert self.factors is not None
        m = 1.0
        for coord, vec in zip(omega, self.factors):
            m *= vec[coord]
        return m


def make_dirac(factor: FiniteFactor, element: int | str) -> tuple[float, ...]:
    """Per-factor distribution with unit mass at one element."""
    if isinstance(element, str):
        element = factor.element_index(element)
    if not 0 <= element < factor.size:
        raise ValueError(f"element {element} out of range for factor {factor.id!r}")
    return tuple(1.0 if i == element else 0.0 for i in range(factor.size))


def belief_mass(belief: Belief, omega: Point) -> float:
    return belief.mass(omega)


class RiskKind(enum.Enum):
    EXPECTATION = "expectation"
    WORST_CASE = "worst-case"
    CVAR = "cvar"


@dataclass(frozen=True)
class RiskMeasure:
    """One of expectation, worst case, or CVaR(alpha) over a belief.

    Worst case may omit the belief, in which case every Nature state counts;
    with a belief it ranges over the positive-mass states only.
    """

    kind: RiskKind
    belief: Belief | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.kind in (RiskKind.EXPECTATION, RiskKind.CVAR) and self.belief is None:
            raise ValueError(f"{self.kind.value} needs a belief")
        if self.kind is RiskKind.CVAR:
            if self.alpha is None or not 0 < self.alpha <= 1:
                raise ValueError("CVaR level must lie in (0, 1]")
        elif self.alpha is not None:
            raise ValueError("alpha only applies to CVaR")

    @staticmethod
    def expectation(belief: Belief) -> "RiskMeasure":
        return RiskMeasure(RiskKind.EXPECTATION, belief)

    @staticmethod
    def worst_case(belief: Belief | None = None) -> "RiskMeasure":
        return RiskMeasure(RiskKind.WORST_CASE, belief)

    @staticmethod
    def cvar(alpha: float, belief: Belief) -> "RiskMeasure":
        return RiskMeasure(RiskKind.CVAR, belief, alpha)


def _expectation(pairs: list[tuple[float, float]]) -> float:
    """Weighted mean of (value, mass) pairs with the infinity conventions."""
    has_pos = any(v == math.inf for v, _ in pairs)
    has_neg = any(v == -math.inf for v, _ in pairs)
    if has_pos and has_neg:
        raise IndeterminateValue("both +inf and -inf carry positive mass")
    if has_pos:
        return math.inf
    if has_neg:
        return -math.inf
    total = math.fsum(m for _, m in pairs)
    return math.fsum(v * m for v, m in pairs) / total


def _adverse_tail_mean(
    pairs: list[tuple[float, float]], alpha: float, sense: Sense
) -> float:
    """Mean of the adverse tail of total mass ``alpha``, boundary atom split
    fractionally (discrete CVaR)."""
    ordered = sorted(pairs, key=lambda vm: vm[0], reverse=(sense is Sense.COST))
    taken: list[tuple[float, float]] = []
    remaining = alpha
    for v, m in ordered:
        if remaining <= 0:
            break
        take = min(m, remaining)
        taken.append((v, take))
        remaining -= take
    has_pos = any(v == math.inf for v, _ in taken)
    has_neg = any(v == -math.inf for v, _ in taken)
    if has_pos and has_neg:
        raise IndeterminateValue("both +inf and -inf lie in the adverse tail")
    if has_pos:
        return math.inf
    if has_neg:
        return -math.inf
    consumed = math.fsum(m for _, m in taken)
    return math.fsum(v * m for v, m in taken) / consumed


def apply_risk(risk: RiskMeasure, values: Sequence[float], sense: Sense) -> float:
    """Map a Nature-indexed value table to a number.

    Zero-mass states are dropped before any weighting, so the 0 * inf form
    never arises.  Under expectation, a positive-mass state at the adverse
    infinity drives the result to that infinity; if both infinities carry
    positive mass the value is undefined and :class:`IndeterminateValue` is
    raised.
    """
    if risk.belief is not None and len(values) != risk.belief.space.size:
        raise ValueError("value table length does not match Nature size")
    if risk.belief is None:
        pairs = [(float(v), 1.0) for v in values]
    else:
        pairs = []
        for idx, omega in enumerate(risk.belief.space.points()):
            m = risk.belief.mass(omega)
            if m > 0:
                pairs.append((float(values[idx]), m))
    if risk.kind is RiskKind.WORST_CASE:
        return sense.worst(v for v, _ in pairs)
    if risk.kind is RiskKind.EXPECTATION:
        return _expectation(pairs)
    assert risk.alpha is not None
    return _adverse_tail_mean(pairs, risk.alpha, sense)


@dataclass(frozen=True)
class PlayerData:
    """A player's purely personal data: objective plus risk measure."""

    objective: Objective
    risk: RiskMeasure


@dataclass(frozen=True)
class PlayerPartition:
    """Grouping of agents into players."""

    players: tuple[str, ...]
    assignment: Mapping[AgentId, str]

    def agents_of(self, player: str, model: WModel) -> tuple[AgentId, ...]:
        return tuple(a for a in model.agents if self.assignment[a] == player)


@dataclass(frozen=True)
class WGame:
    """A validated game: model, player partition, per-player data, roles."""

    model: WModel
    players: PlayerPartition
    data: Mapping[str, PlayerData]
    leaders: tuple[str, ...] = ()

    @property
    def followers(self) -> tuple[str, ...]:
        return tuple(p for p in self.players.players if p not in self.leaders)

    def agents_of(self, player: str) -> tuple[AgentId, ...]:
        return self.players.agents_of(player, self.model)


def make_wgame(
    model: WModel,
    players: PlayerPartition,
    data: Mapping[str, PlayerData],
    leaders: Sequence[str] = (),
) -> WGame:
    """Validate the partition, the data tables, and the belief spaces."""
    if len(set(players.players)) != len(players.players):
        raise ValueError("duplicate player id")
    assigned = set(players.assignment)
    if assigned != set(model.agents):
        missing = set(model.agents) - assigned
        extra = assigned - set(model.agents)
        raise ValueError(
            f"player partition does not cover the agents exactly "
            f"(missing {sorted(map(str, missing))}, extra {sorted(map(str, extra))})"
        )
    for a, p in players.assignment.items():
        if p not in players.players:
            raise ValueError(f"agent {a} assigned to undeclared player {p!r}")
    for p in players.players:
        if not any(v == p for v in players.assignment.values()):
            raise ValueError(f"player {p!r} has no agents")
        if p not in data:
            raise ValueError(f"missing data for player {p!r}")
    for p, d in data.items():
        if p not in players.players:
            raise ValueError(f"data given for undeclared player {p!r}")
        if d.objective.player != p:
            raise ValueError(
                f"objective for player {p!r} is labelled {d.objective.player!r}"
            )
        if len(d.objective.values) != model.configuration.size:
            raise ValueError(
                f"objective table for player {p!r} has {len(d.objective.values)} "
                f"entries, configuration space has {model.configuration.size}"
            )
        if d.risk.belief is not None and d.risk.belief.space != model.nature_space:
            raise ValueError(f"belief for player {p!r} is over a different Nature")
    for ld in leaders:
        if ld not in players.players:
            raise ValueError(f"leader {ld!r} is not a player")
    return WGame(model, players, dict(data), tuple(leaders))
