"""Normal-form evaluation: a player's risk measure applied to her objective
composed with the solution map, as a function of the strategy profile.

The :class:`Evaluator` memoizes solution maps per profile and values per
(player, profile) within a solve session; equilibrium search revisits profiles
heavily.  Evaluation is pure, so the memo behaves as a last-write-wins cache.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import CapacityExceeded, NotTwoPlayers
from .model import (
    AgentId,
    Strategy,
    StrategyProfile,
    WModel,
    check_sequential,
    count_strategies,
    enumerate_strategies,
    solution_map,
)
from .preferences import Sense, WGame, apply_risk

DEFAULT_PROFILE_CAP = 10**6

# A player's strategy is a tuple of per-agent strategies, in model agent order.
PlayerStrategy = tuple[Strategy, ...]


def fmt_value(v: float) -> str:
    """Canonical rendering: 'inf'/'-inf' literals, else up to 12 significant
    digits."""
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return format(float(v), ".12g")


def agent_display_name(game: WGame, agent: AgentId) -> str:
    """Player name when the player has a single agent, else player.stage."""
    player = game.players.assignment[agent]
    if len(game.agents_of(player)) == 1:
        return player
    return str(agent)


def strategy_label(game: WGame, strategy: Strategy) -> str:
    factor = game.model.action_factors[strategy.agent]
    actions = "|".join(factor.elements[i] for i in strategy.table)
    return f"{agent_display_name(game, strategy.agent)}:{actions}"


def player_strategy_label(game: WGame, ps: PlayerStrategy) -> str:
    return " ".join(strategy_label(game, s) for s in ps)


def count_player_strategies(game: WGame, player: str) -> int:
    n = 1
    for a in game.agents_of(player):
        n *= count_strategies(game.model, a)
    return n


def player_strategies(
    game: WGame, player: str, cap: int = DEFAULT_PROFILE_CAP
) -> list[PlayerStrategy]:
    """All strategies of a player (product over her agents), lexicographic in
    agent declaration order."""
    n = count_player_strategies(game, player)
    if n > cap:
        raise CapacityExceeded(n, cap, f"strategies of player {player!r}")
    per_agent = [
        list(enumerate_strategies(game.model, a, cap)) for a in game.agents_of(player)
    ]
    return [tuple(combo) for combo in itertools.product(*per_agent)]


def assemble_profile(
    game: WGame, by_player: Mapping[str, PlayerStrategy]
) -> StrategyProfile:
    """Build a full profile from per-player strategy tuples."""
    queues = {p: list(ps) for p, ps in by_player.items()}
    strategies = []
    for a in game.model.agents:
        p = game.players.assignment[a]
        if p not in queues or not queues[p]:
            raise ValueError(f"missing strategy for agent {a} of player {p!r}")
        s = queues[p].pop(0)
        if s.agent != a:
            raise ValueError(f"strategy for agent {s.agent} given where {a} expected")
        strategies.append(s)
    return StrategyProfile(tuple(strategies))


class Evaluator:
    """Memoizing normal-form evaluator bound to one game."""

    def __init__(self, game: WGame):
        self.game = game
        self.sequential_order = check_sequential(game.model)
        self._outcomes: dict[StrategyProfile, list[int]] = {}
        self._values: dict[tuple[str, StrategyProfile], float] = {}
        self.evaluations = 0

    def outcome_indices(self, profile: StrategyProfile) -> list[int]:
        """Configuration point index reached from each nature state, in
        nature enumeration order."""
        cached = self._outcomes.get(profile)
        if cached is not None:
            return cached
        if self.sequential_order is not None:
            table = solution_map(self.game.model, profile, order=self.sequential_order)
        else:
            table = solution_map(self.game.model, profile, brute_force=True)
        config = self.game.model.configuration
        indices = [config.point_index(outcome) for outcome in table.values()]
        self._outcomes[profile] = indices
        return indices

    def value(self, player: str, profile: StrategyProfile) -> float:
        key = (player, profile)
        cached = self._values.get(key)
        if cached is not None:
            return cached
        data = self.game.data[player]
        indices = self.outcome_indices(profile)
        composed = [data.objective.values[i] for i in indices]
        v = apply_risk(data.risk, composed, data.objective.sense)
        self._values[key] = v
        self.evaluations += 1
        return v


def normal_form_value(
    game: WGame, player: str, profile: StrategyProfile, evaluator: Evaluator | None = None
) -> float:
    if evaluator is None:
        evaluator = Evaluator(game)
    return evaluator.value(player, profile)


@dataclass(frozen=True)
class NormalFormMatrix:
    row_player: str
    col_player: str
    row_strategies: tuple[PlayerStrategy, ...]
    col_strategies: tuple[PlayerStrategy, ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    values: tuple[tuple[tuple[float, float], ...], ...]


def normal_form_matrix(
    game: WGame,
    cap: int = DEFAULT_PROFILE_CAP,
    evaluator: Evaluator | None = None,
) -> NormalFormMatrix:
    """Full two-player value matrix in deterministic enumeration order."""
    if len(game.players.players) != 2:
        raise NotTwoPlayers(len(game.players.players))
    row_player, col_player = game.players.players
    rows = player_strategies(game, row_player, cap)
    cols = player_strategies(game, col_player, cap)
    if len(rows) * len(cols) > cap:
        raise CapacityExceeded(len(rows) * len(cols), cap, "matrix cells")
    if evaluator is None:
        evaluator = Evaluator(game)
    values = []
    for r in rows:
        row_vals = []
        for c in cols:
            profile = assemble_profile(game, {row_player: r, col_player: c})
            row_vals.append(
                (evaluator.value(row_player, profile), evaluator.value(col_player, profile))
            )
        values.append(tuple(row_vals))
    return NormalFormMatrix(
        row_player,
        col_player,
        tuple(rows),
        tuple(cols),
        tuple(player_strategy_label(game, r) for r in rows),
        tuple(player_strategy_label(game, c) for c in cols),
        tuple(values),
    )


def matrix_to_csv(matrix: NormalFormMatrix) -> str:
    """Header row = column strategy labels; each cell is "v1;v2" with
    inf/-inf literals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(matrix.col_labels))
    for label, row in zip(matrix.row_labels, matrix.values):
        writer.writerow([label] + [f"{fmt_value(a)};{fmt_value(b)}" for a, b in row])
    return buf.getvalue()
