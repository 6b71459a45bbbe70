"""Best responses, Nash equilibria, and leader-follower (Stackelberg) search.

Everything here is exhaustive enumeration with hard caps and deterministic
ordering: ties are all included, in enumeration-index order, and every
reported profile is re-verified against its defining condition before
emission.  Extended-real values participate in the argmin/argmax directly; a
best-response set whose every member sits at the adverse infinity is returned
in full with a diagnostic flag.

Optimistic, pessimistic and theta leader anticipation are interpreted with
respect to the leader's objective sense: optimistic picks the follower best
response most favorable to the leader (sup of a payoff, inf of a cost),
pessimistic the least favorable, and theta the convex combination of the two.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CapacityExceeded, EmptyFollowerResponse, IndeterminateValue
from .model import StrategyProfile
from .normal_form import (
    DEFAULT_PROFILE_CAP,
    Evaluator,
    PlayerStrategy,
    assemble_profile,
    player_strategies,
)
from .preferences import Sense, WGame, _adverse_tail_mean, _expectation

# A joint assignment for a group of players, in declaration order.
GroupProfile = tuple[tuple[str, PlayerStrategy], ...]


@dataclass(frozen=True)
class StackelbergMode:
    """Leader anticipation rule over the followers' best-response set.

    ``theta`` blends pessimistic and optimistic and collapses to those modes
    at 0 and 1, so equivalent modes compare (and render) equal.  ``risk``
    applies a functional to the best-response-indexed value table: one of
    "expectation-uniform", "worst-case", or ("cvar", alpha), uniform mass on
    the set.
    """

    kind: str
    theta: float | None = None
    risk: object = None

    def __post_init__(self):
        if self.kind not in ("optimistic", "pessimistic", "theta", "leader-risk"):
            raise ValueError(f"unknown Stackelberg mode {self.kind!r}")
        if self.kind == "theta":
            if self.theta is None or not 0 <= self.theta <= 1:
                raise ValueError("theta must lie in [0, 1]")
            if self.theta == 1:
                object.__setattr__(self, "kind", "optimistic")
                object.__setattr__(self, "theta", None)
            elif self.theta == 0:
                object.__setattr__(self, "kind", "pessimistic")
                object.__setattr__(self, "theta", None)
        if self.kind == "leader-risk":
            ok = self.risk in ("expectation-uniform", "worst-case") or (
                isinstance(self.risk, tuple)
                and len(self.risk) == 2
                and self.risk[0] == "cvar"
                and 0 < self.risk[1] <= 1
            )
            if not ok:
                raise ValueError(f"unknown leader-risk functional {self.risk!r}")

    def describe(self) -> str:
        if self.kind == "theta":
            return f"theta={format(self.theta, '.12g')}"
        if self.kind == "leader-risk":
            return f"leader-risk({self.risk})"
        return self.kind


OPTIMISTIC = StackelbergMode("optimistic")
PESSIMISTIC = StackelbergMode("pessimistic")


def theta_mode(theta: float) -> StackelbergMode:
    return StackelbergMode("theta", theta=theta)


def leader_risk_mode(risk) -> StackelbergMode:
    return StackelbergMode("leader-risk", risk=risk)


@dataclass(frozen=True)
class BestResponseSet:
    player: str
    context: GroupProfile
    strategies: tuple[PlayerStrategy, ...]
    value: float
    all_adverse: bool = False


@dataclass(frozen=True)
class Diagnostics:
    profiles_enumerated: int = 0
    ties: int = 0
    infeasible_leader_profiles: int = 0
    all_adverse: bool = False


@dataclass(frozen=True)
class ProfileRecord:
    by_player: GroupProfile
    profile: StrategyProfile
    values: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class EquilibriumReport:
    kind: str
    profiles: tuple[ProfileRecord, ...]
    diagnostics: Diagnostics
    mode: StackelbergMode | None = None


def _context_key(game: WGame, player: str, assignment: Mapping[str, PlayerStrategy]):
    return tuple((q, assignment[q]) for q in game.players.players if q != player)


def best_responses(
    game: WGame,
    player: str,
    others: Mapping[str, PlayerStrategy],
    evaluator: Evaluator | None = None,
    cap: int = DEFAULT_PROFILE_CAP,
) -> BestResponseSet:
    """Exhaustive argmin (cost) / argmax (payoff) of the player's normal-form
    value against a fixed context, ties included in enumeration order."""
    expected = set(game.players.players) - {player}
    if set(others) != expected:
        raise ValueError(
            f"context must fix exactly the other players {sorted(expected)}"
        )
    if evaluator is None:
        evaluator = Evaluator(game)
    sense = game.data[player].objective.sense
    best_value: float | None = None
    best: list[PlayerStrategy] = []
    for cand in player_strategies(game, player, cap):
        profile = assemble_profile(game, {**others, player: cand})
        v = evaluator.value(player, profile)
        if best_value is None or sense.better(v, best_value):
            best_value = v
            best = [cand]
        elif v == best_value:
            best.append(cand)
    assert best_value is not None
    return BestResponseSet(
        player,
        tuple((q, others[q]) for q in game.players.players if q != player),
        tuple(best),
        best_value,
        all_adverse=(best_value == sense.adverse),
    )


def _profile_space_size(game: WGame, players: Sequence[str], cap: int) -> int:
    from .normal_form import count_player_strategies

    total = 1
    for p in players:
        total *= count_player_strategies(game, p)
    if total > cap:
        raise CapacityExceeded(total, cap, f"profiles of players {list(players)}")
    return total


class _Session:
    """Shared caches for one equilibrium computation."""

    def __init__(self, game: WGame, evaluator: Evaluator | None, cap: int):
        self.game = game
        self.evaluator = evaluator if evaluator is not None else Evaluator(game)
        self.cap = cap
        self._spaces: dict[str, list[PlayerStrategy]] = {}
        self._best: dict = {}
        self._followers_nash: dict = {}

    def space(self, player: str) -> list[PlayerStrategy]:
        if player not in self._spaces:
            self._spaces[player] = player_strategies(self.game, player, self.cap)
        return self._spaces[player]

    def value(self, player: str, assignment: Mapping[str, PlayerStrategy]) -> float:
        profile = assemble_profile(self.game, assignment)
        return self.evaluator.value(player, profile)

    def best_value(self, player: str, assignment: Mapping[str, PlayerStrategy]) -> float:
        """Optimal value the player can reach against the fixed others."""
        key = (player, _context_key(self.game, player, assignment))
        if key in self._best:
            return self._best[key]
        sense = self.game.data[player].objective.sense
        best: float | None = None
        for cand in self.space(player):
            v = self.value(player, {**assignment, player: cand})
            if best is None or sense.better(v, best):
                best = v
        assert best is not None
        self._best[key] = best
        return best

    def followers_nash(self, leaders: Mapping[str, PlayerStrategy]) -> tuple[GroupProfile, ...]:
        key = tuple((ld, leaders[ld]) for ld in self.game.leaders)
        if key in self._followers_nash:
            return self._followers_nash[key]
        followers = self.game.followers
        _profile_space_size(self.game, followers, self.cap)
        spaces = [self.space(f) for f in followers]
        result: list[GroupProfile] = []
        for combo in itertools.product(*spaces):
            assignment = dict(leaders)
            assignment.update(zip(followers, combo))
            if all(
                self.value(f, assignment) == self.best_value(f, assignment)
                for f in followers
            ):
                result.append(tuple(zip(followers, combo)))
        out = tuple(result)
        self._followers_nash[key] = out
        return out

    def leader_value(
        self, leader: str, leaders: Mapping[str, PlayerStrategy], mode: StackelbergMode
    ) -> float:
        responses = self.followers_nash(leaders)
        if not responses:
            raise EmptyFollowerResponse(dict(leaders))
        sense = self.game.data[leader].objective.sense
        values = []
        for fp in responses:
            assignment = dict(leaders)
            assignment.update(fp)
            values.append(self.value(leader, assignment))
        return _anticipate(values, sense, mode)


def _theta_combine(theta: float, optimistic: float, pessimistic: float) -> float:
    if math.isinf(optimistic) or math.isinf(pessimistic):
        if optimistic == pessimistic:
            return optimistic
        if math.isinf(optimistic) and math.isinf(pessimistic):
            raise IndeterminateValue(
                "theta combination of opposite infinities is undefined"
            )
        return optimistic if math.isinf(optimistic) else pessimistic
    return theta * optimistic + (1 - theta) * pessimistic


def _anticipate(values: list[float], sense: Sense, mode: StackelbergMode) -> float:
    if mode.kind == "optimistic":
        return sense.best(values)
    if mode.kind == "pessimistic":
        return sense.worst(values)
    if mode.kind == "theta":
        assert mode.theta is not None
        return _theta_combine(mode.theta, sense.best(values), sense.worst(values))
    # leader-risk: uniform mass over the best-response set
    pairs = [(v, 1.0 / len(values)) for v in values]
    if mode.risk == "expectation-uniform":
        return _expectation(pairs)
    if mode.risk == "worst-case":
        return sense.worst(values)
    assert isinstance(mode.risk, tuple)
    return _adverse_tail_mean(pairs, mode.risk[1], sense)


def nash_equilibria(
    game: WGame,
    evaluator: Evaluator | None = None,
    cap: int = DEFAULT_PROFILE_CAP,
) -> EquilibriumReport:
    """All profiles where each player's strategy lies in her best-response
    set, in enumeration order."""
    session = _Session(game, evaluator, cap)
    players = game.players.players
    total = _profile_space_size(game, players, cap)
    spaces = [session.space(p) for p in players]
    records: list[ProfileRecord] = []
    all_adverse = False
    for combo in itertools.product(*spaces):
        assignment = dict(zip(players, combo))
        is_eq = True
        for p in players:
            v = session.value(p, assignment)
            best = session.best_value(p, assignment)
            if best == game.data[p].objective.sense.adverse:
                all_adverse = True
            if v != best:
                is_eq = False
                break
        if is_eq and _verify_no_improving_deviation(session, assignment):
            profile = assemble_profile(game, assignment)
            records.append(
                ProfileRecord(
                    tuple(zip(players, combo)),
                    profile,
                    tuple((p, session.value(p, assignment)) for p in players),
                )
            )
    diag = Diagnostics(
        profiles_enumerated=total,
        ties=max(0, len(records) - 1),
        all_adverse=all_adverse,
    )
    return EquilibriumReport("nash", tuple(records), diag)


def _verify_no_improving_deviation(
    session: _Session, assignment: Mapping[str, PlayerStrategy]
) -> bool:
    """Independent re-check: no unilateral deviation strictly improves."""
    game = session.game
    for p in game.players.players:
        sense = game.data[p].objective.sense
        v = session.value(p, assignment)
        for cand in session.space(p):
            if sense.better(session.value(p, {**assignment, p: cand}), v):
                return False
    return True


def followers_nash(
    game: WGame,
    leaders_profile: Mapping[str, PlayerStrategy],
    evaluator: Evaluator | None = None,
    cap: int = DEFAULT_PROFILE_CAP,
) -> tuple[GroupProfile, ...]:
    """All follower joint profiles where each follower best-responds to the
    other followers and the fixed leaders."""
    _require_roles(game)
    if set(leaders_profile) != set(game.leaders):
        raise ValueError("leaders_profile must fix exactly the declared leaders")
    session = _Session(game, evaluator, cap)
    return session.followers_nash(leaders_profile)


def leader_value(
    game: WGame,
    leader: str,
    leaders_profile: Mapping[str, PlayerStrategy],
    mode: StackelbergMode,
    evaluator: Evaluator | None = None,
    cap: int = DEFAULT_PROFILE_CAP,
) -> float:
    """The leader's anticipated value at a leaders' profile under the mode."""
    _require_roles(game)
    if leader not in game.leaders:
        raise ValueError(f"{leader!r} is not a declared leader")
    session = _Session(game, evaluator, cap)
    return session.leader_value(leader, leaders_profile, mode)


def _require_roles(game: WGame):
    if not game.leaders:
        raise ValueError("game declares no leaders")


def _stackelberg_in_session(
    session: _Session, mode: StackelbergMode
) -> tuple[tuple[GroupProfile, ...], Diagnostics]:
    game = session.game
    leaders = game.leaders
    _profile_space_size(game, leaders, session.cap)
    spaces = [session.space(ld) for ld in leaders]
    enumerated = 0
    infeasible = 0

    if len(leaders) == 1:
        ld = leaders[0]
        sense = game.data[ld].objective.sense
        evaluated: list[tuple[PlayerStrategy, float]] = []
        for cand in spaces[0]:
            enumerated += 1
            try:
                v = session.leader_value(ld, {ld: cand}, mode)
            except EmptyFollowerResponse:
                infeasible += 1
                continue
            evaluated.append((cand, v))
        if not evaluated:
            raise EmptyFollowerResponse({})
        best = sense.best(v for _, v in evaluated)
        chosen = tuple(((ld, cand),) for cand, v in evaluated if v == best)
        diag = Diagnostics(
            profiles_enumerated=enumerated,
            ties=max(0, len(chosen) - 1),
            infeasible_leader_profiles=infeasible,
        )
        return chosen, diag

    result: list[GroupProfile] = []
    for combo in itertools.product(*spaces):
        enumerated += 1
        current = dict(zip(leaders, combo))
        if not session.followers_nash(current):
            infeasible += 1
            continue
        is_eq = True
        for ld in leaders:
            sense = game.data[ld].objective.sense
            best: float | None = None
            mine: float | None = None
            for cand in session.space(ld):
                try:
                    v = session.leader_value(ld, {**current, ld: cand}, mode)
                except EmptyFollowerResponse:
                    continue
                if best is None or sense.better(v, best):
                    best = v
                if cand == current[ld]:
                    mine = v
            if mine is None or mine != best:
                is_eq = False
                break
        if is_eq:
            result.append(tuple(zip(leaders, combo)))
    if not result and infeasible == enumerated and enumerated > 0:
        raise EmptyFollowerResponse({})
    diag = Diagnostics(
        profiles_enumerated=enumerated,
        ties=max(0, len(result) - 1),
        infeasible_leader_profiles=infeasible,
    )
    return tuple(result), diag


def stackelberg_strategies(
    game: WGame,
    mode: StackelbergMode,
    evaluator: Evaluator | None = None,
    cap: int = DEFAULT_PROFILE_CAP,
) -> tuple[tuple[GroupProfile, ...], Diagnostics]:
    """Leader profiles where each leader's strategy is optimal for her
    anticipated value given the other leaders fixed (arg-best of
    :func:`leader_value` for a single leader, Nash among leaders otherwise).

    Leader profiles whose followers have no joint best response are excluded
    from the arg-best and counted in the diagnostics rather than silently
    skipped; if every profile is infeasible, :class:`EmptyFollowerResponse`
    is raised.
    """
    _require_roles(game)
    session = _Session(game, evaluator, cap)
    return _stackelberg_in_session(session, mode)


def nash_stackelberg(
    game: WGame,
    mode: StackelbergMode,
    evaluator: Evaluator | None = None,
    cap: int = DEFAULT_PROFILE_CAP,
) -> EquilibriumReport:
    """All pairs (Stackelberg leaders' profile, followers' joint best
    response), with per-player values."""
    _require_roles(game)
    session = _Session(game, evaluator, cap)
    leader_set, diag = _stackelberg_in_session(session, mode)
    records: list[ProfileRecord] = []
    players = game.players.players
    for leaders_profile in leader_set:
        leaders_map = dict(leaders_profile)
        for fp in session.followers_nash(leaders_map):
            assignment = dict(leaders_map)
            assignment.update(fp)
            profile = assemble_profile(game, assignment)
            records.append(
                ProfileRecord(
                    tuple((p, assignment[p]) for p in players),
                    profile,
                    tuple((p, session.value(p, assignment)) for p in players),
                )
            )
    return EquilibriumReport("nash-stackelberg", tuple(records), diag, mode=mode)
