"""Model construction, strategies, sequential check, playability, solution map."""

import itertools
import random

import pytest

from infogames import (
    AgentId,
    CapacityExceeded,
    NotPlayable,
    SelfInformationViolation,
    Strategy,
    StrategyProfile,
    build_wmodel,
    check_playability,
    check_sequential,
    count_strategies,
    cylinder_partition,
    enumerate_strategies,
    is_measurable,
    make_profile,
    refines,
    solution_map,
)
from infogames.spaces import Partition
from conftest import (
    copy_strategy,
    flip_strategy,
    mutual_observation_model,
    random_profile,
    random_sequential_model,
    small_factor,
)


def oracle_solution_table(model, profile):
    """Independent fixed-point oracle: enumerate every action tuple per
    nature state and keep the ones solving u = strategy(nature, u)."""
    sizes = [model.action_factors[a].size for a in model.agents]
    by_agent = {s.agent: s for s in profile.strategies}
    table = {}
    for omega in model.nature_points():
        found = []
        for actions in itertools.product(*(range(s) for s in sizes)):
            config = omega + actions
            idx = model.configuration.point_index(config)
            if all(
                by_agent[a].table[model.info[a].atom_of[idx]] == actions[i]
                for i, a in enumerate(model.agents)
            ):
                found.append(config)
        table[omega] = found
    return table


class TestBuild:
    def test_two_agent_observation_chain_is_valid(self):
        w = small_factor("w", 2)
        a, b = AgentId("a"), AgentId("b")
        ua, ub = small_factor("ua", 2, "action"), small_factor("ub", 2, "action")
        model = build_wmodel(
            [w], [a, b], {a: ua, b: ub}, {a: (), b: ("ua",)}
        )
        assert model.configuration.size == 8
        assert model.info[a].atom_count == 1
        assert model.info[b].atom_count == 2

    def test_observing_own_action_rejected(self):
        w = small_factor("w", 2)
        a = AgentId("a")
        ua = small_factor("ua", 2, "action")
        with pytest.raises(SelfInformationViolation) as exc:
            build_wmodel([w], [a], {a: ua}, {a: ("ua",)})
        pa, pb = exc.value.witness
        # The witness differs only in the agent's own coordinate.
        assert pa[0] == pb[0] and pa[1] != pb[1]

    def test_explicit_partition_with_self_information_rejected(self):
        w = small_factor("w", 1)
        a = AgentId("a")
        ua = small_factor("ua", 2, "action")
        bad = build_wmodel([w], [a], {a: ua}, {a: ()})  # to get the space
        part = Partition.from_labels(bad.configuration, [0, 1])
        with pytest.raises(SelfInformationViolation):
            build_wmodel([w], [a], {a: ua}, {a: part})

    def test_leader_follower_info_structure_valid(self):
        # Leader sees his type; follower sees his own type and the leader's
        # move.
        tl = small_factor("tl", 2, "nature-type")
        tf = small_factor("tf", 2, "nature-type")
        l, f = AgentId("l"), AgentId("f")
        ul, uf = small_factor("ul", 2, "action"), small_factor("uf", 2, "action")
        model = build_wmodel(
            [tl, tf], [l, f], {l: ul, f: uf}, {l: ("tl",), f: ("tf", "ul")}
        )
        assert check_sequential(model) == (l, f)

    def test_size_one_action_factor_never_violates_self_information(self):
        w = small_factor("w", 2)
        a = AgentId("a")
        ua = small_factor("ua", 1, "action")
        model = build_wmodel([w], [a], {a: ua}, {a: ("ua",)})
        assert model.info[a].atom_count == 1


class TestStrategies:
    def test_trivial_info_strategies_are_constant(self):
        w = small_factor("w", 2)
        a = AgentId("a")
        ua = small_factor("ua", 3, "action")
        model = build_wmodel([w], [a], {a: ua}, {a: ()})
        strategies = list(enumerate_strategies(model, a))
        assert count_strategies(model, a) == 3
        assert [s.table for s in strategies] == [(0,), (1,), (2,)]

    def test_two_atoms_two_actions_gives_four(self):
        w = small_factor("w", 2)
        a = AgentId("a")
        ua = small_factor("ua", 2, "action")
        model = build_wmodel([w], [a], {a: ua}, {a: ("w",)})
        strategies = list(enumerate_strategies(model, a))
        assert len(strategies) == 4
        assert [s.table for s in strategies] == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_count_matches_formula_up_to_four(self):
        for k in range(1, 5):
            for m_size in range(1, 5):
                w = small_factor("w", m_size)
                a = AgentId("a")
                ua = small_factor("ua", k, "action")
                model = build_wmodel([w], [a], {a: ua}, {a: ("w",)})
                m = model.info[a].atom_count
                assert m == m_size
                assert count_strategies(model, a) == k ** m
                assert len(list(enumerate_strategies(model, a))) == k ** m

    def test_cap_guard(self):
        w = small_factor("w", 4)
        a = AgentId("a")
        ua = small_factor("ua", 4, "action")
        model = build_wmodel([w], [a], {a: ua}, {a: ("w",)})
        with pytest.raises(CapacityExceeded):
            list(enumerate_strategies(model, a, cap=100))

    def test_strategies_are_measurable_by_construction(self, rng):
        model = random_sequential_model(random.Random(7))
        profile = random_profile(model, random.Random(8))
        for s in profile.strategies:
            part = model.info[s.agent]
            induced = [s.table[part.atom_of[i]] for i in range(part.space.size)]
            assert is_measurable(induced, part)

    def test_make_profile_validates(self):
        model = mutual_observation_model()
        a, b = model.agents
        with pytest.raises(ValueError):
            make_profile(model, [Strategy(a, (0, 1))])
        with pytest.raises(ValueError):
            make_profile(model, [Strategy(a, (0,)), Strategy(b, (0, 1))])


class TestSequential:
    def test_leader_follower_ordering(self):
        tl = small_factor("tl", 2, "nature-type")
        l, f = AgentId("l"), AgentId("f")
        ul, uf = small_factor("ul", 2, "action"), small_factor("uf", 2, "action")
        model = build_wmodel([tl], [l, f], {l: ul, f: uf}, {l: ("tl",), f: ("ul",)})
        assert check_sequential(model) == (l, f)

    def test_mutual_observation_has_no_ordering(self):
        model = mutual_observation_model()
        a, b = model.agents
        # Exhaustive check of both orderings.
        nature_ids = [f.id for f in model.nature_factors]
        for first, second in ((a, b), (b, a)):
            first_cyl = cylinder_partition(model.configuration, nature_ids)
            assert not refines(first_cyl, model.info[first])
        assert check_sequential(model) is None

    def test_interleaved_stage_ordering(self):
        # Leader then follower within each stage; stage 2 agents see stage 1
        # decisions.
        tl = small_factor("tl", 2, "nature-type")
        agents = [AgentId("l", 1), AgentId("f", 1), AgentId("l", 2), AgentId("f", 2)]
        acts = {a: small_factor(f"u{a.player}{a.stage}", 2, "action") for a in agents}
        info = {
            agents[0]: ("tl",),
            agents[1]: ("ul1",),
            agents[2]: ("tl", "ul1", "uf1"),
            agents[3]: ("ul1", "uf1", "ul2"),
        }
        model = build_wmodel([tl], agents, acts, info)
        order = check_sequential(model)
        assert order == (agents[0], agents[1], agents[2], agents[3])

    def test_greedy_tie_break_uses_declaration_order(self):
        w = small_factor("w", 2)
        a, b = AgentId("a"), AgentId("b")
        ua, ub = small_factor("ua", 2, "action"), small_factor("ub", 2, "action")
        model = build_wmodel([w], [a, b], {a: ua, b: ub}, {a: (), b: ()})
        assert check_sequential(model) == (a, b)


class TestPlayability:
    def test_sequential_models_short_circuit(self):
        model = random_sequential_model(random.Random(3))
        report = check_playability(model, "all")
        assert report.playable
        assert report.mode == "sequential"
        assert report.profiles_checked == 0
        assert report.sequential_order is not None

    def test_copy_copy_has_two_fixed_points(self):
        model = mutual_observation_model()
        a, b = model.agents
        profile = StrategyProfile((copy_strategy(model, a), copy_strategy(model, b)))
        report = check_playability(model, [profile])
        assert not report.playable
        (failure,) = report.failures
        assert failure.solution_count == 2
        assert {sol[1:] for sol in failure.solutions} == {(0, 0), (1, 1)}

    def test_copy_flip_has_no_fixed_point(self):
        model = mutual_observation_model()
        a, b = model.agents
        profile = StrategyProfile((copy_strategy(model, a), flip_strategy(model, b)))
        report = check_playability(model, [profile])
        assert not report.playable
        (failure,) = report.failures
        assert failure.solution_count == 0

    def test_all_mode_enumerates_when_not_sequential(self):
        model = mutual_observation_model()
        report = check_playability(model, "all")
        assert not report.playable
        assert report.mode == "all"
        assert report.profiles_checked == 16  # 4 strategies each

    def test_sample_mode_is_deterministic(self):
        model = mutual_observation_model()
        r1 = check_playability(model, (5, 42))
        r2 = check_playability(model, (5, 42))
        assert r1 == r2
        assert r1.profiles_checked == 5

    def test_sequential_cross_validated_by_enumeration(self):
        # On brute-force-able scales, a sequential verdict never hides a
        # counterexample.
        for seed in range(10):
            model = random_sequential_model(random.Random(seed))
            order = check_sequential(model)
            assert order is not None
            total = 1
            for a in model.agents:
                total *= count_strategies(model, a)
            if total > 2000:
                continue
            from infogames.model import _all_profiles

            for profile in _all_profiles(model, 10**6):
                for omega, sols in oracle_solution_table(model, profile).items():
                    assert len(sols) == 1


class TestSolutionMap:
    def test_constant_single_agent(self):
        w = small_factor("w", 3)
        a = AgentId("a")
        ua = small_factor("ua", 2, "action")
        model = build_wmodel([w], [a], {a: ua}, {a: ()})
        profile = StrategyProfile((Strategy(a, (1,)),))
        table = solution_map(model, profile)
        assert table == {(i,): (i, 1) for i in range(3)}

    def test_forward_equals_bruteforce_on_random_models(self):
        for seed in range(40):
            model = random_sequential_model(random.Random(100 + seed))
            profile = random_profile(model, random.Random(200 + seed))
            fwd = solution_map(model, profile)
            bf = solution_map(model, profile, brute_force=True)
            assert fwd == bf
            oracle = oracle_solution_table(model, profile)
            for omega, config in fwd.items():
                assert oracle[omega] == [config]

    def test_fixed_point_identity_holds(self):
        for seed in range(20):
            model = random_sequential_model(random.Random(300 + seed))
            profile = random_profile(model, random.Random(400 + seed))
            by_agent = {s.agent: s for s in profile.strategies}
            for omega, config in solution_map(model, profile).items():
                idx = model.configuration.point_index(config)
                for a in model.agents:
                    chosen = config[model.agent_axis(a)]
                    assert by_agent[a].table[model.info[a].atom_of[idx]] == chosen

    def test_not_playable_raised(self):
        model = mutual_observation_model()
        a, b = model.agents
        profile = StrategyProfile((copy_strategy(model, a), flip_strategy(model, b)))
        with pytest.raises(NotPlayable) as exc:
            solution_map(model, profile)
        assert exc.value.count == 0


class TestSelfInformationCoarsening:
    def test_coarsening_preserves_validity(self):
        # Merging atoms of a valid information field can only hide
        # information, never reveal the agent's own action.
        rng = random.Random(5)
        for seed in range(10):
            model = random_sequential_model(random.Random(500 + seed))
            for agent in model.agents:
                part = model.info[agent]
                if part.atom_count < 2:
                    continue
                # Random coarsening: merge atoms through a random surjection.
                target = rng.randint(1, part.atom_count - 1)
                merge = [rng.randrange(target) for _ in range(part.atom_count)]
                labels = [merge[part.atom_of[i]] for i in range(part.space.size)]
                coarser = Partition.from_labels(part.space, labels)
                assert refines(part, coarser)
                build_wmodel(
                    model.nature_factors,
                    model.agents,
                    model.action_factors,
                    {**model.info, agent: coarser},
                )
