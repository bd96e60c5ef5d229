import numpy as np
import pytest

from src.graph import EdgeKey, build_instance, erdos_renyi
from src.policies import (
    ClairvoyantPolicy,
    EnumerationGuardError,
    HPathPolicy,
    MyopicPolicy,
    PlannedPath,
    PolicyParams,
    PolicySpecError,
    ScriptedPolicy,
    UcbPolicy,
    argmax_lowest_id,
    enumerate_paths,
    hp_best_plan,
    hp_decide,
    hp_neighborhood_search,
    hp_objective,
    make_policy,
    myopic_decide,
    parse_policy_spec,
    sc_decide,
    sc_label_setting,
    ucb_decide,
    walk_expected_gain
)
from src.oracle import OracleCaps, clairvoyant_exact
from src.traversal import (
    NonAdjacentMoveError,
    PolicyContext,
    expected_net_gain,
    run_episode,
    transition
)

from conftest import ENUMERATION, context_at_start, random_instances, walk_of


def flat_line(reward, cost):
    """a-b-c where every reward and every non-self cost takes one value"""
    instance = build_instance([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)], name='flat')
    return instance.with_truths(rewards={i: reward for i in range(3)},
                                costs={EdgeKey(0, 1): cost, EdgeKey(1, 2): cost})


@pytest.mark.parametrize('spec, descriptor', [
    ('M', 'M'),
    ('ucb:lambda=1', 'UCB:lambda=1'),
    ('UCB:lambda=0.5', 'UCB:lambda=0.5'),
    ('HP:alpha=1,H=3', 'HP:alpha=1,H=3,solver=search'),
    ('HP: alpha=10, H=5, solver=exhaustive', 'HP:alpha=10,H=5,solver=exhaustive'),
    ('SC:beta=100', 'SC:beta=100,V=2E'),
    ('SC:beta=10,V=7', 'SC:beta=10,V=7'),
])
def test_policy_spec_descriptors(spec, descriptor):
    params = parse_policy_spec(spec)
    assert params.descriptor == descriptor
    assert parse_policy_spec(descriptor) == params


@pytest.mark.parametrize('spec', ['X', 'UCB:mu=1', 'UCB:lambda=-1', 'HP:H=0', 'SC:beta=two', 'HP:solver=magic', 'M:lambda'])
def test_bad_policy_specs(spec):
    with pytest.raises(PolicySpecError):
        parse_policy_spec(spec)


def test_make_policy_kinds():
    assert isinstance(make_policy('M', ENUMERATION), MyopicPolicy)
    assert isinstance(make_policy('UCB:lambda=1', ENUMERATION), UcbPolicy)
    assert isinstance(make_policy('SC:beta=1', ENUMERATION), ClairvoyantPolicy)
    hp = make_policy(PolicyParams('HP', alpha=1.0, horizon=2), {'max_horizon': 4, 'max_nodes': 9})
    assert isinstance(hp, HPathPolicy)
    assert (hp.max_horizon, hp.max_nodes) == (4, 9)
    assert hp.descriptor == 'HP:alpha=1,H=2,solver=search'


def test_argmax_ties_go_to_lowest_id():
    assert argmax_lowest_id([3, 1, 2], lambda j: 1.0) == 1
    assert argmax_lowest_id([3, 1, 2], lambda j: float(j == 3)) == 3


def test_myopic_tie_goes_to_lowest_leaf(star_instance):
    ctx = context_at_start(star_instance)
    assert myopic_decide(ctx) == 1


def test_myopic_stays_when_everything_is_visited(star_instance):
    state = context_at_start(star_instance).state
    for leaf in (1, 0, 2, 0, 3, 0):
        state = transition(state, leaf, star_instance)
    ctx = PolicyContext(context_at_start(star_instance).view, state)
    assert ctx.current == 0
    assert myopic_decide(ctx) == 0


def test_ucb_rejects_negative_lambda(fixture_instance):
    with pytest.raises(ValueError):
        ucb_decide(context_at_start(fixture_instance), -1.0)


def test_ucb_variance_bonus(fixture_instance):
    ctx = context_at_start(fixture_instance)
    # a huge bonus picks the move with the largest net-gain variance
    choice = ucb_decide(ctx, 1e6)
    variances = {j: ctx.reward_variance(j) + ctx.cost_variance(0, j) for j in (1, 2, 3, 4)}
    assert variances[choice] == max(variances.values())


def _decision_trace(instance, policy, seed):
    log = run_episode(instance, policy, seed=seed)
    assert log.fault is None
    return log.decisions


def test_ucb_lambda_zero_matches_myopic():
    myopic = make_policy('M', ENUMERATION)
    ucb = make_policy('UCB:lambda=0', ENUMERATION)
    for instance in random_instances(20, sizes=(5, 8, 12)):
        for seed in range(5):
            assert _decision_trace(instance, ucb, seed) == _decision_trace(instance, myopic, seed)


def test_one_step_hpath_matches_myopic():
    myopic = make_policy('M', ENUMERATION)
    hp = make_policy('HP:alpha=0,H=1', ENUMERATION)
    for instance in random_instances(20, sizes=(5, 8, 12)):
        for seed in range(5):
            assert _decision_trace(instance, hp, seed) == _decision_trace(instance, myopic, seed)


def test_enumerate_paths_on_fixture(fixture_instance):
    ctx = context_at_start(fixture_instance)
    assert sorted(p[1] for p in enumerate_paths(ctx, 1)) == [0, 1, 2, 3, 4]

    plans = enumerate_paths(ctx, 2)
    # 8 two-step paths, 4 one-step stops and the stay plan
    assert len(plans) == 13
    assert (0, 0, 0) in plans
    assert (0, 3, 3) in plans and (0, 3, 2) in plans
    assert all(len(p) == 3 for p in plans)
    assert all(len(set(PlannedPath(p).real_nodes)) == len(PlannedPath(p).real_nodes) for p in plans)


def test_enumerate_paths_structure(line_instance, star_instance):
    assert enumerate_paths(context_at_start(line_instance), 2) == [(0, 0, 0), (0, 1, 1), (0, 1, 2)]
    assert enumerate_paths(context_at_start(star_instance), 2) == [(0, 0, 0), (0, 1, 1), (0, 2, 2), (0, 3, 3)]


def test_enumeration_guard():
    instance = erdos_renyi(13, 1.0, 0)
    ctx = context_at_start(instance)
    with pytest.raises(EnumerationGuardError):
        enumerate_paths(ctx, 7, max_horizon=6, max_nodes=12)
    with pytest.raises(ValueError):
        enumerate_paths(ctx, 0)


def test_planned_path_padding():
    plan = PlannedPath((0, 3, 3, 3))
    assert plan.real_nodes == (0, 3)
    assert plan.first_step == 3
    assert plan.horizon == 3
    assert PlannedPath((2, 2, 2)).is_stay


def test_hp_objective_terms(fixture_instance):
    ctx = context_at_start(fixture_instance)
    for j in (1, 2, 3, 4):
        assert hp_objective((0, j), ctx, 0.0) == pytest.approx(expected_net_gain(ctx, j))
    assert hp_objective((0, 0, 0), ctx, 10.0) == 0.0
    # node 3 repeats the start's features: only the edge is uncertain
    assert hp_objective((0, 2), ctx, 1.0) == pytest.approx(
        expected_net_gain(ctx, 2) + ctx.cost_variance(0, 2))
    assert hp_objective((0, 4, 1), ctx, 1.0) >= hp_objective((0, 4, 1), ctx, 0.0)
    with pytest.raises(NonAdjacentMoveError):
        hp_objective((0, 1, 3), ctx, 0.0)


def test_hp_objective_counts_revisits_as_costs(fixture_instance):
    ctx = context_at_start(fixture_instance)
    out_and_back = hp_objective((0, 3, 0), ctx, 0.0)
    assert out_and_back == pytest.approx(expected_net_gain(ctx, 3) - ctx.cost_mean(0, 3))


def test_neighborhood_search_bounded_by_exhaustive():
    rng = np.random.default_rng(3)
    for instance in random_instances(50, sizes=(5, 6, 7, 8)):
        ctx = context_at_start(instance)
        plan = hp_neighborhood_search(ctx, 1.0, 3, rng)
        best = hp_best_plan(ctx, 1.0, 3)
        assert plan.value <= best.value + 1e-9
        assert plan.value >= plan.history[0]
        assert all(b > a for a, b in zip(plan.history, plan.history[1:]))
        assert plan.value == pytest.approx(hp_objective(plan, ctx, 1.0))
        real = plan.real_nodes
        assert len(set(real)) == len(real)
        assert all(instance.is_adjacent(u, v) for u, v in zip(plan.nodes, plan.nodes[1:]))


def test_neighborhood_search_keeps_the_only_path(line_instance):
    plan = hp_neighborhood_search(context_at_start(line_instance), 1.0, 2)
    assert plan.nodes == (0, 1, 2)
    assert plan.history == (plan.value,)


def test_hp_plans_stop_instead_of_detouring(fixture_instance):
    view = context_at_start(fixture_instance).view
    state = context_at_start(fixture_instance).state
    for j in walk_of(fixture_instance, '1-3-5-2')[1:]:
        state = transition(state, j, fixture_instance)
    ctx = PolicyContext(view, state)
    # only node 4 is left: go 2-1-4 and stop there rather than run on to 3
    assert hp_best_plan(ctx, 1.0, 3).real_nodes == (1, 0, 3)
    assert hp_decide(ctx, 1.0, 3, solver='exhaustive') == 0
    plan = hp_neighborhood_search(ctx, 1.0, 3)
    assert plan.real_nodes == (1, 0, 3)
    assert plan.nodes == (1, 0, 3, 3)


def test_neighborhood_search_drops_losing_steps():
    instance = flat_line(10.0, 1.0)
    ctx = context_at_start(instance)
    state = ctx.state
    for j in (1, 2, 1):
        state = transition(state, j, instance)
    back = PolicyContext(ctx.view, state)
    # everything is collected and observed; from b only the stay plan pays
    assert hp_neighborhood_search(back, 0.0, 2).is_stay
    assert hp_best_plan(back, 0.0, 2).is_stay


def test_hp_decide_stays_on_losing_plans():
    instance = flat_line(0.0, 5.0)
    ctx = context_at_start(instance)
    assert hp_decide(ctx, 0.0, 2) == 0
    assert hp_decide(ctx, 0.0, 2, solver='exhaustive') == 0
    with pytest.raises(ValueError):
        hp_decide(ctx, 0.0, 2, solver='magic')


def test_exhaustive_ties_use_the_stream(star_instance):
    ctx = context_at_start(star_instance)
    assert hp_best_plan(ctx, 0.0, 2).nodes == (0, 1, 1)
    picks = {hp_best_plan(ctx, 0.0, 2, np.random.default_rng(seed)).nodes for seed in range(30)}
    assert picks == {(0, 1, 1), (0, 2, 2), (0, 3, 3)}


def test_walk_expected_gain(fixture_instance):
    ctx = context_at_start(fixture_instance)
    assert walk_expected_gain([0], ctx) == 0.0
    assert walk_expected_gain([0, 4], ctx) == pytest.approx(expected_net_gain(ctx, 4))
    revisit = walk_expected_gain([0, 3, 0], ctx)
    assert revisit == pytest.approx(expected_net_gain(ctx, 3) - ctx.cost_mean(0, 3))
    with pytest.raises(ValueError):
        walk_expected_gain([], ctx)
    with pytest.raises(ValueError):
        walk_expected_gain([1, 0], ctx)
    with pytest.raises(NonAdjacentMoveError):
        walk_expected_gain([0, 1, 3], ctx)


def test_walk_expected_gain_under_known_truth(fixture_instance):
    state = context_at_start(fixture_instance).state
    for j in walk_of(fixture_instance, '1-4-1-2-5-3')[1:]:
        state = transition(state, j, fixture_instance)
    for j in walk_of(fixture_instance, '3-1')[1:]:
        state = transition(state, j, fixture_instance)
    view = context_at_start(fixture_instance).view
    # every feature observed: posterior means are the truths; replay from the start as if unvisited
    informed = PolicyContext(view, type(state)(0, frozenset({0}), state.belief, 0))
    assert walk_expected_gain(walk_of(fixture_instance, '1-4-1-2-5-3'), informed) == pytest.approx(219.60, abs=0.01)


def test_label_setting_on_flat_line():
    ctx = context_at_start(flat_line(10.0, 1.0))
    walk, value = sc_label_setting(ctx, 1, np.random.default_rng(0))
    assert walk == [0, 1, 2]
    assert value == pytest.approx(18.0)
    assert sc_decide(ctx, 1, np.random.default_rng(0)) == 1


def test_label_setting_stays_when_nothing_pays():
    ctx = context_at_start(flat_line(0.0, 1.0))
    assert sc_label_setting(ctx, 5, np.random.default_rng(0)) == ([0], 0.0)
    assert sc_decide(ctx, 5, np.random.default_rng(0)) == 0


def test_label_setting_single_node():
    instance = build_instance([(0, 0)], [], name='single')
    ctx = context_at_start(instance)
    assert sc_decide(ctx, 3) == 0
    assert myopic_decide(ctx) == 0
    assert hp_decide(ctx, 1.0, 2) == 0


def test_label_setting_value_is_recomputed(fixture_instance):
    ctx = context_at_start(fixture_instance)
    for seed in range(5):
        walk, value = sc_label_setting(ctx, 3, np.random.default_rng(seed))
        assert walk[0] == 0
        assert value == walk_expected_gain(walk, ctx)
        assert value >= 0.0


def test_label_setting_monotone_in_iterations():
    for instance in random_instances(10, sizes=(6, 8)):
        ctx = context_at_start(instance)
        for seed in range(3):
            values = [sc_label_setting(ctx, beta, np.random.default_rng(seed))[1] for beta in (1, 3, 10)]
            assert values[0] <= values[1] <= values[2]


def test_label_setting_respects_walk_cap(fixture_instance):
    ctx = context_at_start(fixture_instance)
    walk, _ = sc_label_setting(ctx, 5, np.random.default_rng(1), walk_cap=2)
    assert len(walk) <= 3


def test_scripted_policy(fixture_instance):
    with pytest.raises(ValueError):
        ScriptedPolicy([])
    policy = ScriptedPolicy([0, 3])
    assert policy.descriptor == 'W:0-3'
    assert policy.params is None
    log = run_episode(fixture_instance, policy)
    assert log.decisions == [3, 3]


@pytest.mark.parametrize('spec', ['M', 'UCB:lambda=1', 'UCB:lambda=10', 'HP:alpha=1,H=3',
                                  'HP:alpha=1,H=3,solver=exhaustive', 'SC:beta=10'])
def test_episodes_never_beat_the_oracle(fixture_instance, spec):
    optimum = clairvoyant_exact(fixture_instance, OracleCaps()).value
    policy = make_policy(spec, ENUMERATION)
    for seed in range(3):
        assert run_episode(fixture_instance, policy, seed=seed).total <= optimum + 1e-6


@pytest.mark.slow
def test_planning_policies_on_fixture(fixture_instance):
    optimum = clairvoyant_exact(fixture_instance, OracleCaps()).value
    sc = max(run_episode(fixture_instance, make_policy(f'SC:beta={beta}', ENUMERATION), seed=seed).total
             for beta in (1, 10, 100) for seed in range(10))
    hp_policy = make_policy('HP:alpha=1,H=3,solver=exhaustive', ENUMERATION)
    hp = max(run_episode(fixture_instance, hp_policy, seed=seed).total for seed in range(10))
    assert 214.0 <= sc <= optimum + 1e-6
    assert 210.0 <= hp <= optimum + 1e-6


@pytest.mark.slow
def test_exhaustive_hpath_episodes_stop_before_the_horizon():
    policy = make_policy('HP:alpha=1,H=3,solver=exhaustive', ENUMERATION)
    for k in range(20):
        instance = erdos_renyi(12, 0.3, k)
        log = run_episode(instance, policy, seed=k)
        assert log.fault is None
        assert log.steps < instance.horizon
        assert log.records[-1].target == log.records[-1].source
