import csv

import pytest

from src.belief import BeliefSettings, BeliefState
from src.graph import EdgeKey
from src.policies import MyopicPolicy, ScriptedPolicy, make_policy
from src.traversal import (
    InstanceView,
    NonAdjacentMoveError,
    PolicyContext,
    epoch_rng,
    expected_net_gain,
    initial_state,
    net_gain_variance,
    realized_net_gain,
    run_episode,
    total_contribution,
    transition,
    walk_total
)

from conftest import ENUMERATION, context_at_start, random_instances, walk_of

SCRIPTED_TOTALS = {
    '1-5-3-2': 175.16,
    '1-3-5-2': 177.03,
    '1-4-1-3-5-2': 214.70,
    '1-4-3-5-2': 214.75,
    '1-4-1-2-5-3': 219.60,
}


def test_initial_state_observes_start(fixture_instance):
    state = initial_state(fixture_instance)
    assert state.current == 0
    assert state.visited == frozenset({0})
    assert state.belief.reward_obs.values == (fixture_instance.nodes[0].nominal_reward,)
    assert len(state.belief.cost_obs) == 0

    unobserved = initial_state(fixture_instance, BeliefSettings(observe_start_reward=False))
    assert len(unobserved.belief.reward_obs) == 0


@pytest.mark.parametrize('text, total', SCRIPTED_TOTALS.items())
def test_scripted_walk_totals(fixture_instance, text, total):
    walk = walk_of(fixture_instance, text)
    log = run_episode(fixture_instance, ScriptedPolicy(walk))
    assert log.fault is None
    assert log.walk == walk
    assert log.steps == len(walk)
    assert log.total == pytest.approx(total, abs=0.01)
    assert walk_total(fixture_instance, walk) == pytest.approx(log.total, abs=1e-9)


def test_transition_appends_new_observations(fixture_instance):
    state = initial_state(fixture_instance)
    moved = transition(state, 4, fixture_instance)
    assert moved.current == 4
    assert moved.visited == frozenset({0, 4})
    assert len(moved.belief.cost_obs) == 1
    assert len(moved.belief.reward_obs) == 2

    back = transition(moved, 0, fixture_instance)
    assert len(back.belief.reward_obs) == 2
    assert back.belief.cost_obs is moved.belief.cost_obs

    stayed = transition(back, 0, fixture_instance)
    assert stayed.step == back.step + 1
    assert stayed.belief is back.belief


def test_realized_gains(fixture_instance):
    state = initial_state(fixture_instance)
    edge = fixture_instance.edge(0, 3)
    assert realized_net_gain(state, 0, fixture_instance) == 0.0
    assert realized_net_gain(state, 3, fixture_instance) == fixture_instance.nodes[3].true_reward - edge.true_cost
    moved = transition(state, 3, fixture_instance)
    assert realized_net_gain(moved, 0, fixture_instance) == -edge.true_cost
    with pytest.raises(NonAdjacentMoveError):
        realized_net_gain(moved, 1, fixture_instance)


def test_expected_gain_and_variance(fixture_instance):
    ctx = context_at_start(fixture_instance)
    assert expected_net_gain(ctx, 0) == 0.0
    assert net_gain_variance(ctx, 0) == 0.0
    # node 3 shares node 1's features, so its reward is known exactly
    assert expected_net_gain(ctx, 2) == pytest.approx(74.78 - ctx.cost_mean(0, 2), abs=0.005)
    assert net_gain_variance(ctx, 2) == pytest.approx(ctx.cost_variance(0, 2))
    assert net_gain_variance(ctx, 3) > net_gain_variance(ctx, 2)

    moved = PolicyContext(ctx.view, transition(ctx.state, 1, fixture_instance))
    with pytest.raises(NonAdjacentMoveError):
        expected_net_gain(moved, 3)
    with pytest.raises(NonAdjacentMoveError):
        net_gain_variance(moved, 3)
    assert net_gain_variance(moved, 0) == 0.0


def test_view_hides_truth(fixture_instance):
    view = InstanceView(fixture_instance)
    assert not hasattr(view, 'nodes')
    assert not hasattr(view, 'edges')
    assert view.format_walk([0, 3, 0]) == '1-4-1'


def test_non_adjacent_move_faults_episode(fixture_instance):
    log = run_episode(fixture_instance, ScriptedPolicy([0, 1, 3]))
    assert log.fault is not None
    assert log.steps == 1
    assert log.total == pytest.approx(61.36 - fixture_instance.edge(0, 1).true_cost)


def test_horizon_truncates_episode(fixture_instance):
    log = run_episode(fixture_instance, ScriptedPolicy(walk_of(fixture_instance, '1-5-3-2')), horizon=2)
    assert log.steps == 2
    assert log.walk == walk_of(fixture_instance, '1-5-3')
    with pytest.raises(ValueError):
        run_episode(fixture_instance, MyopicPolicy(), horizon=-1)
    with pytest.raises(ValueError):
        run_episode(fixture_instance, MyopicPolicy(), horizon=0)


def test_epoch_streams_are_reproducible():
    assert epoch_rng(5, 2).random() == epoch_rng(5, 2).random()
    assert epoch_rng(5, 2).random() != epoch_rng(5, 3).random()
    assert epoch_rng(5, 2).random() != epoch_rng(6, 2).random()


def test_episode_log_serialization(fixture_instance):
    log = run_episode(fixture_instance, ScriptedPolicy(walk_of(fixture_instance, '1-3-5-2'), name='replay'), seed=4)
    data = log.to_dict()
    assert data['policy'] == 'replay'
    assert data['seed'] == 4
    assert len(data['records']) == log.steps
    # node 3 shares the start's features, so only node 5's reward is news
    assert data['records'][0]['observed_reward'] is None
    assert data['records'][1]['observed_reward'] == fixture_instance.nodes[4].true_reward

    row = next(csv.reader([log.csv_summary()]))
    assert row[:4] == ['illustrative', 'replay', '4', str(log.steps)]
    assert float(row[4]) == pytest.approx(log.total, abs=1e-6)


def test_episodes_are_deterministic(fixture_instance):
    policy = make_policy('SC:beta=3', ENUMERATION)
    first = run_episode(fixture_instance, policy, seed=9)
    second = run_episode(fixture_instance, policy, seed=9)
    assert first.to_dict() == second.to_dict()


@pytest.mark.slow
@pytest.mark.parametrize('spec', ['M', 'UCB:lambda=1', 'HP:alpha=1,H=2', 'SC:beta=2'])
def test_incremental_total_matches_set_accounting(spec):
    policy = make_policy(spec, ENUMERATION)
    # 4 settings x 50 instances x 5 seeds: 1000 episodes
    for instance in random_instances(50, sizes=(5, 7, 9)):
        for seed in range(5):
            log = run_episode(instance, policy, seed=seed)
            assert log.fault is None
            assert total_contribution(log) == pytest.approx(log.total, abs=1e-9)
            assert total_contribution(log, instance) == pytest.approx(log.total, abs=1e-9)


def _hide_unseen_truths(instance, log):
    """Copy of instance with every truth the episode never observed changed"""
    visited = set(log.walk)
    traversed = {EdgeKey.of(a, b) for a, b in zip(log.walk, log.walk[1:])}
    rewards = {n.id: n.true_reward + 999.0 for n in instance.nodes if n.id not in visited}
    costs = {k: e.true_cost + 7.0 for k, e in instance.edges.items()
             if k not in traversed and not k.is_self_loop}
    return instance.with_truths(rewards, costs)


@pytest.mark.parametrize('spec', ['M', 'UCB:lambda=1', 'HP:alpha=1,H=2', 'SC:beta=2'])
def test_policies_only_see_observed_truths(fixture_instance, spec):
    policy = make_policy(spec, ENUMERATION)
    for instance in [fixture_instance] + random_instances(6, sizes=(6, 8)):
        settings = BeliefSettings()
        prior = BeliefState.from_instance(instance, settings)
        for seed in range(2):
            log = run_episode(instance, policy, seed=seed, settings=settings, belief=prior)
            changed = _hide_unseen_truths(instance, log)
            again = run_episode(changed, policy, seed=seed, settings=settings, belief=prior)
            assert again.decisions == log.decisions


def test_given_belief_replaces_the_grand_means(fixture_instance):
    prior = BeliefState.from_instance(fixture_instance)
    changed = fixture_instance.with_truths(rewards={3: 999.0})
    assert BeliefState.from_instance(changed).reward_prior.mean != prior.reward_prior.mean
    assert initial_state(changed, belief=prior).belief.reward_prior == prior.reward_prior
