import logging
import traceback
from typing import Optional, Sequence

import numpy as np

from src.belief import BeliefSettings, BeliefState
from src.graph import EdgeKey, GraphInstance, NodeId

from .gains import realized_net_gain, transition
from .state import EpisodeLog, InstanceView, NonAdjacentMoveError, PolicyContext, StepRecord, TravelerState


def epoch_rng(seed: int, t: int) -> np.random.Generator:
    """Independent random stream for decision epoch t of an episode seeded with seed"""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(t,)))


def initial_state(instance: GraphInstance,
                  settings: Optional[BeliefSettings] = None,
                  belief: Optional[BeliefState] = None) -> TravelerState:
    """
    State at t=0: the start node is visited and, when configured, its reward observed

    The start's observed reward is its nominal reward (the value that was received
    before being zeroed out of the accounting). A given belief replaces the
    grand-mean priors built from the instance.
    """
    settings = settings or BeliefSettings()
    if belief is None:
        belief = BeliefState.from_instance(instance, settings)
    start = instance.nodes[instance.start]
    if settings.observe_start_reward:
        belief = belief.observe_reward(start.features, start.prior_reward)
    return TravelerState(instance.start, frozenset({instance.start}), belief, 0)


def run_episode(instance: GraphInstance,
                policy,
                seed: int = 0,
                settings: Optional[BeliefSettings] = None,
                horizon: Optional[int] = None,
                belief: Optional[BeliefState] = None,
                logger: Optional[logging.Logger] = None) -> EpisodeLog:
    """
    Run one episode of a policy on an instance

    The episode ends when the policy chooses to stay (the self-loop is absorbing)
    or after the horizon. A policy that names a non-adjacent node aborts the
    episode with a fault entry instead of raising.

    Args:
        instance: The instance (shared read-only)
        policy: Object with decide(ctx, rng) -> NodeId and a descriptor attribute
        seed: Episode seed; each decision epoch draws from its own derived stream
        settings: Belief settings (defaults when omitted)
        horizon: Overrides the instance horizon
        belief: Prior belief to start from (grand-mean priors of the instance when omitted)
        logger: Optional logger instance

    Returns:
        EpisodeLog: The step records and total
    """
    logger = logger or logging.getLogger("TRAVERSAL")
    horizon = instance.horizon if horizon is None else horizon
    if horizon < 1:
        raise ValueError(f"horizon must be positive, got {horizon}")

    view = InstanceView(instance)
    state = initial_state(instance, settings, belief)
    descriptor = getattr(policy, 'descriptor', type(policy).__name__)
    log = EpisodeLog(instance_id=instance.name, policy=descriptor, seed=seed, start=instance.start)

    for t in range(horizon):
        ctx = PolicyContext(view, state)
        try:
            j = policy.decide(ctx, epoch_rng(seed, t))
            gain = realized_net_gain(state, j, instance)
        except NonAdjacentMoveError as e:
            log.fault = f"t={t}: {e}"
            logger.error(f"Episode aborted on {instance.name} ({descriptor}): {e}")
            break
        except Exception as e:
            log.fault = f"t={t}: {e}"
            logger.error(f"Policy {descriptor} failed at t={t}: {e}")
            logger.error(f"Traceback: {traceback.format_exc()}")
            raise

        observed_cost = None
        observed_reward = None
        if j != state.current:
            edge = instance.edge(state.current, j)
            if edge.features not in state.belief.cost_obs:
                observed_cost = edge.true_cost
            if j not in state.visited and instance.nodes[j].features not in state.belief.reward_obs:
                observed_reward = instance.nodes[j].true_reward

        log.records.append(StepRecord(t, state.current, j, gain, observed_cost, observed_reward))
        log.total += gain
        logger.debug(f"t={t}: {view.labels[state.current]} -> {view.labels[j]} gain {gain:.4f}")

        if j == state.current:
            break
        state = transition(state, j, instance)

    logger.info(f"Episode {instance.name} {descriptor} seed {seed}: "
                f"{log.steps} steps, total {log.total:.4f}, walk {instance.format_walk(log.walk)}")
    return log


def walk_total(instance: GraphInstance, walk: Sequence[NodeId]) -> float:
    """
    Set-based accounting of a walk from the start

    Every distinct visited node other than the start earns its reward once;
    every traversal pays its edge cost.
    """
    collected = set(walk) - {instance.start}
    rewards = sum(instance.nodes[j].true_reward for j in collected)
    costs = 0.0
    for i, j in zip(walk, walk[1:]):
        key = EdgeKey.of(i, j)
        if key not in instance.edges:
            raise NonAdjacentMoveError(i, j)
        costs += instance.edges[key].true_cost
    return rewards - costs


def total_contribution(log: EpisodeLog, instance: Optional[GraphInstance] = None) -> float:
    """
    Total contribution of an episode

    With the instance, the total is recomputed from truth (set-based accounting);
    without it, the incremental sum of realized gains is returned.
    """
    if instance is None:
        return sum(r.realized_gain for r in log.records)
    return walk_total(instance, log.walk)
