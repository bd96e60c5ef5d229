import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Dict, Optional, Sequence

from .gaussian_process import ConditionedProcess, ObservationSet
from .kernel import GpPrior, Kernel


@dataclass(frozen=True)
class BeliefSettings:
    """Hyperparameters and conventions of the belief model"""
    bandwidth: float = 1.0
    signal_variance: float = 1.0
    kernel_half_factor: bool = True
    cost_mean_includes_self_loops: bool = False
    observe_start_reward: bool = True
    jitter_start: float = 1e-10
    jitter_max: float = 1e-6

    @classmethod
    def from_config(cls, overrides: Optional[Dict[str, Any]] = None) -> "BeliefSettings":
        """Build settings from belief_settings.yaml, with optional overrides"""
        from src.config import config
        data = config.get_config('belief_settings')
        data.update(overrides or {})
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)

    def kernel(self) -> Kernel:
        return Kernel(self.bandwidth, self.signal_variance, self.kernel_half_factor)


def reward_grand_mean(instance) -> float:
    """Mean reward over all nodes, using the start node's nominal reward when zeroed"""
    values = [node.prior_reward for node in instance.nodes]
    return sum(values) / len(values)


def cost_grand_mean(instance, include_self_loops: bool = False) -> float:
    """Mean true cost over the edges (self-loops excluded by default)"""
    values = [e.true_cost for k, e in instance.edges.items() if include_self_loops or not k.is_self_loop]
    if not values:
        return 0.0
    return sum(values) / len(values)


@dataclass(frozen=True)
class BeliefState:
    """
    Two independent GP beliefs: edge cost over edge features, node reward over node features

    Updates return a new BeliefState; queries are pure and cache the factorizations.
    """
    cost_prior: GpPrior
    reward_prior: GpPrior
    cost_obs: ObservationSet = ObservationSet()
    reward_obs: ObservationSet = ObservationSet()
    jitter_start: float = field(default=1e-10, compare=False)
    jitter_max: float = field(default=1e-6, compare=False)

    @classmethod
    def from_instance(cls, instance, settings: Optional[BeliefSettings] = None) -> "BeliefState":
        """Grand-mean constant priors with the configured kernel and no observations"""
        settings = settings or BeliefSettings()
        kernel = settings.kernel()
        return cls(
            cost_prior=GpPrior(cost_grand_mean(instance, settings.cost_mean_includes_self_loops), kernel),
            reward_prior=GpPrior(reward_grand_mean(instance), kernel),
            jitter_start=settings.jitter_start,
            jitter_max=settings.jitter_max
        )

    @cached_property
    def cost_process(self) -> ConditionedProcess:
        return ConditionedProcess(self.cost_prior, self.cost_obs, self.jitter_start, self.jitter_max)

    @cached_property
    def reward_process(self) -> ConditionedProcess:
        return ConditionedProcess(self.reward_prior, self.reward_obs, self.jitter_start, self.jitter_max)

    def observe_cost(self, x: Sequence[float], value: float) -> "BeliefState":
        obs = self.cost_obs.add(x, value)
        return self if obs is self.cost_obs else replace(self, cost_obs=obs)

    def observe_reward(self, y: Sequence[float], value: float) -> "BeliefState":
        obs = self.reward_obs.add(y, value)
        return self if obs is self.reward_obs else replace(self, reward_obs=obs)

    def snapshot(self) -> Dict[str, Any]:
        """JSON-ready dump of hyperparameters and observations"""
        def prior_dict(prior: GpPrior) -> Dict[str, Any]:
            return {
                'mean': prior.mean,
                'bandwidth': prior.kernel.bandwidth,
                'signal_variance': prior.kernel.signal_variance,
                'half_factor': prior.kernel.half_factor
            }

        def obs_dict(obs: ObservationSet) -> Dict[str, Any]:
            return {'inputs': [list(x) for x in obs.inputs], 'values': list(obs.values)}

        return {
            'cost_prior': prior_dict(self.cost_prior),
            'reward_prior': prior_dict(self.reward_prior),
            'cost_obs': obs_dict(self.cost_obs),
            'reward_obs': obs_dict(self.reward_obs)
        }

    def to_json(self) -> str:
        return json.dumps(self.snapshot(), indent=2)
