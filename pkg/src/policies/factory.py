from typing import Optional, Union

from .base import Policy, PolicyParams, parse_policy_spec
from .clairvoyant import ClairvoyantPolicy
from .h_path import HPathPolicy
from .myopic import MyopicPolicy, UcbPolicy


def make_policy(spec: Union[str, PolicyParams], enumeration: Optional[dict] = None) -> Policy:
    """
    Build a policy from a spec string or parsed parameters

    Args:
        spec: e.g. 'UCB:lambda=1' or a PolicyParams
        enumeration: Guard for exhaustive HP planning ({'max_horizon', 'max_nodes'});
            read from system_settings.yaml when omitted
    """
    params = parse_policy_spec(spec) if isinstance(spec, str) else spec
    if params.kind == 'M':
        return MyopicPolicy(params)
    if params.kind == 'UCB':
        return UcbPolicy(params)
    if params.kind == 'SC':
        return ClairvoyantPolicy(params)

    if enumeration is None:
        from src.config import config
        enumeration = config.get_config('system_settings').get('enumeration', {})
    return HPathPolicy(params,
                       max_horizon=int(enumeration.get('max_horizon', 6)),
                       max_nodes=int(enumeration.get('max_nodes', 12)))
