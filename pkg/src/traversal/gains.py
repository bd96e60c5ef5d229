from src.graph import EdgeKey, GraphInstance, NodeId

from .state import NonAdjacentMoveError, PolicyContext, TravelerState


def _edge_or_raise(instance: GraphInstance, i: NodeId, j: NodeId):
    key = EdgeKey.of(i, j)
    if key not in instance.edges:
        raise NonAdjacentMoveError(i, j)
    return instance.edges[key]


def realized_net_gain(state: TravelerState, j: NodeId, instance: GraphInstance) -> float:
    """
    Net gain actually earned by moving from the current node to j

    r(y_j) - c(x_e) for an unvisited j, -c(x_e) for a revisit, 0 for staying.

    Raises:
        NonAdjacentMoveError: If j is not adjacent to the current node
    """
    edge = _edge_or_raise(instance, state.current, j)
    if j == state.current:
        return 0.0
    if j in state.visited:
        return -edge.true_cost
    return instance.nodes[j].true_reward - edge.true_cost


def expected_net_gain(ctx: PolicyContext, j: NodeId) -> float:
    """
    Posterior-mean net gain of moving to j

    Raises:
        NonAdjacentMoveError: If j is not adjacent to the current node
    """
    i = ctx.current
    ctx.view.check_move(i, j)
    if j == i:
        return 0.0
    cost = ctx.cost_mean(i, j)
    if j in ctx.visited:
        return -cost
    return ctx.reward_mean(j) - cost


def net_gain_variance(ctx: PolicyContext, j: NodeId) -> float:
    """
    Posterior variance of the net gain of moving to j

    The reward term counts only for an unvisited j whose features are unobserved;
    the cost term only for an edge whose features are unobserved.

    Raises:
        NonAdjacentMoveError: If j is not adjacent to the current node
    """
    i = ctx.current
    ctx.view.check_move(i, j)
    if j == i:
        return 0.0
    variance = 0.0
    if not ctx.edge_observed(i, j):
        variance += ctx.cost_variance(i, j)
    if j not in ctx.visited and not ctx.node_observed(j):
        variance += ctx.reward_variance(j)
    return variance


def transition(state: TravelerState, j: NodeId, instance: GraphInstance) -> TravelerState:
    """
    Move the traveler to j and append whatever is newly observed

    The edge's (features, cost) pair is recorded on first traversal and the node's
    (features, reward) pair on first visit; staying changes nothing but the step.

    Raises:
        NonAdjacentMoveError: If j is not adjacent to the current node
    """
    edge = _edge_or_raise(instance, state.current, j)
    if j == state.current:
        return TravelerState(state.current, state.visited, state.belief, state.step + 1)

    belief = state.belief.observe_cost(edge.features, edge.true_cost)
    if j not in state.visited:
        node = instance.nodes[j]
        belief = belief.observe_reward(node.features, node.true_reward)
    return TravelerState(j, state.visited | {j}, belief, state.step + 1)
