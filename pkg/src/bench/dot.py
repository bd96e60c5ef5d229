from typing import Optional

from src.graph import GraphInstance
from src.traversal import EpisodeLog


def _quote(text: str) -> str:
    return '"' + str(text).replace('\\', '\\\\').replace('"', '\\"') + '"'


def emit_dot(log: Optional[EpisodeLog], instance: GraphInstance) -> str:
    """
    Graphviz rendering of an episode

    Nodes are pinned at their coordinates; every non-self edge is drawn undirected
    and each traversal of the episode is overlaid as a directed edge labelled with
    its order and realized gain. Self-loop stops are not drawn.
    """
    lines = [f"digraph {_quote(instance.name)} {{",
             '  node [shape=circle];',
             '  edge [dir=none, color=gray];']
    for node in instance.nodes:
        x, y = node.coords[0], node.coords[1]
        attrs = [f"label={_quote(node.display)}", f'pos="{x:g},{y:g}!"']
        if node.id == instance.start:
            attrs.append('style=bold')
        lines.append(f"  {_quote(node.id)} [{', '.join(attrs)}];")
    for edge in instance.non_self_edges():
        lines.append(f"  {_quote(edge.key.a)} -> {_quote(edge.key.b)} [label={_quote(f'{edge.true_cost:.2f}')}];")

    if log is not None:
        order = 0
        for record in log.records:
            if record.source == record.target:
                continue
            order += 1
            label = f"{order}: {record.realized_gain:+.2f}"
            lines.append(f"  {_quote(record.source)} -> {_quote(record.target)} "
                         f"[dir=forward, color=red, penwidth=2, label={_quote(label)}];")
    lines.append('}')
    return '\n'.join(lines) + '\n'
