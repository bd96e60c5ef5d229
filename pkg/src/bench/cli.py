import json
import logging
from typing import Optional

import click
from dotenv import load_dotenv

from src.belief import BeliefSettings
from src.graph import (
    GraphInstance,
    build_fixture_illustrative,
    erdos_renyi,
    load_instance,
    save_instance,
    serialize
)
from src.oracle import OracleCaps, clairvoyant_exact
from src.policies import ScriptedPolicy, make_policy
from src.traversal import run_episode
from src.utils import setup_logger

from .design import ExperimentDesign, read_rows, rows_to_csv
from .dot import emit_dot
from .reference import reproduce_reference_runs
from .summary import format_summary, summarize
from .sweep import run_sweep

load_dotenv()


def _instance(path: Optional[str]) -> GraphInstance:
    return load_instance(path) if path else build_fixture_illustrative()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, 'w') as f:
            f.write(text)
    else:
        click.echo(text, nl=not text.endswith('\n'))


def _policy(spec: str, walk: Optional[str], instance: GraphInstance):
    if walk:
        return ScriptedPolicy(instance.resolve_walk(walk.split('-')), name=f"replay {walk}")
    return make_policy(spec)


instance_option = click.option('--instance', 'instance_path', type=click.Path(exists=True, dir_okay=False),
                               help='Instance JSON file (the illustrative fixture when omitted)')


@click.group()
@click.option('--verbose', is_flag=True, help='Log episode steps')
@click.pass_context
def cli(ctx, verbose):
    """BayesWalk: sequential graph traversal under Gaussian-process beliefs"""
    ctx.ensure_object(dict)
    ctx.obj['logger'] = setup_logger('bench', level=logging.DEBUG if verbose else logging.INFO)


@cli.command()
@click.option('--n', 'n', type=int, help='Node count of a G(n, p) instance')
@click.option('--p', 'p', type=float, help='Edge probability of a G(n, p) instance')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--fixture', is_flag=True, help='Write the illustrative fixture instead')
@click.option('--out', type=click.Path(dir_okay=False))
def gen(n, p, seed, fixture, out):
    """Generate an instance file"""
    try:
        if fixture:
            instance = build_fixture_illustrative()
        else:
            if n is None or p is None:
                raise click.UsageError('--n and --p are required unless --fixture is given')
            from src.config import config
            system = config.get_config('system_settings')
            generator = system.get('generator', {})
            instance = erdos_renyi(n, p, seed, horizon=int(system.get('horizon', 500)),
                                   max_attempts=int(generator.get('max_attempts', 100000)),
                                   coord_range=tuple(generator.get('coord_range', (0.0, 10.0))))
    except (ValueError, RuntimeError) as e:
        raise click.ClickException(str(e))
    if out:
        save_instance(instance, out)
        click.echo(f"Wrote {instance.name} ({instance.num_nodes} nodes, hash {instance.instance_hash()}) to {out}")
    else:
        click.echo(serialize(instance), nl=False)


@cli.command()
@instance_option
@click.option('--policy', 'spec', default='M', show_default=True, help="e.g. 'UCB:lambda=1'")
@click.option('--walk', help="Replay a fixed walk of node labels, e.g. '1-4-1-2-5-3'")
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--json', 'as_json', is_flag=True, help='Print the full episode log as JSON')
@click.option('--dot', 'dot_path', type=click.Path(dir_okay=False), help='Also write a DOT rendering')
@click.pass_context
def run(ctx, instance_path, spec, walk, seed, as_json, dot_path):
    """Run one episode"""
    try:
        instance = _instance(instance_path)
        policy = _policy(spec, walk, instance)
        log = run_episode(instance, policy, seed=seed, settings=BeliefSettings.from_config(),
                          logger=ctx.obj['logger'])
    except (ValueError, RuntimeError) as e:
        raise click.ClickException(str(e))
    if dot_path:
        _emit(emit_dot(log, instance), dot_path)
    if as_json:
        click.echo(log.to_json())
    else:
        click.echo(f"{log.policy}: total {log.total:.2f} in {log.steps} steps, walk {instance.format_walk(log.walk)}")
    if log.fault:
        raise click.ClickException(f"episode fault: {log.fault}")


@cli.command()
@instance_option
@click.option('--no-prune', is_flag=True, help='Disable the structural pruning rules')
def oracle(instance_path, no_prune):
    """Solve an instance exactly under perfect information"""
    try:
        instance = _instance(instance_path)
        result = clairvoyant_exact(instance, OracleCaps.from_config(), prune=not no_prune,
                                   logger=setup_logger('oracle'))
    except (ValueError, RuntimeError) as e:
        raise click.ClickException(str(e))
    click.echo(json.dumps(result.to_dict(instance), indent=2))


@cli.command()
@click.option('--design', 'design_path', type=click.Path(exists=True, dir_okay=False),
              help='Experiment design YAML (experiment_design.yaml when omitted)')
@click.option('--seed', type=int, help='Master seed override')
@click.option('--replications', type=int, help='Replications override')
@click.option('--size', 'sizes', type=int, multiple=True, help='Restrict node counts')
@click.option('--edge-probability', 'probabilities', type=float, multiple=True, help='Restrict edge probabilities')
@click.option('--policy', 'policies', multiple=True, help='Explicit policy settings instead of the factorial levels')
@click.option('--parallelism', type=int, help='Worker processes (overrides BAYESWALK_PARALLELISM)')
@click.option('--timing', is_flag=True, help='Record wall_ms per row')
@click.option('--out', type=click.Path(dir_okay=False), help='CSV path (stdout when omitted)')
@click.option('--summary', 'show_summary', is_flag=True, help='Print the paired summary afterwards')
@click.pass_context
def sweep(ctx, design_path, seed, replications, sizes, probabilities, policies, parallelism, timing, out,
          show_summary):
    """Run the Erdos-Renyi factorial sweep"""
    try:
        design = ExperimentDesign.from_yaml(design_path) if design_path else ExperimentDesign.from_config()
        design = design.with_overrides(
            master_seed=seed,
            replications=replications,
            sizes=tuple(sizes) or None,
            edge_probabilities=tuple(probabilities) or None,
            policies=tuple(policies) or None
        )
        from src.config import config
        enumeration = config.get_config('system_settings').get('enumeration')
        rows = run_sweep(design, parallelism, out, BeliefSettings.from_config(), enumeration, timing,
                         logger=ctx.obj['logger'])
        if not out:
            click.echo(rows_to_csv(rows), nl=False)
        if show_summary:
            click.echo(format_summary(summarize(rows)))
    except (ValueError, RuntimeError) as e:
        raise click.ClickException(str(e))


@cli.command(name='summarize')
@click.argument('csv_path', type=click.Path(exists=True, dir_okay=False))
def summarize_command(csv_path):
    """Summarize a sweep CSV: paired improvement over myopic with 95% intervals"""
    try:
        click.echo(format_summary(summarize(read_rows(csv_path))))
    except (ValueError, KeyError) as e:
        raise click.ClickException(str(e))


@cli.command()
@click.option('--seeds', type=int, default=10, show_default=True, help='Episode seeds per setting')
@click.option('--json', 'as_json', is_flag=True)
@click.pass_context
def reference(ctx, seeds, as_json):
    """Compare the reference settings, replays and oracle on the illustrative fixture"""
    try:
        report = reproduce_reference_runs(seeds=range(seeds), settings=BeliefSettings.from_config(),
                                          caps=OracleCaps.from_config(), logger=ctx.obj['logger'])
    except (ValueError, RuntimeError) as e:
        raise click.ClickException(str(e))
    click.echo(json.dumps(report.to_dict(), indent=2) if as_json else report.format())


cli.add_command(reference, name='table3')


@cli.command()
@instance_option
@click.option('--policy', 'spec', default='M', show_default=True)
@click.option('--walk', help='Replay a fixed walk of node labels')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False))
def dot(instance_path, spec, walk, seed, out):
    """Emit a Graphviz DOT rendering of one episode"""
    try:
        instance = _instance(instance_path)
        log = run_episode(instance, _policy(spec, walk, instance), seed=seed,
                          settings=BeliefSettings.from_config())
    except (ValueError, RuntimeError) as e:
        raise click.ClickException(str(e))
    _emit(emit_dot(log, instance), out)


def main():
    cli(obj={})


if __name__ == '__main__':
    main()
