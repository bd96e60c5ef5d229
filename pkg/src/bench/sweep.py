import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from src.belief import BeliefSettings
from src.graph import erdos_renyi
from src.policies import make_policy
from src.traversal import run_episode

from .design import ExperimentDesign, ResultRow, write_rows

IMPROVEMENT_EPSILON = 1e-6
# The myopic rows, or UCB with lambda=0 which decides identically
BASELINE_PARAMS = ('M', 'UCB:lambda=0')


@dataclass(frozen=True)
class SweepTask:
    """One replication of one cell: an instance and every policy setting run on it"""
    n: int
    p: float
    replication: int
    instance_seed: int
    specs: Tuple[Tuple[str, int], ...]
    horizon: int
    generator: Tuple[Tuple[str, object], ...]
    settings: BeliefSettings
    enumeration: Tuple[Tuple[str, int], ...]
    timing: bool


def resolve_parallelism(parallelism: Optional[int] = None) -> int:
    """A flag wins over BAYESWALK_PARALLELISM, which wins over system_settings.yaml"""
    if parallelism is not None:
        return max(1, int(parallelism))
    env = os.environ.get('BAYESWALK_PARALLELISM')
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"BAYESWALK_PARALLELISM must be an integer, got {env!r}")
    from src.config import config
    return max(1, int(config.get_config('system_settings').get('parallelism', 1)))


def paired_improvement(total: float, baseline: float, epsilon: float = IMPROVEMENT_EPSILON) -> float:
    """Percent improvement over the myopic total on the same instance"""
    return 100.0 * (total - baseline) / max(abs(baseline), epsilon)


def build_tasks(design: ExperimentDesign,
                settings: Optional[BeliefSettings] = None,
                enumeration: Optional[Dict[str, int]] = None,
                timing: bool = False) -> List[SweepTask]:
    settings = settings or BeliefSettings()
    specs = design.policy_specs()
    generator = dict(design.generator)
    tasks = []
    for n, p in design.cells():
        for r in range(design.replications):
            seeded = tuple((spec, design.policy_seed(n, p, r, spec)) for spec in specs)
            tasks.append(SweepTask(
                n=n, p=p, replication=r,
                instance_seed=design.instance_seed(n, p, r),
                specs=seeded,
                horizon=design.horizon,
                generator=tuple(sorted(generator.items())),
                settings=settings,
                enumeration=tuple(sorted((enumeration or {'max_horizon': 6, 'max_nodes': 12}).items())),
                timing=timing
            ))
    return tasks


def run_task(task: SweepTask) -> List[ResultRow]:
    """Generate the replication's instance and run every policy setting on it"""
    logger = logging.getLogger("BENCH")
    generator = dict(task.generator)
    coord_range = tuple(generator.get('coord_range', (0.0, 10.0)))
    instance = erdos_renyi(task.n, task.p, task.instance_seed, horizon=task.horizon,
                           max_attempts=int(generator.get('max_attempts', 100000)),
                           coord_range=coord_range)
    instance_hash = instance.instance_hash()
    enumeration = dict(task.enumeration)

    rows = []
    for spec, policy_seed in task.specs:
        policy = make_policy(spec, enumeration)
        started = time.perf_counter()
        log = run_episode(instance, policy, seed=policy_seed, settings=task.settings)
        elapsed = (time.perf_counter() - started) * 1000.0
        if log.fault:
            logger.error(f"Fault in {instance.name} with {policy.descriptor}: {log.fault}")
        rows.append(ResultRow(
            n=task.n, p=task.p,
            instance_seed=task.instance_seed,
            instance_hash=instance_hash,
            policy=policy.params.family,
            params=policy.descriptor,
            policy_seed=policy_seed,
            steps=log.steps,
            total=log.total,
            wall_ms=elapsed if task.timing else None
        ))
    logger.info(f"Cell ({task.n}, {task.p:g}) replication {task.replication}: "
                f"{len(rows)} settings on {instance.name}")
    return rows


def attach_improvements(rows: List[ResultRow], epsilon: float = IMPROVEMENT_EPSILON) -> List[ResultRow]:
    """Fill improvement_pct from each instance's myopic row; rows without a baseline keep None"""
    baselines = {}
    for row in rows:
        if row.params in BASELINE_PARAMS and (row.params == 'M' or row.instance_key not in baselines):
            baselines[row.instance_key] = row.total
    for row in rows:
        baseline = baselines.get(row.instance_key)
        row.improvement_pct = None if baseline is None else paired_improvement(row.total, baseline, epsilon)
    return rows


def run_sweep(design: ExperimentDesign,
              parallelism: Optional[int] = None,
              out: Optional[str] = None,
              settings: Optional[BeliefSettings] = None,
              enumeration: Optional[Dict[str, int]] = None,
              timing: bool = False,
              logger: Optional[logging.Logger] = None) -> List[ResultRow]:
    """
    Run the full-factorial sweep

    Each (cell, replication) task is independent; rows are sorted canonically before
    output, so the CSV depends only on the design (timing off) and not on the
    worker count.

    Args:
        design: Factor levels, replications and master seed
        parallelism: Worker processes (BAYESWALK_PARALLELISM or configuration when omitted)
        out: Optional CSV path
        settings: Belief settings for every episode
        enumeration: Guard for exhaustive HP planning
        timing: Record wall_ms per row (makes the CSV run-dependent)
        logger: Optional logger instance

    Returns:
        List[ResultRow]: Sorted rows with paired improvements

    Raises:
        GenerationError: If a cell's instance cannot be drawn connected
    """
    logger = logger or logging.getLogger("BENCH")
    workers = resolve_parallelism(parallelism)
    tasks = build_tasks(design, settings, enumeration, timing)
    logger.info(f"Sweep: {len(design.cells())} cells x {design.replications} replications x "
                f"{len(design.policy_specs())} settings, {workers} worker(s)")

    results: List[List[ResultRow]] = []
    try:
        if workers <= 1:
            results = [run_task(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                results = list(executor.map(run_task, tasks))
    except Exception as e:
        logger.error(f"Sweep failed: {e}")
        raise

    rows = sorted((row for chunk in results for row in chunk), key=ResultRow.sort_key)
    attach_improvements(rows)
    if out:
        write_rows(rows, out)
        logger.info(f"Wrote {len(rows)} rows to {out}")
    return rows
