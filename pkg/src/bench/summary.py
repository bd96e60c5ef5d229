import math
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import stats

from .design import ResultRow
from .sweep import BASELINE_PARAMS, IMPROVEMENT_EPSILON, paired_improvement


class MissingBaselineError(ValueError):
    """Raised when an instance has no myopic row to compare against"""


@dataclass(frozen=True)
class SummaryRow:
    """Paired improvement of one policy setting over myopic in one cell"""
    n: int
    p: float
    family: str
    params: str
    replications: int
    mean_total: float
    mean_improvement: float
    half_width: float
    best: bool = False

    @property
    def interval(self) -> Tuple[float, float]:
        return (self.mean_improvement - self.half_width, self.mean_improvement + self.half_width)


def confidence_interval(values: Sequence[float], level: float = 0.95) -> Tuple[float, float]:
    """
    Mean and two-sided Student-t half-width with len(values) - 1 degrees of freedom

    A single value has an undefined interval (half-width nan).
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise ValueError("no values to summarize")
    mean = float(data.mean())
    if data.size == 1:
        return mean, math.nan
    sem = float(data.std(ddof=1)) / math.sqrt(data.size)
    return mean, float(stats.t.ppf(0.5 + level / 2.0, data.size - 1)) * sem


def summarize(rows: Sequence[ResultRow], level: float = 0.95,
              epsilon: float = IMPROVEMENT_EPSILON) -> List[SummaryRow]:
    """
    Per cell and policy setting: mean paired improvement over myopic and its t-interval

    Improvements are recomputed from the totals. Within each cell and family the
    setting with the highest mean improvement is flagged best.

    Raises:
        MissingBaselineError: If some instance has no M (or UCB lambda=0) row
    """
    baselines: Dict[Tuple, float] = {}
    for row in rows:
        if row.params in BASELINE_PARAMS and (row.params == 'M' or row.instance_key not in baselines):
            baselines[row.instance_key] = row.total

    groups: Dict[Tuple[int, float, str, str], List[ResultRow]] = defaultdict(list)
    for row in rows:
        if row.instance_key not in baselines:
            raise MissingBaselineError(
                f"no myopic row for n={row.n}, p={row.p:g}, instance seed {row.instance_seed}"
            )
        groups[(row.n, row.p, row.policy, row.params)].append(row)

    summary = []
    for (n, p, family, params), members in sorted(groups.items()):
        improvements = [paired_improvement(r.total, baselines[r.instance_key], epsilon) for r in members]
        mean, half_width = confidence_interval(improvements, level)
        summary.append(SummaryRow(
            n=n, p=p, family=family, params=params,
            replications=len(members),
            mean_total=float(np.mean([r.total for r in members])),
            mean_improvement=mean,
            half_width=half_width
        ))

    best: Dict[Tuple[int, float, str], SummaryRow] = {}
    for row in summary:
        key = (row.n, row.p, row.family)
        if key not in best or row.mean_improvement > best[key].mean_improvement:
            best[key] = row
    flagged = {id(r) for r in best.values()}
    return [replace(r, best=id(r) in flagged) for r in summary]


def format_summary(summary: Sequence[SummaryRow]) -> str:
    """Plain-text table, one line per setting; best settings are starred"""
    header = f"{'n':>4} {'p':>5}  {'setting':<34} {'reps':>4} {'mean total':>11} {'improv %':>9} {'+/-':>7}"
    lines = [header, '-' * len(header)]
    for row in summary:
        mark = '*' if row.best else ' '
        lines.append(
            f"{row.n:>4} {row.p:>5g} {mark}{row.params:<34} {row.replications:>4} "
            f"{row.mean_total:>11.2f} {row.mean_improvement:>9.2f} {row.half_width:>7.2f}"
        )
    return '\n'.join(lines)
