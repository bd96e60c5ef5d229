import csv
import io
import zlib
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import yaml

CSV_COLUMNS = ['n', 'p', 'instance_seed', 'instance_hash', 'policy', 'params',
               'policy_seed', 'steps', 'total', 'improvement_pct', 'wall_ms']


def _seed(*words: int) -> int:
    """A 32-bit seed drawn from a SeedSequence keyed by the given words"""
    master, *key = words
    return int(np.random.SeedSequence(entropy=master, spawn_key=tuple(key)).generate_state(1)[0])


def _p_key(p: float) -> int:
    return int(round(p * 1_000_000))


@dataclass(frozen=True)
class ExperimentDesign:
    """
    Full-factorial Erdos-Renyi design

    Every (n, p) cell gets `replications` instances; every policy setting runs on
    each of them. The UCB lambda=0 setting doubles as the myopic baseline; a plain
    'M' setting is added when include_myopic is set. An explicit `policies` list
    replaces the factorial policy levels.
    """
    sizes: Tuple[int, ...] = (20, 50, 80)
    edge_probabilities: Tuple[float, ...] = (0.2, 0.5, 0.8)
    lambdas: Tuple[float, ...] = (0.0, 1.0, 10.0)
    horizons: Tuple[int, ...] = (3, 4, 5)
    alphas: Tuple[float, ...] = (0.0, 1.0, 10.0)
    betas: Tuple[int, ...] = (1, 10, 100)
    replications: int = 30
    master_seed: int = 20240101
    include_myopic: bool = True
    hp_solver: str = 'search'
    policies: Optional[Tuple[str, ...]] = None
    horizon: int = 500
    generator: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if not self.sizes or not self.edge_probabilities:
            raise ValueError("design needs at least one size and one edge probability")
        for p in self.edge_probabilities:
            if not 0.0 < p <= 1.0:
                raise ValueError(f"edge probability {p} outside (0, 1]")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentDesign":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown design keys: {', '.join(sorted(unknown))}")
        values = dict(data)
        for key in ('sizes', 'horizons', 'betas'):
            if key in values:
                values[key] = tuple(int(v) for v in values[key])
        for key in ('edge_probabilities', 'lambdas', 'alphas'):
            if key in values:
                values[key] = tuple(float(v) for v in values[key])
        if values.get('policies') is not None:
            values['policies'] = tuple(str(v) for v in values['policies'])
        return cls(**values)

    @classmethod
    def from_yaml(cls, path: str) -> "ExperimentDesign":
        with open(path) as f:
            return cls.from_dict(yaml.safe_load(f) or {})

    @classmethod
    def from_config(cls, **overrides) -> "ExperimentDesign":
        """Design from experiment_design.yaml, horizon and generator limits from system_settings.yaml"""
        from src.config import config
        data = dict(config.get_config('experiment_design'))
        system = config.get_config('system_settings')
        data.setdefault('horizon', system.get('horizon', 500))
        data.setdefault('generator', system.get('generator', {}))
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    def with_overrides(self, **overrides) -> "ExperimentDesign":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def cells(self) -> List[Tuple[int, float]]:
        return [(n, p) for n in self.sizes for p in self.edge_probabilities]

    def policy_specs(self) -> List[str]:
        if self.policies is not None:
            return list(self.policies)
        specs = ['M'] if self.include_myopic else []
        specs += [f"UCB:lambda={lam:g}" for lam in self.lambdas]
        specs += [f"HP:alpha={alpha:g},H={h},solver={self.hp_solver}"
                  for alpha in self.alphas for h in self.horizons]
        specs += [f"SC:beta={beta}" for beta in self.betas]
        return specs

    def instance_seed(self, n: int, p: float, replication: int) -> int:
        """Seed of one replication's instance; independent of the other cells in the design"""
        return _seed(self.master_seed, n, _p_key(p), replication)

    def policy_seed(self, n: int, p: float, replication: int, descriptor: str) -> int:
        return _seed(self.master_seed, n, _p_key(p), replication, zlib.crc32(descriptor.encode()))


@dataclass
class ResultRow:
    """One (cell, replication, policy setting) outcome"""
    n: int
    p: float
    instance_seed: int
    instance_hash: str
    policy: str
    params: str
    policy_seed: int
    steps: int
    total: float
    improvement_pct: Optional[float] = None
    wall_ms: Optional[float] = None

    @property
    def instance_key(self) -> Tuple[int, float, int]:
        return (self.n, self.p, self.instance_seed)

    def sort_key(self) -> Tuple:
        return (self.n, self.p, self.instance_seed, self.params)

    def to_csv_row(self) -> List[str]:
        return [
            str(self.n), f"{self.p:g}", str(self.instance_seed), self.instance_hash,
            self.policy, self.params, str(self.policy_seed), str(self.steps),
            f"{self.total:.6f}",
            '' if self.improvement_pct is None else f"{self.improvement_pct:.6f}",
            '' if self.wall_ms is None else f"{self.wall_ms:.1f}"
        ]

    @classmethod
    def from_csv_row(cls, record: Dict[str, str]) -> "ResultRow":
        return cls(
            n=int(record['n']),
            p=float(record['p']),
            instance_seed=int(record['instance_seed']),
            instance_hash=record['instance_hash'],
            policy=record['policy'],
            params=record['params'],
            policy_seed=int(record['policy_seed']),
            steps=int(record['steps']),
            total=float(record['total']),
            improvement_pct=float(record['improvement_pct']) if record.get('improvement_pct') else None,
            wall_ms=float(record['wall_ms']) if record.get('wall_ms') else None
        )


def write_rows(rows: Iterable[ResultRow], path: str) -> None:
    with open(path, 'w', newline='') as f:
        f.write(rows_to_csv(rows))


def read_rows(path: str) -> List[ResultRow]:
    with open(path, newline='') as f:
        return [ResultRow.from_csv_row(record) for record in csv.DictReader(f)]


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    """CSV text with a header; params strings are quoted since they contain commas"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.to_csv_row())
    return buffer.getvalue()
