import math

import pytest
from click.testing import CliRunner

from src.bench import (
    CSV_COLUMNS,
    ExperimentDesign,
    MissingBaselineError,
    ResultRow,
    build_tasks,
    confidence_interval,
    emit_dot,
    first_divergence,
    format_summary,
    paired_improvement,
    read_rows,
    reproduce_reference_runs,
    resolve_parallelism,
    rows_to_csv,
    run_sweep,
    summarize,
    write_rows
)
from src.bench.cli import cli
from src.graph import save_instance
from src.oracle import OracleCaps
from src.policies import ScriptedPolicy
from src.traversal import run_episode

from conftest import walk_of

SMALL_DESIGN = ExperimentDesign(
    sizes=(20,),
    edge_probabilities=(0.2, 0.5, 0.8),
    replications=2,
    master_seed=7,
    policies=('M', 'UCB:lambda=1')
)


def row(seed, params, total, n=10, p=0.5):
    family = params.split(':')[0]
    return ResultRow(n=n, p=p, instance_seed=seed, instance_hash='h', policy=family, params=params,
                     policy_seed=0, steps=3, total=total)


def test_confidence_interval():
    mean, half_width = confidence_interval([8.0, 10.0, 12.0])
    assert mean == 10.0
    # t(0.975, 2) = 4.303, standard error 2 / sqrt(3)
    assert half_width == pytest.approx(4.97, abs=0.01)
    mean, half_width = confidence_interval([3.0])
    assert mean == 3.0
    assert math.isnan(half_width)
    with pytest.raises(ValueError):
        confidence_interval([])


def test_paired_improvement():
    assert paired_improvement(110.0, 100.0) == pytest.approx(10.0)
    assert paired_improvement(90.0, -100.0) == pytest.approx(190.0)
    assert paired_improvement(1.0, 0.0) == pytest.approx(1e8)


def test_factorial_policy_levels():
    design = ExperimentDesign()
    specs = design.policy_specs()
    assert len(specs) == 16
    assert specs[0] == 'M'
    assert 'UCB:lambda=0' in specs
    assert 'HP:alpha=10,H=5,solver=search' in specs
    assert specs[-1] == 'SC:beta=100'
    assert len(ExperimentDesign(include_myopic=False).policy_specs()) == 15


def test_design_seeds_are_deterministic_and_distinct():
    design = ExperimentDesign(master_seed=1)
    assert design.instance_seed(20, 0.2, 0) == ExperimentDesign(master_seed=1).instance_seed(20, 0.2, 0)
    seeds = {design.instance_seed(n, p, r) for n, p in design.cells() for r in range(5)}
    assert len(seeds) == len(design.cells()) * 5
    assert design.policy_seed(20, 0.2, 0, 'M') != design.policy_seed(20, 0.2, 0, 'UCB:lambda=1')
    assert design.instance_seed(20, 0.2, 0) != ExperimentDesign(master_seed=2).instance_seed(20, 0.2, 0)


def test_design_validation():
    with pytest.raises(ValueError):
        ExperimentDesign(replications=0)
    with pytest.raises(ValueError):
        ExperimentDesign(edge_probabilities=(1.5,))
    with pytest.raises(ValueError):
        ExperimentDesign.from_dict({'sizes': [5], 'colour': 'red'})
    design = ExperimentDesign.from_dict({'sizes': ['5'], 'lambdas': [0, 2]})
    assert design.sizes == (5,)
    assert design.lambdas == (0.0, 2.0)


def test_build_tasks_covers_the_design():
    tasks = build_tasks(SMALL_DESIGN)
    assert len(tasks) == 6
    assert all(len(task.specs) == 2 for task in tasks)
    assert tasks[0].instance_seed == SMALL_DESIGN.instance_seed(20, 0.2, 0)


def test_small_sweep(tmp_path):
    out = tmp_path / 'sweep.csv'
    rows = run_sweep(SMALL_DESIGN, parallelism=1, out=str(out))
    assert len(rows) == 12
    assert rows == sorted(rows, key=ResultRow.sort_key)
    assert all(r.wall_ms is None for r in rows)
    for r in rows:
        if r.params == 'M':
            assert r.improvement_pct == 0.0
        assert r.steps >= 1

    restored = read_rows(str(out))
    assert [r.params for r in restored] == [r.params for r in rows]
    assert [r.total for r in restored] == pytest.approx([r.total for r in rows], abs=1e-6)
    assert out.read_text().splitlines()[0] == ','.join(CSV_COLUMNS)

    again = run_sweep(SMALL_DESIGN, parallelism=1)
    assert rows_to_csv(again) == rows_to_csv(rows)


@pytest.mark.slow
def test_sweep_does_not_depend_on_worker_count():
    serial = run_sweep(SMALL_DESIGN, parallelism=1)
    parallel = run_sweep(SMALL_DESIGN, parallelism=2)
    assert rows_to_csv(serial) == rows_to_csv(parallel)


def test_timing_column_is_optional():
    design = ExperimentDesign(sizes=(6,), edge_probabilities=(0.8,), replications=1, policies=('M',))
    rows = run_sweep(design, parallelism=1, timing=True)
    assert rows[0].wall_ms is not None and rows[0].wall_ms >= 0.0


def test_params_are_quoted_in_csv(tmp_path):
    path = tmp_path / 'rows.csv'
    write_rows([row(1, 'M', 10.0), row(1, 'HP:alpha=1,H=3,solver=search', 12.0)], str(path))
    restored = read_rows(str(path))
    assert restored[1].params == 'HP:alpha=1,H=3,solver=search'
    assert restored[1].improvement_pct is None


def test_summarize_flags_best_setting():
    rows = []
    for seed, (m, low, high) in enumerate([(100.0, 101.0, 110.0), (100.0, 99.0, 120.0), (50.0, 51.0, 55.0)]):
        rows += [row(seed, 'M', m), row(seed, 'UCB:lambda=1', low), row(seed, 'UCB:lambda=10', high)]
    summary = summarize(rows)
    by_params = {s.params: s for s in summary}
    assert by_params['UCB:lambda=10'].best
    assert not by_params['UCB:lambda=1'].best
    assert by_params['M'].best
    assert by_params['M'].mean_improvement == 0.0
    assert by_params['UCB:lambda=10'].replications == 3
    assert by_params['UCB:lambda=10'].mean_improvement == pytest.approx((10.0 + 20.0 + 10.0) / 3)
    assert 'UCB:lambda=10' in format_summary(summary)


def test_ucb_lambda_zero_is_a_fallback_baseline():
    rows = [row(0, 'UCB:lambda=0', 100.0), row(0, 'UCB:lambda=1', 105.0)]
    by_params = {s.params: s for s in summarize(rows)}
    assert by_params['UCB:lambda=1'].mean_improvement == pytest.approx(5.0)


def test_summarize_requires_a_baseline():
    with pytest.raises(MissingBaselineError):
        summarize([row(0, 'M', 100.0), row(1, 'UCB:lambda=1', 90.0)])


def test_first_divergence():
    assert first_divergence([0, 1, 2], [0, 1, 2]) is None
    assert first_divergence([0, 1, 2], [0, 2, 1]) == 0
    assert first_divergence([0, 1, 2, 3], [0, 1, 3]) == 1
    assert first_divergence([0, 1], [0, 1, 2]) == 1


def test_dot_overlays_the_walk(fixture_instance):
    log = run_episode(fixture_instance, ScriptedPolicy(walk_of(fixture_instance, '1-5-3-2')))
    text = emit_dot(log, fixture_instance)
    assert text.startswith('digraph')
    assert text.count('color=red') == 3
    assert '"1: +' in text
    assert text.count('pos=') == 5
    assert 'color=red' not in emit_dot(None, fixture_instance)


def test_reference_report_accounting(fixture_instance):
    report = reproduce_reference_runs(fixture_instance, seeds=range(1), profile={'M': 'M'},
                                      caps=OracleCaps(progress_interval=0))
    kinds = [r.kind for r in report.rows]
    assert kinds.count('replay') == 5
    assert kinds[-1] == 'oracle'
    for r in report.rows:
        if r.kind != 'policy':
            assert not r.flagged
            assert r.divergence is None
    oracle = report.rows[-1]
    assert oracle.total == pytest.approx(219.60, abs=0.01)
    data = report.to_dict()
    assert data['rows'][-1]['walk'] == '1-4-1-2-5-3'
    assert 'Optimal' in report.format()


def test_resolve_parallelism(monkeypatch):
    monkeypatch.delenv('BAYESWALK_PARALLELISM', raising=False)
    assert resolve_parallelism() == 1
    monkeypatch.setenv('BAYESWALK_PARALLELISM', '3')
    assert resolve_parallelism() == 3
    assert resolve_parallelism(2) == 2
    assert resolve_parallelism(0) == 1
    monkeypatch.setenv('BAYESWALK_PARALLELISM', 'many')
    with pytest.raises(ValueError):
        resolve_parallelism()


class TestCli:
    def invoke(self, *args):
        return CliRunner().invoke(cli, list(args), obj={})

    def test_gen_fixture(self, tmp_path):
        result = self.invoke('gen', '--fixture')
        assert result.exit_code == 0
        assert '"nodes"' in result.output

        out = tmp_path / 'er.json'
        result = self.invoke('gen', '--n', '6', '--p', '0.7', '--seed', '3', '--out', str(out))
        assert result.exit_code == 0
        assert out.exists()

    def test_gen_needs_size(self):
        assert self.invoke('gen').exit_code != 0

    def test_run_replay(self):
        result = self.invoke('run', '--walk', '1-5-3-2')
        assert result.exit_code == 0
        assert 'total 175.16' in result.output

    def test_run_policy_on_file(self, tmp_path, fixture_instance):
        path = tmp_path / 'fixture.json'
        save_instance(fixture_instance, str(path))
        result = self.invoke('run', '--instance', str(path), '--policy', 'UCB:lambda=1', '--json')
        assert result.exit_code == 0
        assert '"policy": "UCB:lambda=1"' in result.output

    def test_bad_policy_fails(self):
        result = self.invoke('run', '--policy', 'XYZ')
        assert result.exit_code != 0

    def test_oracle(self):
        result = self.invoke('oracle')
        assert result.exit_code == 0
        assert '"walk_labels": "1-4-1-2-5-3"' in result.output
        assert '"proven": true' in result.output

    def test_summarize(self, tmp_path):
        path = tmp_path / 'rows.csv'
        write_rows([row(0, 'M', 100.0), row(0, 'UCB:lambda=1', 110.0),
                    row(1, 'M', 100.0), row(1, 'UCB:lambda=1', 120.0)], str(path))
        result = self.invoke('summarize', str(path))
        assert result.exit_code == 0
        assert 'UCB:lambda=1' in result.output

    def test_dot(self):
        result = self.invoke('dot', '--walk', '1-4-1')
        assert result.exit_code == 0
        assert result.output.count('color=red') == 2

    def test_table3_matches_reference(self):
        result = self.invoke('table3', '--seeds', '1')
        assert result.exit_code == 0
        assert 'Optimal' in result.output
        assert '1-4-1-2-5-3' in result.output
        assert self.invoke('reference', '--seeds', '1').exit_code == 0


@pytest.mark.slow
def test_sample_path_beats_myopic_on_sparse_graphs():
    design = ExperimentDesign(sizes=(20,), edge_probabilities=(0.2,), replications=30,
                              policies=('M', 'SC:beta=1'))
    rows = run_sweep(design, parallelism=2)
    assert len(rows) == 60
    sc = next(r for r in summarize(rows) if r.family == 'SC')
    assert sc.replications == 30
    assert sc.mean_improvement > 5.0
    assert sc.interval[0] > 0.0
