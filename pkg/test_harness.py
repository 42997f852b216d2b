"""
Tests for sweep configuration, the trial runner, CSV output and the CLI
"""

import math

import pandas as pd
import pytest
from click.testing import CliRunner
from pydantic import ValidationError

from src.cli.main import cli
from src.embed import Embedding
from src.experiment_runner import (
    ThresholdKind,
    run_sweep,
    run_trial,
    threshold_probability,
    trial_seed,
)
from src.graph_core import RandomSource
from src.models import EpsPolicy, ExperimentConfig, Mode, Outcome, TrialRecord, parse_p_grid
from src.partition import partition_general
from src.results_tracker import CSV_COLUMNS, ResultsTracker, read_trials
from src.serialization import read_edge_list, write_edge_list, write_embedding, write_partition
from src.target_generators import spanning_tree


def tree_config(out, **overrides) -> ExperimentConfig:
    values = dict(
        mode=Mode.EMBED, n=40, delta=4, d=2, eps=0.05, eps_policy=EpsPolicy.FIT,
        p_grid=[1.0], trials=3, seed=11, out=str(out), timing=False,
    )
    values.update(overrides)
    return ExperimentConfig(**values)


def record(p, trial, outcome, step=0):
    return TrialRecord(p=p, seed=trial, outcome=outcome, step=step, trial=trial)


class TestConfig:
    def test_grid_string(self):
        cfg = ExperimentConfig(n=10, p_grid="0.1:0.3:0.1", out='x.csv')
        assert cfg.p_grid == [0.1, 0.2, 0.3]

    def test_grid_forms(self):
        assert parse_p_grid("0.2, 0.4") == [0.2, 0.4]
        assert parse_p_grid("0.1:1:0.3") == [0.1, 0.4, 0.7, 1.0]
        with pytest.raises(ValueError):
            parse_p_grid("0.5:0.1:0.1")

    def test_grid_range(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(n=10, p_grid=[0.0, 0.5], out='x.csv')

    def test_file_target_needs_path(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(n=10, p_grid=[0.5], out='x.csv', target='file')

    def test_girth7_partition_needs_matching_family(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(n=10, p_grid=[0.5], out='x.csv', partition='girth7')

    def test_trial_row_hides_bookkeeping(self):
        row = record(0.5, 3, Outcome.HALL_FAIL, 2).row()
        assert list(row) == CSV_COLUMNS
        assert row['outcome'] == 'hall_fail'


class TestThresholds:
    def test_trees(self):
        n = 10 ** 4
        assert threshold_probability('trees', n, 2, 2) == pytest.approx(2 ** 12 * n ** -0.5 * math.log(n) ** 3)

    def test_rainbow(self):
        assert threshold_probability(ThresholdKind.RAINBOW, 100, 4, 2) == pytest.approx(0.1 * math.log(100) ** 2.5)

    def test_girth7_below_bounded_density(self):
        n = 10 ** 6
        assert threshold_probability('girth7', n, 3, 3) < threshold_probability('bounded_density', n, 3, 3)


class TestResultsTracker:
    def test_summary(self):
        records = [
            record(0.2, 1, Outcome.SUCCESS, 4),
            record(0.1, 0, Outcome.SUCCESS, 4),
            record(0.1, 1, Outcome.HALL_FAIL, 2),
            record(0.2, 0, Outcome.SUCCESS, 4),
        ]
        summary = ResultsTracker('unused.csv').summarize(records)
        assert summary['p'].tolist() == [0.1, 0.2]
        assert summary['success_fraction'].tolist() == [0.5, 1.0]
        assert summary['hall_fail'].tolist() == [0.5, 0.0]
        assert summary['ci_high'].tolist() == [1.0, 1.0]
        outcome_columns = [o.value for o in Outcome]
        assert summary[outcome_columns].sum(axis=1).tolist() == pytest.approx([1.0, 1.0])

    def test_inversions(self):
        frame = pd.DataFrame({'success_fraction': [1.0, 0.5, 0.8, 0.2]})
        assert ResultsTracker.count_inversions(frame) == 2

    def test_write(self, tmp_path):
        out = tmp_path / 'trials.csv'
        tracker = ResultsTracker(str(out))
        tracker.write([record(0.3, 1, Outcome.PARTITION_FAIL), record(0.3, 0, Outcome.SUCCESS, 2)],
                      {'mode': 'embed'})
        assert out.read_text().splitlines() == [
            "p,seed,outcome,step,ms",
            "0.3,0,success,2,0",
            "0.3,1,partition_fail,0,0",
        ]
        lines = tracker.summary_path().read_text().splitlines()
        assert lines[:2] == ["# mode: embed", "# inversions: 0"]
        assert lines[2].startswith("p,trials,successes,success_fraction,ci_low,ci_high")


class TestSweeps:
    def test_trial_is_replayable(self, tmp_path):
        cfg = tree_config(tmp_path / 'a.csv')
        first = run_trial(cfg, 0, 2)
        assert first == run_trial(cfg, 0, 2)
        assert first.seed == trial_seed(11, 0, 2)

    def test_complete_host_always_succeeds(self, tmp_path):
        out = tmp_path / 'trees.csv'
        result = run_sweep(tree_config(out))
        assert [r.outcome for r in result.records] == [Outcome.SUCCESS] * 3
        assert all(r.step >= 1 for r in result.records)
        assert out.read_text().splitlines()[0] == "p,seed,outcome,step,ms"
        assert result.summary['success_fraction'].tolist() == [1.0]
        assert result.inversions == 0

    def test_reruns_are_byte_identical(self, tmp_path):
        run_sweep(tree_config(tmp_path / 'first.csv'))
        run_sweep(tree_config(tmp_path / 'second.csv'))
        assert (tmp_path / 'first.csv').read_bytes() == (tmp_path / 'second.csv').read_bytes()
        assert (tmp_path / 'first.csv.summary.csv').read_bytes() == (tmp_path / 'second.csv.summary.csv').read_bytes()

    def test_workers_do_not_change_output(self, tmp_path):
        run_sweep(tree_config(tmp_path / 'serial.csv', p_grid=[0.9, 1.0], trials=2))
        run_sweep(tree_config(tmp_path / 'pool.csv', p_grid=[0.9, 1.0], trials=2, workers=2))
        assert (tmp_path / 'serial.csv').read_bytes() == (tmp_path / 'pool.csv').read_bytes()

    def test_rainbow_fails_on_sparse_host(self, tmp_path):
        out = tmp_path / 'rainbow.csv'
        cfg = tree_config(out, mode=Mode.RAINBOW, n=30, p_grid=[0.01], trials=4)
        result = run_sweep(cfg)
        assert {r.outcome for r in result.records} == {Outcome.RAINBOW_PROCESS_FAIL}
        frame = read_trials(str(out))
        assert frame['outcome'].unique().tolist() == ['rainbow_process_fail']
        assert 'alpha' in tracker_header(out)

    def test_file_target(self, tmp_path):
        target = tmp_path / 'H.txt'
        write_edge_list(spanning_tree(40, 4, RandomSource(5)), target)
        cfg = tree_config(tmp_path / 'file.csv', target='file', target_path=str(target), trials=2)
        result = run_sweep(cfg)
        assert [r.outcome for r in result.records] == [Outcome.SUCCESS] * 2


def tracker_header(out) -> str:
    return ResultsTracker(str(out)).summary_path().read_text()


class TestCli:
    def test_gen_target(self, tmp_path):
        out = tmp_path / 'H.txt'
        result = CliRunner().invoke(cli, ['gen-target', '--target', 'spanning_tree', '--n', '20',
                                          '--seed', '3', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert 'n=20 m=19' in result.output
        assert read_edge_list(out).num_edges == 19

    def test_embed_sweep(self, tmp_path):
        out = tmp_path / 'sweep.csv'
        result = CliRunner().invoke(cli, [
            'embed-sweep', '--n', '40', '--eps', '0.05', '--eps-policy', 'fit', '--p-grid', '1.0',
            '--trials', '2', '--no-timing', '--out', str(out),
        ])
        assert result.exit_code == 0, result.output
        assert 'inversions: 0' in result.output
        assert len(read_trials(str(out))) == 2

    def test_config_file_with_override(self, tmp_path):
        out = tmp_path / 'sweep.csv'
        config = tmp_path / 'sweep.yaml'
        config.write_text(
            "n: 40\neps: 0.05\neps-policy: fit\np-grid: '0.9,1.0'\ntrials: 5\ntiming: false\n"
            f"out: {out}\n"
        )
        result = CliRunner().invoke(cli, ['embed-sweep', '--config', str(config), '--trials', '1'])
        assert result.exit_code == 0, result.output
        assert len(read_trials(str(out))) == 2

    def test_bad_config_is_a_usage_error(self, tmp_path):
        result = CliRunner().invoke(cli, ['embed-sweep', '--n', '40', '--p-grid', '1.5',
                                          '--out', str(tmp_path / 'x.csv')])
        assert result.exit_code == 2

    def test_validate(self, tmp_path, p10):
        target = tmp_path / 'H.txt'
        partition = tmp_path / 'P.txt'
        write_edge_list(p10, target)
        write_partition(partition_general(p10, 2, 2, 0.1), partition)
        result = CliRunner().invoke(cli, ['validate', '--target-file', str(target),
                                          '--partition-file', str(partition)])
        assert result.exit_code == 0, result.output
        assert result.output.strip() == 'ok'

    def test_validate_reports_bad_embedding(self, tmp_path, p10):
        target = tmp_path / 'H.txt'
        host = tmp_path / 'G.txt'
        embedding = tmp_path / 'f.txt'
        write_edge_list(p10, target)
        write_edge_list(p10, host)
        f = Embedding()
        f.assign(0, [(v, 9 - v if v in (0, 1) else v) for v in range(10)])
        write_embedding(f, embedding)
        result = CliRunner().invoke(cli, ['validate', '--target-file', str(target), '--host-file', str(host),
                                          '--embedding-file', str(embedding)])
        assert result.exit_code == 1
        assert 'embedding:' in result.output


@pytest.mark.slow
def test_tree_sweep_success_curve(tmp_path):
    cfg = tree_config(tmp_path / 'trees.csv', n=400, eps=0.1, p_grid="0.1:0.9:0.1", trials=30, seed=0)
    result = run_sweep(cfg)
    fractions = dict(zip(result.summary['p'], result.summary['success_fraction']))
    assert fractions[0.9] >= 0.9
    assert result.inversions <= 1
    successes = [r for r in result.records if r.outcome is Outcome.SUCCESS]
    assert all(r.step >= 1 for r in successes)

    again = run_sweep(cfg.model_copy(update={'out': str(tmp_path / 'again.csv')}))
    assert again.records == result.records
    assert (tmp_path / 'trees.csv').read_bytes() == (tmp_path / 'again.csv').read_bytes()
