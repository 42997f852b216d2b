"""
Experiment Runner - p-sweeps over seeded trials
Runs the embedding or rainbow pipeline on fresh random hosts and records one row per trial
"""

import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd

from src.embed import embed, verify_embedding
from src.errors import (
    CliqueAssignmentFailure,
    EmbeddingError,
    HallViolation,
    HostPrepError,
    InvariantViolation,
    NotInFamily,
    PartitionError,
    RainbowError,
    WtTooSmall,
)
from src.graph_core import Graph, RandomSource, derive_seed, gcnp_split_generate, girth, gnp_generate
from src.host_prep import build_host_plan
from src.models import EpsPolicy, ExperimentConfig, Mode, Outcome, PartitionChoice, TrialRecord
from src.partition import LayeredPartition, as_fraction, partition_general, partition_girth7, validate_partition
from src.rainbow import color_count, run_rainbow_pipeline
from src.results_tracker import ResultsTracker
from src.target_generators import TargetFamily, generate_target

logger = logging.getLogger(__name__)


class ThresholdKind(str, Enum):
    TREES = 'trees'
    BOUNDED_DENSITY = 'bounded_density'
    GIRTH7 = 'girth7'
    RAINBOW = 'rainbow'


def threshold_probability(kind: ThresholdKind, n: int, delta: int, d: int) -> float:
    """
    Edge probability above which the universality statements kick in.

    Orientation only: at desk-scale n these values are far above 1.

    Args:
        kind: Which statement
        n: Vertex count
        delta: Maximum degree bound
        d: Density bound

    Returns:
        The threshold value, not clipped to [0, 1]
    """
    kind = ThresholdKind(kind)
    log_n = math.log(n)
    if kind is ThresholdKind.RAINBOW:
        return n ** (-1 / d) * log_n ** (5 / d)
    exponent = {
        ThresholdKind.TREES: -1 / 2,
        ThresholdKind.BOUNDED_DENSITY: -1 / (2 * d),
        ThresholdKind.GIRTH7: -1 / d,
    }[kind]
    return delta ** 12 * n ** exponent * log_n ** 3


def trial_seed(base_seed: int, p_index: int, trial: int) -> int:
    """Seed of one trial; replay it with RandomSource(trial_seed(...))."""
    return derive_seed(base_seed, p_index, trial)


def fixed_target_source(base_seed: int) -> RandomSource:
    return RandomSource(derive_seed(base_seed, 'fixed-target'), 'target')


def _partition(H: Graph, cfg: ExperimentConfig, epsilon) -> LayeredPartition:
    choice = cfg.partition
    if choice is PartitionChoice.AUTO:
        choice = PartitionChoice.GIRTH7 if girth(H) >= 7 else PartitionChoice.GENERAL
    build = partition_girth7 if choice is PartitionChoice.GIRTH7 else partition_general
    return build(H, cfg.delta, cfg.d, epsilon)


def _partition_with_policy(H: Graph, cfg: ExperimentConfig) -> Tuple[LayeredPartition, Optional[float]]:
    """
    Build the partition; under the fit policy a WtTooSmall failure is retried
    once at eps = achievable / n. Returns the partition and the fitted eps (or None).
    """
    epsilon = as_fraction(cfg.eps)
    try:
        return _partition(H, cfg, epsilon), None
    except WtTooSmall as exc:
        if cfg.eps_policy is not EpsPolicy.FIT or exc.achievable < 1:
            raise
        fitted = Fraction(exc.achievable, H.n)
        logger.warning(f"eps {cfg.eps} needs {exc.required} top vertices, only {exc.achievable} "
                       f"available; retrying with eps={float(fitted):.4f}")
        return _partition(H, cfg, fitted), float(fitted)


def _embed_trial(H: Graph, p: float, cfg: ExperimentConfig, source: RandomSource) -> Tuple[Outcome, int, Optional[float]]:
    try:
        P, fitted = _partition_with_policy(H, cfg)
    except PartitionError:
        return Outcome.PARTITION_FAIL, 0, None

    report = validate_partition(H, P)
    if not report.passed:
        raise InvariantViolation(f"partition failed validation: {report.failures()}")

    G = gnp_generate(H.n, p, source.child('host'))
    try:
        plan = build_host_plan(G, P.effective_depth, P.epsilon, cfg.d, source.child('plan'), cfg.min_slice)
        f = embed(H, P, G, plan, source.child('embed'))
    except (HostPrepError, CliqueAssignmentFailure) as exc:
        return Outcome.HOST_PREP_FAIL, getattr(exc, 'step', 0), fitted
    except HallViolation as exc:
        return Outcome.HALL_FAIL, exc.step, fitted
    except EmbeddingError as exc:
        return Outcome.PARTITION_FAIL, exc.step, fitted

    check = verify_embedding(H, G, f.mapping)
    if not check.passed:
        raise InvariantViolation(f"embedding reported success but {check.reason}")
    return Outcome.SUCCESS, P.effective_depth + 1, fitted


def _rainbow_trial(H: Graph, p: float, cfg: ExperimentConfig, source: RandomSource) -> Tuple[Outcome, int, Optional[float]]:
    c = color_count(H.num_edges, cfg.alpha)
    G1, G2 = gcnp_split_generate(H.n, p, c, source.child('host'))
    try:
        run_rainbow_pipeline(
            H, G1, G2, cfg.delta, cfg.d, cfg.alpha, source.child('rainbow'),
            pool_override=cfg.pool_size,
            tail_override=cfg.tail_size,
            k_override=cfg.out_degree,
        )
    except NotInFamily:
        return Outcome.PARTITION_FAIL, 0, None
    except RainbowError as exc:
        return Outcome.RAINBOW_PROCESS_FAIL, exc.step, None
    return Outcome.SUCCESS, 1, None


def run_trial(cfg: ExperimentConfig, p_index: int, trial: int, target: Optional[Graph] = None) -> TrialRecord:
    """
    Run one seeded trial at grid point p_index.

    Failures named by the algorithms become outcome rows. InvariantViolation
    and InfeasibleParameters propagate.
    """
    p = cfg.p_grid[p_index]
    seed = trial_seed(cfg.seed, p_index, trial)
    source = RandomSource(seed)

    started = time.perf_counter()
    H = target
    if H is None:
        path = Path(cfg.target_path) if cfg.target_path else None
        H = generate_target(cfg.target, cfg.n, cfg.delta, cfg.d, source.child('target'), path)

    try:
        if cfg.mode is Mode.RAINBOW:
            outcome, step, fitted = _rainbow_trial(H, p, cfg, source)
        else:
            outcome, step, fitted = _embed_trial(H, p, cfg, source)
    except InvariantViolation as exc:
        logger.error(f"p={p} trial={trial} seed={seed}: internal invariant broken: {exc}")
        raise
    ms = int((time.perf_counter() - started) * 1000) if cfg.timing else 0

    logger.debug(f"p={p} trial={trial} seed={seed}: {outcome.value} at step {step}")
    return TrialRecord(p=p, seed=seed, outcome=outcome, step=step, ms=ms, trial=trial, eps_used=fitted)


def _run_task(args: Tuple[ExperimentConfig, int, int, Optional[Graph]]) -> TrialRecord:
    return run_trial(*args)


@dataclass
class SweepResult:
    records: List[TrialRecord]
    summary: pd.DataFrame
    inversions: int


def summary_header(cfg: ExperimentConfig, records: List[TrialRecord]) -> Dict[str, str]:
    if cfg.mode is Mode.RAINBOW:
        kind = ThresholdKind.RAINBOW
    elif cfg.target is TargetFamily.SPANNING_TREE:
        kind = ThresholdKind.TREES
    elif cfg.target is TargetFamily.GIRTH7_SUBDIVIDED:
        kind = ThresholdKind.GIRTH7
    else:
        kind = ThresholdKind.BOUNDED_DENSITY
    fitted = sorted({r.eps_used for r in records if r.eps_used is not None})
    header = {
        'mode': cfg.mode.value,
        'target': cfg.target.value,
        'n': str(cfg.n),
        'delta': str(cfg.delta),
        'd': str(cfg.d),
        'eps': str(cfg.eps),
        'base_seed': str(cfg.seed),
        f'threshold_{kind.value}': f"{threshold_probability(kind, cfg.n, cfg.delta, cfg.d):.6g}",
    }
    if cfg.mode is Mode.RAINBOW:
        header['alpha'] = str(cfg.alpha)
    if fitted:
        header['eps_fitted'] = ','.join(f"{e:.6g}" for e in fitted)
    return header


def run_sweep(cfg: ExperimentConfig) -> SweepResult:
    """
    Run every (p, trial) pair of the config and write the CSVs.

    Rows are sorted by (p, trial) whatever order the workers finish in, so
    output is reproducible for a fixed config (byte-identical with timing off).

    Args:
        cfg: Validated sweep configuration

    Returns:
        SweepResult with the records, the per-p summary and the inversion count
    """
    target = None
    if cfg.fixed_target or cfg.target is TargetFamily.FILE:
        path = Path(cfg.target_path) if cfg.target_path else None
        target = generate_target(cfg.target, cfg.n, cfg.delta, cfg.d, fixed_target_source(cfg.seed), path)
        logger.info(f"fixed target: {target!r}")

    tasks = [(cfg, i, j, target) for i in range(len(cfg.p_grid)) for j in range(cfg.trials)]
    logger.info(f"{cfg.mode.value} sweep: {len(cfg.p_grid)} grid points x {cfg.trials} trials, "
                f"{cfg.workers} worker(s)")

    if cfg.workers > 1:
        with Pool(processes=cfg.workers) as pool:
            records = pool.map(_run_task, tasks)
    else:
        records = [_run_task(task) for task in tasks]

    tracker = ResultsTracker(cfg.out)
    summary = tracker.write(records, summary_header(cfg, records))
    inversions = ResultsTracker.count_inversions(summary)
    for row in summary.itertuples(index=False):
        logger.info(f"p={row.p}: {row.successes}/{row.trials} successes "
                    f"[{row.ci_low:.3f}, {row.ci_high:.3f}]")
    return SweepResult(records=records, summary=summary, inversions=inversions)
