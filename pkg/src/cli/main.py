"""
embedlab command-line interface

    embedlab embed-sweep   --n 400 --delta 4 --p-grid 0.1:0.9:0.1 --trials 30 --out trees.csv
    embedlab rainbow-sweep --n 200 --d 2 --alpha 0.5 --p-grid 0.2,0.4 --out rainbow.csv
    embedlab gen-target    --target girth7_subdivided --n 300 --out H.txt
    embedlab validate      --target-file H.txt --partition-file P.txt

Sweeps exit 0 whenever the run completes, whatever the trial outcomes.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import click
import yaml
from click.core import ParameterSource
from pydantic import ValidationError

from src.config import BASE_SEED, DEFAULT_WORKERS, OUTPUT_DIR, configure_logging
from src.embed import verify_embedding
from src.errors import EmbedLabError, InfeasibleParameters
from src.experiment_runner import run_sweep
from src.graph_core import RandomSource, girth, max_density
from src.host_prep import validate_host_plan
from src.models import EpsPolicy, ExperimentConfig, Mode, PartitionChoice
from src.partition import validate_partition
from src.rainbow import verify_rainbow
from src.serialization import (
    read_colored_edge_list,
    read_edge_list,
    read_embedding,
    read_host_plan,
    read_partition,
    write_edge_list,
)
from src.target_generators import TargetFamily, generate_target

logger = logging.getLogger(__name__)

FAMILY_NAMES = [f.value for f in TargetFamily if f is not TargetFamily.FILE]

# CLI option name -> ExperimentConfig field
SWEEP_FIELDS = {
    'n': 'n', 'delta': 'delta', 'd': 'd', 'eps': 'eps', 'alpha': 'alpha',
    'p_grid': 'p_grid', 'trials': 'trials', 'seed': 'seed', 'out': 'out',
    'workers': 'workers', 'partition': 'partition', 'eps_policy': 'eps_policy',
    'min_slice': 'min_slice', 'pool_size': 'pool_size', 'tail_size': 'tail_size',
    'out_degree': 'out_degree',
}


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON or YAML sweep config into a plain dict."""
    text = Path(path).read_text(encoding='utf-8')
    if path.endswith('.json'):
        data = json.loads(text)
    else:
        data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise click.BadParameter(f"{path} must hold a mapping", param_hint='--config')
    return {key.replace('-', '_'): value for key, value in data.items()}


def resolve_target(value: Optional[str]) -> Dict[str, Any]:
    """A family name selects a generator; anything else is an edge-list path."""
    if value is None:
        return {}
    if value in FAMILY_NAMES:
        return {'target': value}
    return {'target': TargetFamily.FILE.value, 'target_path': value}


def build_config(ctx: click.Context, mode: Mode, params: Dict[str, Any]) -> ExperimentConfig:
    """
    Merge defaults, the --config file and explicit flags (flags win).

    Raises:
        click.UsageError on an invalid combination
    """
    merged: Dict[str, Any] = {'seed': BASE_SEED, 'workers': DEFAULT_WORKERS,
                              'out': f"{OUTPUT_DIR}/{mode.value}-sweep.csv"}
    if params['config']:
        merged.update(load_config_file(params['config']))
    merged['mode'] = mode.value

    for option, field in SWEEP_FIELDS.items():
        value = params[option]
        explicit = ctx.get_parameter_source(option) is ParameterSource.COMMANDLINE
        if value is not None and (explicit or field not in merged):
            merged[field] = value
    merged.update(resolve_target(params['target']))
    if params['no_timing']:
        merged['timing'] = False
    if params['fixed_target']:
        merged['fixed_target'] = True

    try:
        return ExperimentConfig(**merged)
    except ValidationError as exc:
        raise click.UsageError(str(exc))


def sweep_options(func):
    """Options shared by embed-sweep and rainbow-sweep."""
    options = [
        click.option('--n', type=int, help='Vertex count'),
        click.option('--delta', type=int, help='Maximum degree bound'),
        click.option('--d', type=int, help='Density bound'),
        click.option('--eps', type=float, help='Top-layer fraction'),
        click.option('--alpha', type=float, help='Color slack (rainbow)'),
        click.option('--p-grid', 'p_grid', help='a:b:step or comma-separated list'),
        click.option('--trials', type=int, help='Trials per grid point'),
        click.option('--seed', type=int, help='Base seed'),
        click.option('--target', help=f"Family ({', '.join(FAMILY_NAMES)}) or edge-list path"),
        click.option('--out', help='Trial CSV path'),
        click.option('--config', 'config', type=click.Path(exists=True, dir_okay=False),
                     help='JSON or YAML config; explicit flags override it'),
        click.option('--workers', type=int, help='Worker processes'),
        click.option('--partition', type=click.Choice([c.value for c in PartitionChoice])),
        click.option('--eps-policy', 'eps_policy', type=click.Choice([e.value for e in EpsPolicy])),
        click.option('--min-slice', 'min_slice', type=int, help='Lower bound on host slice size'),
        click.option('--pool-size', 'pool_size', type=int, help='Phase I pool size override'),
        click.option('--tail-size', 'tail_size', type=int, help='Rainbow tail size override'),
        click.option('--out-degree', 'out_degree', type=int, help='Phase II out-degree override'),
        click.option('--fixed-target', 'fixed_target', is_flag=True, help='One target for all trials'),
        click.option('--no-timing', 'no_timing', is_flag=True, help='Write ms=0 for byte-stable output'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run(ctx: click.Context, mode: Mode, params: Dict[str, Any]) -> None:
    cfg = build_config(ctx, mode, params)
    try:
        result = run_sweep(cfg)
    except InfeasibleParameters as exc:
        raise click.ClickException(str(exc))

    click.echo(result.summary[['p', 'trials', 'successes', 'success_fraction', 'ci_low', 'ci_high']]
               .to_string(index=False))
    click.echo(f"inversions: {result.inversions}")
    click.echo(f"rows written to {cfg.out}")


@click.group()
@click.option('--log-level', 'log_level', default=None, help='DEBUG, INFO, WARNING ...')
def cli(log_level: Optional[str]) -> None:
    """Layered-partition embeddings of sparse graphs into random hosts."""
    configure_logging(log_level)


@cli.command('embed-sweep')
@sweep_options
@click.pass_context
def embed_sweep(ctx: click.Context, **params) -> None:
    """Success rate of the matching-based embedding across a p grid."""
    _run(ctx, Mode.EMBED, params)


@cli.command('rainbow-sweep')
@sweep_options
@click.pass_context
def rainbow_sweep(ctx: click.Context, **params) -> None:
    """Success rate of the rainbow procedure across a p grid."""
    _run(ctx, Mode.RAINBOW, params)


@cli.command('gen-target')
@click.option('--target', type=click.Choice(FAMILY_NAMES), default=TargetFamily.SPANNING_TREE.value)
@click.option('--n', type=int, required=True)
@click.option('--delta', type=int, default=4)
@click.option('--d', type=int, default=2)
@click.option('--seed', type=int, default=BASE_SEED)
@click.option('--out', required=True, help='Edge-list path')
def gen_target(target: str, n: int, delta: int, d: int, seed: int, out: str) -> None:
    """Write one random target as an edge list."""
    try:
        graph = generate_target(TargetFamily(target), n, delta, d, RandomSource(seed, 'target'))
    except InfeasibleParameters as exc:
        raise click.ClickException(str(exc))
    write_edge_list(graph, out)
    click.echo(f"{target}: n={graph.n} m={graph.num_edges} max degree={graph.max_degree()} "
               f"density={max_density(graph)} girth={girth(graph)}")


@cli.command('validate')
@click.option('--target-file', 'target_file', type=click.Path(exists=True), required=True)
@click.option('--partition-file', 'partition_file', type=click.Path(exists=True))
@click.option('--host-file', 'host_file', type=click.Path(exists=True))
@click.option('--plan-file', 'plan_file', type=click.Path(exists=True))
@click.option('--embedding-file', 'embedding_file', type=click.Path(exists=True))
@click.option('--colored', is_flag=True, help='Host is colored; check the copy is rainbow')
def validate(target_file, partition_file, host_file, plan_file, embedding_file, colored) -> None:
    """Re-check saved partitions, host plans and embeddings. Exits 1 on any failure."""
    problems = []
    try:
        H = read_edge_list(target_file)
        if partition_file:
            report = validate_partition(H, read_partition(partition_file))
            problems += [f"partition: {issue}" for issue in report.failures()]
        if host_file:
            colored_host = read_colored_edge_list(host_file) if colored else None
            G = colored_host.base if colored_host else read_edge_list(host_file)
            if plan_file:
                problems += [f"plan: {issue}" for issue in validate_host_plan(G, read_host_plan(plan_file))]
            if embedding_file:
                f = read_embedding(embedding_file, H if colored else None)
                if colored_host:
                    check = verify_rainbow(H, colored_host, f)
                else:
                    check = verify_embedding(H, G, f.mapping)
                if not check.passed:
                    problems.append(f"embedding: {check.reason}")
        elif plan_file or embedding_file:
            raise click.UsageError("--plan-file and --embedding-file need --host-file")
    except (ValueError, EmbedLabError) as exc:
        raise click.ClickException(str(exc))

    for problem in problems:
        click.echo(problem)
    if problems:
        raise SystemExit(1)
    click.echo("ok")


if __name__ == '__main__':
    cli()
