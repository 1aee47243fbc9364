"""
Simulate command - 场景模拟
"""

from typing import Optional

import click

from ...models.constants import Experiment
from .utils import common_run_options, execute, load_config, run_overrides


@click.command()
@common_run_options
@click.option("--horizon", type=float, help="模拟区间（年）")
@click.pass_context
def simulate(
    ctx: click.Context,
    preset: Optional[str],
    seed: Optional[int],
    dt: Optional[float],
    n_paths: Optional[int],
    out: Optional[str],
    config_path: Optional[str],
    workers: Optional[int],
    horizon: Optional[float],
) -> int:
    """模拟 (ξ, Θ, τ) 与观测路径，每条路径写一个 CSV"""
    overrides = run_overrides(Experiment.SIMULATE, seed, dt, n_paths, out, workers)
    overrides["run.horizon"] = horizon
    return execute(load_config(ctx, preset, config_path, overrides))
