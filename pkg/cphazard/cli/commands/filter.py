"""
Filter command - 滤波轨迹
"""

from typing import Optional

import click

from ...models.constants import Experiment
from .utils import common_run_options, execute, load_config, run_overrides


@click.command(name="filter")
@common_run_options
@click.option("--horizon", type=float, help="模拟区间（年）")
@click.option("--milstein/--euler", default=None, help="直接格式是否加 Milstein 修正")
@click.pass_context
def filter_command(
    ctx: click.Context,
    preset: Optional[str],
    seed: Optional[int],
    dt: Optional[float],
    n_paths: Optional[int],
    out: Optional[str],
    config_path: Optional[str],
    workers: Optional[int],
    horizon: Optional[float],
    milstein: Optional[bool],
) -> int:
    """沿模拟场景运行 G^Y、F^Y 与几率比滤波，输出 μ、μ̂、μ̂^F"""
    overrides = run_overrides(Experiment.FILTER, seed, dt, n_paths, out, workers)
    overrides["run.horizon"] = horizon
    overrides["run.milstein"] = milstein
    return execute(load_config(ctx, preset, config_path, overrides))
