"""
Calibrate command - 利率序列统计
"""

from typing import Optional

import click

from ...models.constants import Experiment
from .utils import common_run_options, execute, load_config, run_overrides


@click.command()
@common_run_options
@click.option(
    "--input", "-i", "input_path", required=True, type=click.Path(exists=True, dir_okay=False), help="单列利率 CSV（可带表头）"
)
@click.pass_context
def calibrate(
    ctx: click.Context,
    preset: Optional[str],
    seed: Optional[int],
    dt: Optional[float],
    n_paths: Optional[int],
    out: Optional[str],
    config_path: Optional[str],
    workers: Optional[int],
    input_path: str,
) -> int:
    """估计利率均值、标准差与 95% 置信区间（同时给出观测数 n）"""
    overrides = run_overrides(Experiment.CALIBRATE, seed, dt, n_paths, out, workers)
    overrides["input_path"] = input_path
    return execute(load_config(ctx, preset, config_path, overrides), show_progress=False)
