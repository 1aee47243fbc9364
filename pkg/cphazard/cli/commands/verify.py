"""
Verify command - 验收套件
"""

from typing import Optional

import click

from ...models.constants import Experiment
from .utils import common_run_options, execute, load_config, run_overrides


@click.command()
@common_run_options
@click.option("--scale", type=float, help="样本数乘数（下限 1000）")
@click.option(
    "--results", "results_file", type=click.Path(dir_okay=False), help="验收结果文件（默认 <out>/verify_results.csv，已存在时覆盖）"
)
@click.pass_context
def verify(
    ctx: click.Context,
    preset: Optional[str],
    seed: Optional[int],
    dt: Optional[float],
    n_paths: Optional[int],
    out: Optional[str],
    config_path: Optional[str],
    workers: Optional[int],
    scale: Optional[float],
    results_file: Optional[str],
) -> int:
    """运行全部验收检查，任一项未通过时结果文件照常写出，退出码为 2"""
    overrides = run_overrides(Experiment.VERIFY, seed, dt, n_paths, out, workers)
    overrides["verify.scale"] = scale
    overrides["verify.results_file"] = results_file
    return execute(load_config(ctx, preset, config_path, overrides))
