"""
Sensitivity command - 阈值敏感性
"""

from typing import Optional

import click

from ...models.constants import Experiment
from .utils import common_run_options, execute, load_config, run_overrides


@click.command()
@common_run_options
@click.option("--n-traces", "n_traces", type=click.IntRange(0, 100), help="每个 Case 输出的 Π 轨迹条数")
@click.option("--fixed-latent/--random-latent", "fixed_latent", default=None, help="是否所有路径共用同一个 (ξ, Θ)")
@click.pass_context
def sensitivity(
    ctx: click.Context,
    preset: Optional[str],
    seed: Optional[int],
    dt: Optional[float],
    n_paths: Optional[int],
    out: Optional[str],
    config_path: Optional[str],
    workers: Optional[int],
    n_traces: Optional[int],
    fixed_latent: Optional[bool],
) -> int:
    """Case A/B/C 下 Π 在 ξ/2 与 2ξ 时刻越过阈值的路径比例"""
    overrides = run_overrides(Experiment.SENSITIVITY, seed, None, None, out, workers)
    overrides["sensitivity.dt"] = dt
    overrides["sensitivity.n_paths"] = n_paths
    overrides["sensitivity.n_traces"] = n_traces
    overrides["sensitivity.fixed_latent"] = fixed_latent
    return execute(load_config(ctx, preset, config_path, overrides))
