"""
Price command - 定价
"""

from typing import Optional, Tuple

import click

from ...models.constants import Experiment
from .utils import common_run_options, execute, load_config, run_overrides


@click.command()
@common_run_options
@click.option("--rate", type=float, help="常数无风险利率 r")
@click.option("--maturity", type=float, help="到期 T（年）")
@click.option("--delta", "deltas", type=float, multiple=True, help="回收比例 δ（可多次使用）")
@click.pass_context
def price(
    ctx: click.Context,
    preset: Optional[str],
    seed: Optional[int],
    dt: Optional[float],
    n_paths: Optional[int],
    out: Optional[str],
    config_path: Optional[str],
    workers: Optional[int],
    rate: Optional[float],
    maturity: Optional[float],
    deltas: Tuple[float, ...],
) -> int:
    """可违约零息债价格曲线、付息债与 CDS 公平费率"""
    overrides = run_overrides(Experiment.PRICE, seed, dt, n_paths, out, workers)
    overrides["pricing.rate"] = rate
    overrides["pricing.maturity"] = maturity
    overrides["pricing.deltas"] = list(deltas) if deltas else None
    return execute(load_config(ctx, preset, config_path, overrides))
