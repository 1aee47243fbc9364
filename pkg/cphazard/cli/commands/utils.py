"""
CLI Utilities - 共享的辅助函数
"""

import functools
from typing import Any, Callable, Dict, Optional, TypeVar, cast

import click
from tabulate import tabulate

from ...config.configs import RunConfig
from ...config.manager import ConfigManager
from ...config.presets import PRESETS
from ...core.exceptions import AcceptanceError
from ...manager.experiments import ExperimentOutcome, run_experiment
from ...manager.progress import ConsoleProgress

F = TypeVar("F", bound=Callable[..., Any])


def common_run_options(func: F) -> F:
    """添加通用的运行选项装饰器（预设、种子、步长、路径数、输出目录、配置文件、线程数）"""

    @click.option("--preset", type=click.Choice(sorted(PRESETS)), help="内置参数预设（默认 table2）")
    @click.option("--seed", type=int, help="根随机种子")
    @click.option("--dt", type=float, help="时间步长（年）")
    @click.option("--n-paths", "n_paths", type=int, help="模拟路径数")
    @click.option("--out", "-o", "out", type=click.Path(file_okay=False), help="输出目录")
    @click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="key=value 配置文件")
    @click.option("--workers", type=click.IntRange(1, 64), help="并行线程数（不影响结果）")
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        return func(*args, **kwargs)

    return cast(F, wrapper)


def run_overrides(
    experiment: str,
    seed: Optional[int],
    dt: Optional[float],
    n_paths: Optional[int],
    out: Optional[str],
    workers: Optional[int],
) -> Dict[str, Any]:
    """通用选项 → 点分路径覆盖项（None 表示未指定）"""
    return {
        "experiment": experiment,
        "run.seed": seed,
        "run.dt": dt,
        "run.n_paths": n_paths,
        "output_dir": out,
        "run.workers": workers,
    }


def load_config(
    ctx: click.Context, preset: Optional[str], config_path: Optional[str], overrides: Dict[str, Any]
) -> RunConfig:
    """按 预设 → 文件 → 命令行 构建配置，--verbose 时日志级别为 DEBUG"""
    if ctx.obj and ctx.obj.get("verbose"):
        overrides = {**overrides, "logging.level": "DEBUG"}
    return ConfigManager().load(preset=preset, config_path=config_path, overrides=overrides)


def execute(config: RunConfig, show_progress: bool = True) -> int:
    """运行实验、打印摘要表格并返回退出码

    Raises:
        AcceptanceError: 有验收项未通过（摘要与结果文件已输出）
    """
    if show_progress:
        with ConsoleProgress() as progress:
            outcome = run_experiment(config, progress)
    else:
        outcome = run_experiment(config)
    echo_summary(outcome)
    if outcome.failed:
        echo_warning(f"{len(outcome.failed)} 项验收未通过，结果已写出")
        raise AcceptanceError(outcome.failed)
    return outcome.exit_code


def echo_summary(outcome: ExperimentOutcome) -> None:
    """摘要表格与写出的文件"""
    if outcome.summary:
        click.echo(tabulate(outcome.summary, headers=list(outcome.headers), floatfmt=".6g"))
    for path in outcome.files:
        echo_info(f"写出 {path}")
    if outcome.exit_code == 0:
        echo_success("完成")


def echo_success(message: str) -> None:
    """显示成功消息"""
    click.echo(f"[OK] {message}")


def echo_warning(message: str) -> None:
    """显示警告消息"""
    click.echo(f"[WARNING] {message}", err=True)


def echo_info(message: str) -> None:
    """显示信息消息"""
    click.echo(f"[INFO] {message}")
