"""
批次进度显示

回调签名为 (检查名, 已完成批数, 总批数)。进度条写到 stderr，不影响结果文件与 stdout 表格。
"""

from typing import Any, Callable, Dict

import click

try:
    from rich.console import Console
    from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn, TimeRemainingColumn

    _HAS_RICH = True  # type: ignore
except ImportError:
    _HAS_RICH = False  # type: ignore

ProgressCallback = Callable[[str, int, int], None]


class ConsoleProgress:
    """以上下文管理器形式持有进度条，退出时停止"""

    def __init__(self) -> None:
        self._progress: Any = None
        self._tasks: Dict[str, Any] = {}
        if _HAS_RICH:
            self._progress = Progress(  # type: ignore
                TextColumn("[bold blue]{task.description}", justify="right"),  # type: ignore
                BarColumn(bar_width=None),  # type: ignore
                MofNCompleteColumn(),  # type: ignore
                "•",
                TimeElapsedColumn(),  # type: ignore
                "•",
                TimeRemainingColumn(),  # type: ignore
                console=Console(stderr=True),  # type: ignore
                transient=True,
            )

    def __enter__(self) -> "ConsoleProgress":
        if self._progress is not None:
            self._progress.start()
        return self

    def __exit__(self, *exc: Any) -> None:
        if self._progress is not None:
            self._progress.stop()

    def __call__(self, name: str, done: int, total: int) -> None:
        if self._progress is None:
            click.echo(f"\r{name}: {done}/{total}", nl=done >= total, err=True)
            return
        if name not in self._tasks:
            self._tasks[name] = self._progress.add_task(name, total=total)
        self._progress.update(self._tasks[name], completed=done, total=total)


def create_silent_progress_callback() -> ProgressCallback:
    """静默回调"""

    def progress_callback(name: str, done: int, total: int) -> None:
        pass

    return progress_callback
