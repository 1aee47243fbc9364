"""
cphazard CLI主入口
提供模拟、滤波、定价、验收、敏感性与利率校准命令
"""

import sys

import click

from .. import __version__
from ..config.logging_config import get_log_manager
from ..core.exceptions import AcceptanceError, CphazardError, IoError
from ..core.exit_codes import ExitCode
from .commands.calibrate import calibrate
from .commands.filter import filter_command
from .commands.price import price
from .commands.sensitivity import sensitivity
from .commands.simulate import simulate
from .commands.verify import verify


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enables verbose mode.")
@click.version_option(version=__version__)
@click.pass_context
def main(ctx: click.Context, verbose: bool) -> None:
    """cphazard - 风险率变点模型的模拟、滤波与定价工具"""
    ctx.obj = {}
    ctx.obj["verbose"] = verbose
    if verbose:
        get_log_manager().set_level("DEBUG")


def cli() -> None:
    """CLI 入口点，包含统一异常捕获。"""
    try:
        rv = main(standalone_mode=False)
        # standalone_mode=False 下 click 不会把命令的 return 值映射成退出码
        if isinstance(rv, int) and rv != 0:
            sys.exit(rv)
    except click.exceptions.Abort:
        sys.exit(ExitCode.VALIDATION_ERROR)
    except click.exceptions.ClickException as e:
        e.show()
        sys.exit(ExitCode.VALIDATION_ERROR)
    except AcceptanceError as e:
        click.echo(f"验收未通过: {e}", err=True)
        sys.exit(ExitCode.ACCEPTANCE_FAILED)
    except IoError as e:
        click.echo(f"输出错误: {e}", err=True)
        sys.exit(ExitCode.VALIDATION_ERROR)
    except CphazardError as e:
        click.echo(f"错误: {e}", err=True)
        sys.exit(ExitCode.VALIDATION_ERROR)
    except Exception as e:
        click.echo(f"未预期的错误: {e}", err=True)
        sys.exit(ExitCode.VALIDATION_ERROR)


# 注册所有命令
main.add_command(simulate)
main.add_command(filter_command)
main.add_command(price)
main.add_command(verify)
main.add_command(sensitivity)
main.add_command(calibrate)


if __name__ == "__main__":
    main()
