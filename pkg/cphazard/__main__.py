"""支持 ``python -m cphazard`` 调用。"""

from .cli import cli

if __name__ == "__main__":
    cli()
