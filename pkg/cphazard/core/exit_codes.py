"""退出码常量，用于 CLI 命令的退出状态区分。"""


class ExitCode:
    """CLI 命令退出码常量。"""

    SUCCESS = 0
    VALIDATION_ERROR = 1
    ACCEPTANCE_FAILED = 2
