"""cphazard/core/exit_codes.py 的单元测试。"""

from cphazard.core.exit_codes import ExitCode


class TestExitCode:
    """验证退出码常量值正确且无重复。"""

    def test_exit_code_values(self) -> None:
        assert ExitCode.SUCCESS == 0
        assert ExitCode.VALIDATION_ERROR == 1
        assert ExitCode.ACCEPTANCE_FAILED == 2

    def test_no_duplicate_values(self) -> None:
        values = [ExitCode.SUCCESS, ExitCode.VALIDATION_ERROR, ExitCode.ACCEPTANCE_FAILED]
        assert len(values) == len(set(values)), "Exit code values must be unique"
