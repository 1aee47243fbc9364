"""cphazard/config/logging_config.py 的单元测试。"""

import logging
from pathlib import Path
from typing import Iterator

import pytest

from cphazard.config.logging_config import LoggingConfig, LogManager, get_log_manager, get_logger, init_log_manager
from cphazard.config.manager import ConfigManager


@pytest.fixture(autouse=True)
def restore_default_logging() -> Iterator[None]:
    """每个测试后恢复默认日志管理器"""
    yield
    init_log_manager(LoggingConfig())


@pytest.fixture
def file_config(tmp_path: Path) -> LoggingConfig:
    return LoggingConfig(level="DEBUG", console_enabled=False, file_enabled=True, file_path=str(tmp_path / "logs" / "run.log"))


class TestLoggingConfig:
    """日志级别解析。"""

    @pytest.mark.parametrize(("name", "expected"), [("DEBUG", logging.DEBUG), ("info", logging.INFO), (" error ", logging.ERROR)])
    def test_known_levels(self, name: str, expected: int) -> None:
        assert LoggingConfig(level=name).get_log_level() == expected

    def test_unknown_level_falls_back_to_warning(self) -> None:
        assert LoggingConfig(level="LOUD").get_log_level() == logging.WARNING


class TestLogManager:
    """包日志器管理。"""

    def test_file_output(self, file_config: LoggingConfig) -> None:
        manager = init_log_manager(file_config)
        manager.get_logger("cphazard.test").debug("滤波步数 100")
        for handler in manager.package_logger.handlers:
            handler.flush()
        assert "滤波步数 100" in Path(file_config.file_path).read_text(encoding="utf-8")

    def test_root_logger_untouched(self) -> None:
        root_handlers = list(logging.getLogger().handlers)
        manager = LogManager(LoggingConfig())
        manager.configure_logging()
        assert list(logging.getLogger().handlers) == root_handlers
        assert manager.package_logger.propagate is False

    def test_reconfigure_does_not_duplicate_handlers(self) -> None:
        manager = LogManager(LoggingConfig())
        manager.configure_logging()
        manager.configure_logging()
        assert len(manager.package_logger.handlers) == 1

    def test_foreign_names_are_nested(self) -> None:
        assert get_logger("outside").name == "cphazard.outside"
        assert get_logger("cphazard.core.model").name == "cphazard.core.model"

    def test_set_level(self) -> None:
        manager = init_log_manager(LoggingConfig())
        manager.set_level("ERROR")
        assert manager.config.level == "ERROR"
        assert manager.package_logger.level == logging.ERROR
        assert all(h.level == logging.ERROR for h in manager.package_logger.handlers)

    def test_close_detaches_handlers(self, file_config: LoggingConfig) -> None:
        manager = init_log_manager(file_config)
        manager.close()
        assert manager.package_logger.handlers == []


class TestConfigManagerLogging:
    """配置加载时初始化日志。"""

    def test_logging_section_applied(self) -> None:
        ConfigManager().load(overrides={"logging.level": "ERROR"})
        assert get_log_manager().config.level == "ERROR"
