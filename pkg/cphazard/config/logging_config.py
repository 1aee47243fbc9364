"""
日志管理配置

只配置 ``cphazard`` 包日志器（propagate=False），不改动根日志器；
控制台输出固定写到 stderr，结果文件和 stdout 摘要表格不受日志影响。
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, Optional

PACKAGE_LOGGER = "cphazard"

LEVEL_NAMES = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class LoggingConfig:
    """日志配置（对应配置文件中的 logging.* 键）"""

    level: str = "WARNING"
    console_enabled: bool = True
    file_enabled: bool = False
    file_path: str = "./logs/cphazard.log"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    date_format: str = "%Y-%m-%d %H:%M:%S"

    def get_log_level(self) -> int:
        """数值级别，未知名称按 WARNING 处理"""
        name = self.level.strip().upper()
        return int(getattr(logging, name)) if name in LEVEL_NAMES else logging.WARNING


class LogManager:
    """包日志器的管理器

    handler 在第一次取日志器时挂上；set_level 同时调整日志器和所有 handler。
    """

    ROOT_NAME = PACKAGE_LOGGER

    def __init__(self, config: LoggingConfig) -> None:
        self.config = config
        self._handlers: List[logging.Handler] = []
        self._configured = False

    @property
    def package_logger(self) -> logging.Logger:
        return logging.getLogger(self.ROOT_NAME)

    def _build_handlers(self) -> Iterator[logging.Handler]:
        if self.config.console_enabled:
            yield logging.StreamHandler(sys.stderr)
        if self.config.file_enabled:
            log_path = Path(self.config.file_path)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            yield logging.FileHandler(log_path, encoding="utf-8")

    def configure_logging(self) -> None:
        """挂上 handler；重复调用会先卸下旧的"""
        self.close()
        level = self.config.get_log_level()
        formatter = logging.Formatter(fmt=self.config.format, datefmt=self.config.date_format)

        logger = self.package_logger
        logger.setLevel(level)
        logger.propagate = False
        # 上一个管理器实例留下的 handler
        for stale in logger.handlers[:]:
            logger.removeHandler(stale)
            stale.close()

        for handler in self._build_handlers():
            handler.setLevel(level)
            handler.setFormatter(formatter)
            logger.addHandler(handler)
            self._handlers.append(handler)
        self._configured = True

    def close(self) -> None:
        """卸下并关闭本管理器挂上的 handler"""
        for handler in self._handlers:
            self.package_logger.removeHandler(handler)
            handler.close()
        self._handlers.clear()
        self._configured = False

    def get_logger(self, name: str) -> logging.Logger:
        """取包内日志器，包外名称挂到 ``cphazard.`` 下"""
        if not self._configured:
            self.configure_logging()
        if name != self.ROOT_NAME and not name.startswith(self.ROOT_NAME + "."):
            name = f"{self.ROOT_NAME}.{name}"
        return logging.getLogger(name)

    def set_level(self, level: str) -> None:
        """运行中修改级别（--verbose）"""
        self.config.level = level
        numeric = self.config.get_log_level()
        self.package_logger.setLevel(numeric)
        for handler in self.package_logger.handlers:
            handler.setLevel(numeric)


_log_manager: Optional[LogManager] = None


def get_log_manager() -> LogManager:
    """当前日志管理器，首次调用时按默认配置创建"""
    global _log_manager
    if _log_manager is None:
        _log_manager = LogManager(LoggingConfig())
    return _log_manager


def init_log_manager(config: LoggingConfig) -> LogManager:
    """按配置替换当前日志管理器并立即生效"""
    global _log_manager
    if _log_manager is not None:
        _log_manager.close()
    _log_manager = LogManager(config)
    _log_manager.configure_logging()
    return _log_manager


def get_logger(name: str) -> logging.Logger:
    return get_log_manager().get_logger(name)
