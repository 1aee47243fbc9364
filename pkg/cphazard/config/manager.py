"""
配置管理器

加载顺序：内置预设 → 扁平 key=value 配置文件 → 命令行覆盖（后者优先）。
键名使用点分路径，例如 ``params.beta``、``run.dt``；顶层键为
``experiment``、``preset``、``output_dir``、``input_path``。
"""

import configparser
import hashlib
from dataclasses import fields, is_dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union, get_args, get_origin

from ..core.exceptions import ConfigError, IoError
from .configs import RunConfig
from .logging_config import get_logger, init_log_manager
from .presets import DEFAULT_PRESET, PRESETS
from .validator import ConfigValidator

logger = get_logger(__name__)

# 不影响数值结果的字段
HASH_EXCLUDED = ("output_dir", "verify.results_file", "run.workers", "logging.")

_SECTION_HEADER = "cphazard"
_BOOLEAN_STATES = configparser.ConfigParser.BOOLEAN_STATES


def _convert(key: str, field_type: Any, raw: Any) -> Any:
    """把字符串（或已是目标类型的值）转换为字段类型"""
    if get_origin(field_type) is Union:
        inner = [arg for arg in get_args(field_type) if arg is not type(None)]
        if raw is None or (isinstance(raw, str) and raw.strip().lower() in ("", "none")):
            return None
        return _convert(key, inner[0], raw)
    if get_origin(field_type) in (list, List):
        (item_type,) = get_args(field_type)
        items = raw if isinstance(raw, (list, tuple)) else [s for s in str(raw).split(",") if s.strip()]
        return [_convert(key, item_type, item) for item in items]
    try:
        if field_type is bool:
            if isinstance(raw, bool):
                return raw
            state = str(raw).strip().lower()
            if state not in _BOOLEAN_STATES:
                raise ValueError(f"无法解析为布尔值: {raw!r}")
            return _BOOLEAN_STATES[state]
        if field_type is int:
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError(f"需要整数: {raw!r}")
            return int(str(raw).strip()) if isinstance(raw, str) else int(raw)
        if field_type is float:
            return float(str(raw).strip()) if isinstance(raw, str) else float(raw)
        return str(raw).strip() if isinstance(raw, str) else str(raw)
    except ValueError as e:
        raise ConfigError(key, f"取值无效 {raw!r}: {e}") from e


def _resolve(config: RunConfig, key: str) -> Tuple[Any, str, Any]:
    """点分路径 → (所属对象, 字段名, 字段类型)"""
    target: Any = config
    parts = key.split(".")
    for part in parts[:-1]:
        section = getattr(target, part, None)
        if section is None or not is_dataclass(section):
            raise ConfigError(key, "未知配置项")
        target = section
    name = parts[-1]
    for item in fields(target):
        if item.name == name and not is_dataclass(getattr(target, name)):
            return target, name, item.type
    raise ConfigError(key, "未知配置项")


def set_value(config: RunConfig, key: str, raw: Any) -> None:
    """按点分路径写入一个配置值"""
    target, name, field_type = _resolve(config, key.strip())
    setattr(target, name, _convert(key, field_type, raw))


def flatten(config: RunConfig) -> Dict[str, Any]:
    """展开为 {点分路径: 值}"""
    flat: Dict[str, Any] = {}

    def walk(obj: Any, prefix: str) -> None:
        for item in fields(obj):
            value = getattr(obj, item.name)
            if is_dataclass(value):
                walk(value, f"{prefix}{item.name}.")
            else:
                flat[f"{prefix}{item.name}"] = value

    walk(config, "")
    return flat


def _render(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ",".join(_render(v) for v in value)
    return str(value)


def config_hash(config: RunConfig) -> str:
    """影响数值结果的配置项的 SHA-256"""
    lines = [
        f"{key}={_render(value)}"
        for key, value in sorted(flatten(config).items())
        if not any(key == skip or (skip.endswith(".") and key.startswith(skip)) for skip in HASH_EXCLUDED)
    ]
    return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """读取扁平 key=value 文件，允许 # 与 ; 注释"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(str(path), f"无法读取配置文件: {e}") from e
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        parser.read_string(f"[{_SECTION_HEADER}]\n{text}", source=str(path))
    except configparser.Error as e:
        raise ConfigError("config", f"配置文件格式错误: {e}") from e
    return dict(parser.items(_SECTION_HEADER))


class ConfigManager:
    """配置管理器"""

    def __init__(self) -> None:
        self.config = RunConfig()
        self.validator = ConfigValidator()

    def load(
        self,
        preset: Optional[str] = None,
        config_path: Optional[str] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> RunConfig:
        """按 预设 → 文件 → 覆盖 的顺序构建并校验配置

        Raises:
            ConfigError: 未知预设、未知键或取值无效，field 为点分路径
            IoError: 配置文件无法读取
        """
        file_values = read_config_file(config_path) if config_path else {}
        name = preset or file_values.pop("preset", None) or DEFAULT_PRESET
        file_values.pop("preset", None)
        if name not in PRESETS:
            raise ConfigError("preset", f"未知预设 {name!r}，可选: {', '.join(sorted(PRESETS))}")

        config = RunConfig(preset=name)
        for key, value in PRESETS[name].items():
            set_value(config, key, value)
        for key, value in file_values.items():
            set_value(config, key, value)
        for key, value in (overrides or {}).items():
            if value is not None:
                set_value(config, key, value)

        self.validator.validate(config)
        self.config = config
        self._init_logging()
        logger.debug(f"配置已加载: preset={name}, hash={config_hash(config)[:12]}")
        return config

    def _init_logging(self) -> None:
        """初始化日志系统"""
        init_log_manager(self.config.logging)
