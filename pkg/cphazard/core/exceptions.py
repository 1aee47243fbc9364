"""
cphazard 全局异常层级体系

CLI 最外层统一捕获 CphazardError，按类型映射为退出码，
而非输出原始堆栈跟踪。
"""

from dataclasses import dataclass
from typing import Optional, Sequence


class CphazardError(Exception):
    """cphazard 基础异常，所有应用层异常的根基类。"""

    def __init__(self, message: str = "") -> None:
        self.message = message
        super().__init__(message)

    def __str__(self) -> str:
        return self.message


class DomainError(CphazardError):
    """参数或输入越界（概率不在 [0,1]、速率非正、步长非正等）。"""

    def __init__(self, field: str, message: str = "") -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


class GridError(CphazardError):
    """时间网格不满足要求（例如违约时刻 τ 不是网格节点）。"""


class QuadratureError(CphazardError):
    """自适应积分在最大细分深度内未达到容差。"""


class DataError(CphazardError):
    """输入数据无效（空序列、NaN、无法解析的数值）。"""


class ConfigError(CphazardError):
    """配置错误，携带出错字段的点分路径。"""

    def __init__(self, field: str, message: str = "") -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


class IoError(CphazardError):
    """结果文件或目录不可写。"""

    def __init__(self, path: str, message: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if message else path)


class AcceptanceError(CphazardError):
    """验收检查未通过，结果文件已写出。"""

    def __init__(self, labels: Sequence[str]) -> None:
        self.labels = list(labels)
        super().__init__(f"{len(self.labels)} 项未通过: {', '.join(self.labels)}")


@dataclass(frozen=True)
class SkipNote:
    """被跳过路径的说明记录（不是异常）。

    Attributes:
        reason: 跳过原因
        count: 被跳过的路径数
        detail: 附加信息，例如评估时刻超出模拟区间
    """

    reason: str
    count: int
    detail: Optional[str] = None
