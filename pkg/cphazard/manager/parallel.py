"""
分批并行与确定性归约

样本被切成固定大小的批次，第 b 批的随机源只由 (seed, b) 决定，
与工作线程数无关；各批结果按批次下标顺序合并。
"""

import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np

from ..config.logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_BATCH_SIZE = 5000

T = TypeVar("T")

# (已完成批数, 总批数)
BatchProgress = Callable[[int, int], None]


def batch_generators(seed: int, batch_index: int, streams: int) -> List[np.random.Generator]:
    """第 batch_index 批的独立随机流，每个用途一条"""
    parent = np.random.SeedSequence(seed, spawn_key=(batch_index,))
    return [np.random.default_rng(child) for child in parent.spawn(streams)]


def batch_sizes(n: int, batch_size: int) -> List[int]:
    """把 n 个样本切成固定大小的批次，最后一批可以较小"""
    if n < 1:
        raise ValueError(f"样本数必须 ≥ 1: {n}")
    full, rest = divmod(n, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def run_batches(
    task: Callable[[int, int], T],
    n: int,
    batch_size: int = DEFAULT_BATCH_SIZE,
    workers: int = 1,
    progress: Optional[BatchProgress] = None,
) -> List[T]:
    """执行 task(batch_index, size)，按批次顺序返回结果"""
    sizes = batch_sizes(n, batch_size)
    total = len(sizes)
    if workers <= 1 or total == 1:
        results = []
        for index, size in enumerate(sizes):
            results.append(task(index, size))
            if progress:
                progress(index + 1, total)
        return results

    collected: Dict[int, T] = {}
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(task, index, size): index for index, size in enumerate(sizes)}
        for done, future in enumerate(as_completed(futures), start=1):
            collected[futures[future]] = future.result()
            if progress:
                progress(done, total)
    logger.debug(f"完成 {total} 批，线程数 {workers}")
    return [collected[index] for index in range(total)]


@dataclass(frozen=True)
class Moments:
    """样本数、均值与离差平方和"""

    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        values = np.asarray(values, dtype=np.float64)
        if values.size == 0:
            return cls(0, 0.0, 0.0)
        mean = math.fsum(values.tolist()) / values.size
        m2 = math.fsum(((values - mean) ** 2).tolist())
        return cls(int(values.size), mean, m2)

    def merge(self, other: "Moments") -> "Moments":
        """并行方差合并公式"""
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = math.fsum([self.m2, other.m2, delta * delta * self.count * other.count / count])
        return Moments(count, mean, m2)

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count > 0 else 0.0


def merge_all(parts: Sequence[Moments]) -> Moments:
    """按给定顺序合并"""
    total = Moments(0, 0.0, 0.0)
    for part in parts:
        total = total.merge(part)
    return total
