"""
自适应 Simpson 积分

被积函数都是指数乘积或用户给出的光滑函数，按区间二分细化，
局部误差用 Richardson 外推修正。
"""

import math
from typing import Callable, List, Tuple

from .exceptions import QuadratureError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_DEPTH = 40
# 至少细分几层后才允许收敛，避免在对称节点上偶然误判
DEFAULT_MIN_DEPTH = 4

_Segment = Tuple[float, float, float, float, float, float, float, int]


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    min_depth: int = DEFAULT_MIN_DEPTH,
) -> float:
    """计算 ∫_a^b f(s) ds

    Args:
        f: 被积函数
        a: 积分下限
        b: 积分上限，允许 b < a（结果取负）
        tol: 绝对误差容差
        max_depth: 最大二分深度
        min_depth: 最小二分深度

    Returns:
        积分值

    Raises:
        QuadratureError: 达到最大深度仍未满足容差，或被积函数返回非有限值
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth, min_depth)

    fa, fb = float(f(a)), float(f(b))
    m = 0.5 * (a + b)
    fm = float(f(m))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    parts: List[float] = []
    stack: List[_Segment] = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, f_lo, f_mid, f_hi, estimate, seg_tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left_mid = 0.5 * (lo + mid)
        right_mid = 0.5 * (mid + hi)
        f_lm = float(f(left_mid))
        f_rm = float(f(right_mid))
        if not (math.isfinite(f_lm) and math.isfinite(f_rm)):
            raise QuadratureError(f"被积函数在 [{lo}, {hi}] 内返回非有限值")

        left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid)
        right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi)
        delta = left + right - estimate

        if depth >= min_depth and abs(delta) <= 15.0 * seg_tol:
            parts.append(left + right + delta / 15.0)
        elif depth >= max_depth:
            raise QuadratureError(f"自适应 Simpson 在深度 {max_depth} 内未收敛，区间 [{lo}, {hi}]，误差估计 {abs(delta)}")
        else:
            stack.append((mid, hi, f_mid, f_rm, f_hi, right, 0.5 * seg_tol, depth + 1))
            stack.append((lo, mid, f_lo, f_lm, f_mid, left, 0.5 * seg_tol, depth + 1))

    return math.fsum(parts)
