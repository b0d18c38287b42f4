"""
二维线性可分性的暴力搜索
"""
from typing import Sequence, Tuple

import numpy as np

Point = Tuple[float, float]


def linearly_separable(points_a: Sequence[Point], points_b: Sequence[Point],
                       n_lines: int = 10_000) -> bool:
    """在 [0, π) 上均匀取 n_lines 个法向；某方向上两类投影区间不重叠即可分

    对固定法向，扫过所有截距等价于比较两类投影的极值。
    """
    a = np.asarray(points_a, dtype=float).reshape(-1, 2)
    b = np.asarray(points_b, dtype=float).reshape(-1, 2)
    if a.size == 0 or b.size == 0:
        return True
    angles = np.linspace(0.0, np.pi, n_lines, endpoint=False)
    normals = np.stack([np.cos(angles), np.sin(angles)], axis=1)  # (L, 2)
    proj_a = a @ normals.T  # (na, L)
    proj_b = b @ normals.T
    gap_ab = proj_b.min(axis=0) - proj_a.max(axis=0)
    gap_ba = proj_a.min(axis=0) - proj_b.max(axis=0)
    return bool(np.any(gap_ab > 0) or np.any(gap_ba > 0))
