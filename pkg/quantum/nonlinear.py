"""
非线性层

βᵢ = αᵢ·S (i < N−1)，β_{N−1} = α_{N−1}(S − 2α_{N−1})，S = Σⱼ αⱼ。
之后 |0⟩ 分支按 a = Σβᵢ² 重新归一化，分支权重更新为 γ = √(Πa)/√(Πa + 1)。
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config import COLLAPSE_TOL
from quantum.errors import NonlinearCollapse
from quantum.state import AmplitudeVector, BranchState

logger = logging.getLogger(__name__)


def nonlinear_kernel(alpha: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """沿最后一维计算 (β, a)，可批量处理 (..., N) 数组"""
    alpha = np.asarray(alpha, dtype=float)
    total = alpha.sum(axis=-1, keepdims=True)
    beta = alpha * total
    last = alpha[..., -1]
    beta[..., -1] = last * (total[..., 0] - 2.0 * last)
    a = np.einsum("...i,...i->...", beta, beta)
    return beta, a


@dataclass(frozen=True, eq=False)
class NonlinearResult:
    beta: np.ndarray
    a: float


def nonlinear_map(alpha: AmplitudeVector) -> NonlinearResult:
    beta, a = nonlinear_kernel(alpha.amps)
    beta.setflags(write=False)
    return NonlinearResult(beta=beta, a=float(a))


def apply_nonlinear(state: BranchState, layer: Optional[int] = None,
                    trace: Optional[List[float]] = None) -> BranchState:
    """非线性变换并重新归一化；trace 不为空时追加本层 a"""
    result = nonlinear_map(state.out_vec)
    if result.a < COLLAPSE_TOL:
        raise NonlinearCollapse(result.a, layer)
    if trace is not None:
        trace.append(result.a)
    root_a = math.sqrt(result.a)
    logger.debug("非线性层 %s: a = %.6g", layer, result.a)
    return BranchState.from_weight(
        state.raw_weight * root_a,
        out_vec=AmplitudeVector(result.beta / root_a),
        label_vec=state.label_vec,
    )
