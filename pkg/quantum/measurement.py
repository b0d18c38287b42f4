"""
辅助比特测量与 MSE 提取

第一次测量（计算基）给出 γ²、λ²；第二次在 |φ⟩ = λ|0⟩ − γ|1⟩、|φ⊥⟩ = γ|0⟩ + λ|1⟩
基下测量，|φ⟩ 的概率 P = γ²λ²(k−v)ᵀ(k−v)，于是 E = P/(γ²λ²)。
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from config import DEGENERATE_TOL
from quantum.errors import ConfigError, DegenerateBranch, DegenerateEstimate
from quantum.state import AmplitudeVector, BranchState, check_normalized, check_same_dim

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MseEstimate:
    gamma_sq: float
    lambda_sq: float
    p_phi: float
    mse: float
    exact: bool = True


@dataclass(frozen=True)
class ShotPlan:
    """有限次重复测量的计划；两次测量各自独立计数"""

    shots_weights: int
    shots_projection: int
    rng_seed: int
    estimated_basis: bool = False

    def __post_init__(self):
        if self.shots_weights < 1 or self.shots_projection < 1:
            raise ConfigError(
                f"测量次数必须 ≥ 1: ({self.shots_weights}, {self.shots_projection})")

    @classmethod
    def equal(cls, shots: int, rng_seed: int, estimated_basis: bool = False) -> "ShotPlan":
        """两次测量使用相同次数"""
        return cls(shots, shots, rng_seed, estimated_basis)

    def spawn(self, *keys: int) -> "ShotPlan":
        """由 (rng_seed, keys) 派生子种子，与执行顺序无关"""
        seq = np.random.SeedSequence([self.rng_seed, *keys])
        return replace(self, rng_seed=int(seq.generate_state(1, dtype=np.uint64)[0]))


def prepare_label(state: BranchState, label: AmplitudeVector) -> BranchState:
    """在 |1…1⟩ 分支上制备标签态 |v⟩"""
    check_same_dim(state.label_vec, label)
    check_normalized(label)
    return replace(state, label_vec=label)


def phi_probability(state: BranchState, basis_gamma: float, basis_lam: float) -> float:
    """投影到 basis_lam|0⟩ − basis_gamma|1⟩ 的概率 ‖λ̂γ|k⟩ − γ̂λ|v⟩‖²"""
    proj = (basis_lam * state.gamma) * state.out_vec.amps \
        - (basis_gamma * state.lam) * state.label_vec.amps
    return min(1.0, max(0.0, float(np.dot(proj, proj))))


def _check_branches(gamma_sq: float, lambda_sq: float):
    if gamma_sq < DEGENERATE_TOL or lambda_sq < DEGENERATE_TOL:
        raise DegenerateBranch(f"分支权重退化: γ² = {gamma_sq:.3e}, λ² = {lambda_sq:.3e}")


def measure_exact(state: BranchState) -> MseEstimate:
    """直接使用结果概率"""
    gamma_sq = state.gamma ** 2
    lambda_sq = state.lam ** 2
    _check_branches(gamma_sq, lambda_sq)
    p_phi = phi_probability(state, state.gamma, state.lam)
    return MseEstimate(gamma_sq=gamma_sq, lambda_sq=lambda_sq, p_phi=p_phi,
                       mse=p_phi / (gamma_sq * lambda_sq), exact=True)


def measure_shots(state: BranchState, plan: ShotPlan) -> MseEstimate:
    """两次测量分别做 Bernoulli 抽样，给定种子时结果确定"""
    gamma_sq = state.gamma ** 2
    lambda_sq = state.lam ** 2
    _check_branches(gamma_sq, lambda_sq)
    rng = np.random.default_rng(plan.rng_seed)

    zeros = int(rng.binomial(plan.shots_weights, min(1.0, gamma_sq)))
    gamma_sq_hat = zeros / plan.shots_weights
    lambda_sq_hat = (plan.shots_weights - zeros) / plan.shots_weights
    if gamma_sq_hat * lambda_sq_hat == 0.0:
        raise DegenerateEstimate(
            f"{plan.shots_weights} 次测量中 |0⟩ 出现 {zeros} 次，无法求 E")

    if plan.estimated_basis:
        p_true = phi_probability(state, math.sqrt(gamma_sq_hat), math.sqrt(lambda_sq_hat))
    else:
        p_true = phi_probability(state, state.gamma, state.lam)
    hits = int(rng.binomial(plan.shots_projection, p_true))
    p_phi_hat = hits / plan.shots_projection

    return MseEstimate(gamma_sq=gamma_sq_hat, lambda_sq=lambda_sq_hat, p_phi=p_phi_hat,
                       mse=p_phi_hat / (gamma_sq_hat * lambda_sq_hat), exact=False)


def measure(state: BranchState, mode: Optional[ShotPlan] = None) -> MseEstimate:
    """mode 为 None 时精确模式，否则按 ShotPlan 抽样"""
    if mode is None:
        return measure_exact(state)
    return measure_shots(state, mode)
