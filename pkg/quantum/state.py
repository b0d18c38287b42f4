"""
实振幅向量与 GHZ 双分支态

GHZ 系统 γ|0⟩|k⟩ + λ|1⟩|v⟩ 以分支对 (γ, |k⟩, λ, |v⟩) 表示，不展开成 2N 维态矢。
"""
import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from config import NORM_TOL
from quantum.errors import BadDimension, DimensionMismatch, NotNormalized, ZeroVector


def is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    """N = 2^n 维实振幅向量"""

    amps: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.amps)
        if arr.ndim != 1 or not is_power_of_two(arr.shape[0]):
            raise BadDimension(f"振幅向量维度必须是 2 的幂 (≥2)，得到 {arr.shape}")
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def norm_squared(self) -> float:
        return float(np.dot(self.amps, self.amps))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def tolist(self) -> list:
        return self.amps.tolist()

    @classmethod
    def basis(cls, dim: int, index: int) -> "AmplitudeVector":
        """计算基矢 |index⟩"""
        amps = np.zeros(dim)
        amps[index] = 1.0
        return cls(amps)

    def __repr__(self):
        return f"AmplitudeVector({self.tolist()})"


def amplitude_encode(raw: Union[Sequence[float], np.ndarray]) -> AmplitudeVector:
    """振幅编码 |x⟩ = (1/A) Σ xᵢ|i⟩，A = √(Σ xᵢ²)"""
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 1 or not is_power_of_two(arr.shape[0]):
        raise BadDimension(f"数据长度必须是 2 的幂 (≥2)，得到 {arr.shape}")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ZeroVector("全零数据无法振幅编码")
    return AmplitudeVector(arr / norm)


def check_same_dim(u: AmplitudeVector, v: AmplitudeVector):
    if u.dim != v.dim:
        raise DimensionMismatch(f"维度不一致: {u.dim} != {v.dim}")


def check_normalized(*vectors: AmplitudeVector):
    for vec in vectors:
        if not vec.is_normalized():
            raise NotNormalized(f"向量未归一化: ‖v‖² = {vec.norm_squared():.15g}")


def inner(u: AmplitudeVector, v: AmplitudeVector) -> float:
    """实内积 Σ uᵢvᵢ"""
    check_same_dim(u, v)
    return float(np.dot(u.amps, v.amps))


def distance_squared(u: AmplitudeVector, v: AmplitudeVector) -> float:
    """(u−v)ᵀ(u−v) = 2 − 2⟨u,v⟩，取值 [0, 4]"""
    check_same_dim(u, v)
    check_normalized(u, v)
    return 2.0 - 2.0 * inner(u, v)


def branch_weights(raw_weight: float):
    """由未归一化权重 w = √(Πa) 得到 (γ, λ)"""
    scale = math.sqrt(raw_weight * raw_weight + 1.0)
    return raw_weight / scale, 1.0 / scale


@dataclass(frozen=True, eq=False)
class BranchState:
    """GHZ 双分支态 γ|0⟩|k⟩ + λ|1⟩|v⟩"""

    gamma: float
    lam: float
    out_vec: AmplitudeVector
    label_vec: AmplitudeVector
    raw_weight: float = 1.0

    @classmethod
    def from_weight(cls, raw_weight: float, out_vec: AmplitudeVector,
                    label_vec: AmplitudeVector) -> "BranchState":
        gamma, lam = branch_weights(raw_weight)
        return cls(gamma=gamma, lam=lam, out_vec=out_vec,
                   label_vec=label_vec, raw_weight=raw_weight)

    @property
    def dim(self) -> int:
        return self.out_vec.dim

    def check(self, tol: float = NORM_TOL):
        """校验分支态不变量，失败时抛出 NotNormalized / DimensionMismatch"""
        check_same_dim(self.out_vec, self.label_vec)
        check_normalized(self.out_vec, self.label_vec)
        if abs(self.gamma ** 2 + self.lam ** 2 - 1.0) > tol:
            raise NotNormalized(f"γ² + λ² = {self.gamma ** 2 + self.lam ** 2:.15g}")
        gamma, _ = branch_weights(self.raw_weight)
        if abs(gamma - self.gamma) > tol:
            raise NotNormalized(f"γ = {self.gamma:.15g} 与 raw_weight 不一致")


def ghz_init(n: int) -> BranchState:
    """n+1 比特 GHZ 态: (|0…0⟩|0⟩ + |1…1⟩|1⟩)/√2"""
    if n < 1:
        raise BadDimension(f"数据寄存器比特数必须 ≥ 1，得到 {n}")
    dim = 2 ** n
    return BranchState.from_weight(
        1.0,
        out_vec=AmplitudeVector.basis(dim, 0),
        label_vec=AmplitudeVector.basis(dim, dim - 1),
    )


def set_input(state: BranchState, x: AmplitudeVector) -> BranchState:
    """在 |0⟩ 分支上由 |0…0⟩ 制备输入态 |x⟩"""
    check_same_dim(state.out_vec, x)
    check_normalized(x)
    return replace(state, out_vec=x)
