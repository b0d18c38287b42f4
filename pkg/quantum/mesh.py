"""
UU（权重）矩阵：三角形 Reck 网格上的实 Givens 旋转

N 维实正交矩阵由 N(N−1)/2 个独立角度 ζ 决定，N=4 时为 6 个。
规范顺序：j 从 1 到 N−1，i 从 j−1 递减到 0；矩阵为按此顺序从左到右的乘积。
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from quantum.errors import BadMesh, DimensionMismatch
from quantum.state import AmplitudeVector, BranchState, is_power_of_two

TWO_PI = 2.0 * math.pi


class Rotation(NamedTuple):
    plane_i: int
    plane_j: int
    theta: float


def rotation_count(dim: int) -> int:
    return dim * (dim - 1) // 2


def canonical_planes(dim: int) -> List[Tuple[int, int]]:
    """三角形网格的旋转平面顺序"""
    return [(i, j) for j in range(1, dim) for i in range(j - 1, -1, -1)]


@dataclass(frozen=True)
class RotationMesh:
    """一个 UU 矩阵的全部旋转参数（弧度）"""

    dim: int
    rotations: Tuple[Rotation, ...]

    def __post_init__(self):
        object.__setattr__(self, "rotations",
                           tuple(Rotation(int(i), int(j), float(t)) for i, j, t in self.rotations))
        self.validate()

    def validate(self):
        if not is_power_of_two(self.dim):
            raise BadMesh(f"网格维度必须是 2 的幂 (≥2)，得到 {self.dim}")
        expected = rotation_count(self.dim)
        if len(self.rotations) != expected:
            raise BadMesh(f"{self.dim} 维网格需要 {expected} 个旋转，得到 {len(self.rotations)}")
        planes = canonical_planes(self.dim)
        for k, (rot, plane) in enumerate(zip(self.rotations, planes)):
            if not 0 <= rot.plane_i < rot.plane_j < self.dim:
                raise BadMesh(f"第 {k} 个旋转平面非法: ({rot.plane_i}, {rot.plane_j})")
            if (rot.plane_i, rot.plane_j) != plane:
                raise BadMesh(f"第 {k} 个旋转平面 ({rot.plane_i}, {rot.plane_j}) 不符合规范顺序 {plane}")

    @property
    def thetas(self) -> np.ndarray:
        return np.array([rot.theta for rot in self.rotations], dtype=float)

    @classmethod
    def from_thetas(cls, dim: int, thetas: Sequence[float]) -> "RotationMesh":
        planes = canonical_planes(dim)
        thetas = list(np.asarray(thetas, dtype=float).ravel())
        if len(thetas) != len(planes):
            raise BadMesh(f"{dim} 维网格需要 {len(planes)} 个角度，得到 {len(thetas)}")
        return cls(dim, tuple(Rotation(i, j, t) for (i, j), t in zip(planes, thetas)))

    @classmethod
    def identity(cls, dim: int) -> "RotationMesh":
        return cls.from_thetas(dim, np.zeros(rotation_count(dim)))


def givens_matrix(dim: int, plane_i: int, plane_j: int, theta: float) -> np.ndarray:
    """(i, j) 平面内逆时针旋转 θ"""
    g = np.eye(dim)
    c, s = math.cos(theta), math.sin(theta)
    g[plane_i, plane_i] = c
    g[plane_i, plane_j] = -s
    g[plane_j, plane_i] = s
    g[plane_j, plane_j] = c
    return g


@lru_cache(maxsize=4096)
def build_matrix(mesh: RotationMesh) -> np.ndarray:
    """按规范顺序连乘 Givens 旋转，返回只读的 N×N 正交矩阵"""
    m = np.eye(mesh.dim)
    for i, j, theta in mesh.rotations:
        c, s = math.cos(theta), math.sin(theta)
        col_i = m[:, i].copy()
        col_j = m[:, j].copy()
        # 右乘 G(i, j, θ) 只改变第 i、j 列
        m[:, i] = c * col_i + s * col_j
        m[:, j] = -s * col_i + c * col_j
    m.setflags(write=False)
    return m


def apply_weight(state: BranchState, mesh: RotationMesh) -> BranchState:
    """|u⟩ = W|x⟩，只作用于 |0⟩ 分支"""
    if mesh.dim != state.dim:
        raise DimensionMismatch(f"网格维度 {mesh.dim} 与态维度 {state.dim} 不一致")
    out = build_matrix(mesh) @ state.out_vec.amps
    return BranchState(gamma=state.gamma, lam=state.lam, out_vec=AmplitudeVector(out),
                       label_vec=state.label_vec, raw_weight=state.raw_weight)


def random_mesh(dim: int, rng: np.random.Generator) -> RotationMesh:
    """每个角度在 [0, 2π) 上均匀取值"""
    thetas = rng.uniform(0.0, TWO_PI, size=rotation_count(dim))
    thetas = np.minimum(thetas, np.nextafter(TWO_PI, 0.0))
    return RotationMesh.from_thetas(dim, thetas)
