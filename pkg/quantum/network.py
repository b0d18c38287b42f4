"""
量子多层前馈神经网络 (QMFNN)

3 层: Input → UU → NL → UU → NL
4 层: Input → UU → NL → UU → NL → UU → NL
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import COLLAPSE_TOL, LAYER_BLOCKS
from quantum.errors import BadMesh, ConfigError, DimensionMismatch
from quantum.measurement import prepare_label
from quantum.mesh import RotationMesh, apply_weight, build_matrix, random_mesh, rotation_count
from quantum.nonlinear import apply_nonlinear, nonlinear_kernel
from quantum.state import AmplitudeVector, BranchState, ghz_init, set_input

logger = logging.getLogger(__name__)


def blocks_for_layers(layers: int) -> int:
    """神经元层数 -> UU→NL 块数"""
    try:
        return LAYER_BLOCKS[layers]
    except KeyError:
        raise ConfigError(f"不支持的层数: {layers}，可选 {sorted(LAYER_BLOCKS)}") from None


@dataclass(frozen=True)
class NetworkConfig:
    dim: int
    meshes: Tuple[RotationMesh, ...]

    def __post_init__(self):
        object.__setattr__(self, "meshes", tuple(self.meshes))
        if not self.meshes:
            raise BadMesh("网络至少需要一个 UU→NL 块")
        for k, mesh in enumerate(self.meshes):
            if mesh.dim != self.dim:
                raise DimensionMismatch(f"第 {k} 个网格维度 {mesh.dim} != {self.dim}")

    @property
    def n_uu_layers(self) -> int:
        return len(self.meshes)

    @property
    def layers(self) -> int:
        """神经元层数（输入层 + 各 NL 层）"""
        return self.n_uu_layers + 1

    @property
    def n_params(self) -> int:
        return self.n_uu_layers * rotation_count(self.dim)

    @classmethod
    def identity(cls, dim: int, n_uu_layers: int) -> "NetworkConfig":
        return cls(dim, tuple(RotationMesh.identity(dim) for _ in range(n_uu_layers)))

    @classmethod
    def random(cls, dim: int, n_uu_layers: int, rng: np.random.Generator) -> "NetworkConfig":
        return cls(dim, tuple(random_mesh(dim, rng) for _ in range(n_uu_layers)))

    @classmethod
    def from_params(cls, dim: int, n_uu_layers: int, params: Sequence[float]) -> "NetworkConfig":
        """param_view 的逆变换"""
        params = np.asarray(params, dtype=float).ravel()
        per_mesh = rotation_count(dim)
        if params.shape[0] != n_uu_layers * per_mesh:
            raise BadMesh(f"需要 {n_uu_layers * per_mesh} 个参数，得到 {params.shape[0]}")
        return cls(dim, tuple(
            RotationMesh.from_thetas(dim, params[k * per_mesh:(k + 1) * per_mesh])
            for k in range(n_uu_layers)
        ))

    def with_params(self, params: Sequence[float]) -> "NetworkConfig":
        return NetworkConfig.from_params(self.dim, self.n_uu_layers, params)


def param_view(config: NetworkConfig) -> np.ndarray:
    """按层展开的参数向量（弧度）"""
    return np.concatenate([mesh.thetas for mesh in config.meshes])


def forward(config: NetworkConfig, x: AmplitudeVector, label: AmplitudeVector,
            trace: Optional[List[float]] = None) -> BranchState:
    """ghz_init → set_input → prepare_label → (UU → NL) × n_uu_layers"""
    if x.dim != config.dim:
        raise DimensionMismatch(f"输入维度 {x.dim} != 网络维度 {config.dim}")
    state = ghz_init(x.n_qubits)
    state = set_input(state, x)
    state = prepare_label(state, label)
    for layer, mesh in enumerate(config.meshes):
        state = apply_weight(state, mesh)
        state = apply_nonlinear(state, layer=layer, trace=trace)
    return state


def output_state(config: NetworkConfig, x: AmplitudeVector) -> AmplitudeVector:
    """测试阶段只需要 |k⟩；标签分支与 |k⟩ 无耦合，用 |1…1⟩ 占位"""
    placeholder = AmplitudeVector.basis(config.dim, config.dim - 1)
    return forward(config, x, placeholder).out_vec


@dataclass(frozen=True, eq=False)
class BatchForward:
    """批量前向结果；collapsed 为真的行不参与后续统计"""

    out: np.ndarray             # (t, N)，塌缩行保留塌缩前的值
    labels: np.ndarray          # (t, N)
    raw_weight: np.ndarray      # (t,)
    factors: np.ndarray         # (t, n_uu_layers)，各层 a
    collapsed: np.ndarray       # (t,) bool
    collapse_layer: np.ndarray  # (t,) int，未塌缩为 -1

    @property
    def gamma_sq(self) -> np.ndarray:
        w2 = self.raw_weight ** 2
        return w2 / (w2 + 1.0)

    @property
    def lambda_sq(self) -> np.ndarray:
        return 1.0 / (self.raw_weight ** 2 + 1.0)


def forward_batch(config: NetworkConfig, inputs: np.ndarray, labels: np.ndarray) -> BatchForward:
    """与 forward 相同的变换，沿第一维对样本矩阵向量化"""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    labels = np.atleast_2d(np.asarray(labels, dtype=float))
    if inputs.shape != labels.shape or inputs.shape[1] != config.dim:
        raise DimensionMismatch(f"输入 {inputs.shape} / 标签 {labels.shape} 与网络维度 {config.dim} 不符")

    count = inputs.shape[0]
    out = inputs.copy()
    raw_weight = np.ones(count)
    factors = np.zeros((count, config.n_uu_layers))
    alive = np.ones(count, dtype=bool)
    collapse_layer = np.full(count, -1, dtype=int)

    for layer, mesh in enumerate(config.meshes):
        out = out @ build_matrix(mesh).T
        beta, a = nonlinear_kernel(out)
        factors[:, layer] = a
        newly = alive & (a < COLLAPSE_TOL)
        if newly.any():
            collapse_layer[newly] = layer
            alive &= ~newly
            logger.debug("第 %d 层塌缩样本数: %d", layer, int(newly.sum()))
        safe_a = np.where(alive, a, 1.0)
        root_a = np.sqrt(safe_a)
        out = np.where(alive[:, None], beta / root_a[:, None], out)
        raw_weight = raw_weight * root_a

    return BatchForward(out=out, labels=labels, raw_weight=raw_weight, factors=factors,
                        collapsed=~alive, collapse_layer=collapse_layer)

