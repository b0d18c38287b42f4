"""
资源估算：求 N 维向量间 MSE 所需的量子资源随 log₂N 增长
"""
from dataclasses import asdict, dataclass

from quantum.errors import BadDimension
from quantum.state import is_power_of_two


@dataclass(frozen=True)
class ResourceCount:
    qubits: int
    paths: int
    combiners: int
    detectors: int

    def to_dict(self) -> dict:
        return asdict(self)


def resource_estimate(dim: int) -> ResourceCount:
    """1 + log₂N 个比特，2 + 2log₂N 条路径，log₂N 个合束器，2 + log₂N 个探测器"""
    if not is_power_of_two(dim):
        raise BadDimension(f"N 必须是 2 的幂且 ≥ 2，得到 {dim}")
    n = dim.bit_length() - 1
    return ResourceCount(qubits=1 + n, paths=2 + 2 * n, combiners=n, detectors=2 + n)


def classical_operations(dim: int) -> int:
    """经典直接计算 (u−v)ᵀ(u−v) 需要的乘加次数"""
    if not is_power_of_two(dim):
        raise BadDimension(f"N 必须是 2 的幂且 ≥ 2，得到 {dim}")
    return dim


def resource_comparison(dim: int) -> dict:
    """量子资源与经典运算量并列"""
    return {"N": dim, "quantum": resource_estimate(dim).to_dict(),
            "classical_ops": classical_operations(dim)}
