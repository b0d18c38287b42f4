"""
异常定义

DataError 对应数据/输入问题（退出码 2），NumericalError 对应数值问题（退出码 3），
ConfigError 对应参数或清单错误（退出码 1）。
"""
from typing import Optional


class QdlError(Exception):
    """所有模拟器异常的基类"""


class ConfigError(QdlError):
    """运行参数或清单无效"""


class DataError(QdlError):
    """输入数据不满足约定"""


class ZeroVector(DataError):
    """全零向量无法归一化"""


class BadDimension(DataError):
    """维度不是 2 的幂或不满足要求"""


class DimensionMismatch(DataError):
    """两个向量或矩阵维度不一致"""


class NotNormalized(DataError):
    """向量未归一化"""


class BadMesh(DataError):
    """旋转网格参数不合法"""


class EmptyDataset(DataError):
    """样本集为空"""


class SchemaMismatch(DataError):
    """报告与运行清单不匹配"""


class ClassCountMismatch(DataError):
    """类别样本数与约定不符"""


class ParseError(DataError):
    """数据文件解析失败"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"第 {line_no} 行: {message}"
        super().__init__(message)


class NumericalError(QdlError):
    """数值计算无法继续"""


class NonlinearCollapse(NumericalError):
    """非线性变换后 a≈0，输出态无定义"""

    def __init__(self, a: float, layer: Optional[int] = None):
        self.a = a
        self.layer = layer
        where = f"第 {layer} 层" if layer is not None else "非线性层"
        super().__init__(f"{where}塌缩: a = {a:.3e}")


class DegenerateBranch(NumericalError):
    """γ² 或 λ² 过小，E = P/(γ²λ²) 病态"""


class DegenerateEstimate(NumericalError):
    """有限次测量得到 γ̂²λ̂² = 0"""


class AllSamplesCollapsed(NumericalError):
    """所有样本都塌缩，AccEk 无定义"""

    def __init__(self, message: str, partial_trace=None):
        self.partial_trace = partial_trace
        super().__init__(message)
