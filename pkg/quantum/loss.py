"""
累计 MSE (AccEk)：训练集 t 个样本的 E 的平均值

精确模式走批量前向；测量模式逐样本抽样，子种子由 (rng_seed, 样本下标) 派生。
塌缩（或分支退化）的样本跳过并单独计数，不做插补。
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import DEGENERATE_TOL
from quantum.errors import AllSamplesCollapsed, EmptyDataset, NumericalError
from quantum.measurement import ShotPlan, measure
from quantum.network import NetworkConfig, forward, forward_batch
from quantum.state import AmplitudeVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """(输入态, 标签态) 的矩阵形式，训练中复用"""

    inputs: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_pairs(cls, samples: Iterable[Sequence[AmplitudeVector]]) -> "SampleSet":
        pairs = list(samples)
        if not pairs:
            raise EmptyDataset("样本集为空")
        inputs = np.stack([pair[0].amps for pair in pairs])
        labels = np.stack([pair[1].amps for pair in pairs])
        inputs.setflags(write=False)
        labels.setflags(write=False)
        return cls(inputs=inputs, labels=labels)

    def __len__(self):
        return self.inputs.shape[0]

    def pair(self, index: int) -> Tuple[AmplitudeVector, AmplitudeVector]:
        return AmplitudeVector(self.inputs[index]), AmplitudeVector(self.labels[index])


SampleInput = Union[SampleSet, Sequence[Sequence[AmplitudeVector]]]


def as_sample_set(samples: SampleInput) -> SampleSet:
    if isinstance(samples, SampleSet):
        return samples
    return SampleSet.from_pairs(samples)


@dataclass(frozen=True)
class LossSummary:
    value: float
    used: int
    collapsed: int
    collapsed_indices: Tuple[int, ...] = field(default=())


def _exact_summary(config: NetworkConfig, samples: SampleSet) -> LossSummary:
    batch = forward_batch(config, samples.inputs, samples.labels)
    gamma_sq = batch.gamma_sq
    lambda_sq = batch.lambda_sq
    diff = batch.out - batch.labels
    p_phi = np.clip(gamma_sq * lambda_sq * np.einsum("ij,ij->i", diff, diff), 0.0, 1.0)
    degenerate = (gamma_sq < DEGENERATE_TOL) | (lambda_sq < DEGENERATE_TOL)
    skipped = batch.collapsed | degenerate
    used = ~skipped
    if not used.any():
        raise AllSamplesCollapsed(f"{len(samples)} 个样本全部塌缩")
    logger.debug("参与统计样本的最小非线性因子 a = %.3g", float(batch.factors[used].min()))
    mse = p_phi[used] / (gamma_sq[used] * lambda_sq[used])
    return LossSummary(value=float(np.sum(mse)) / int(used.sum()),
                       used=int(used.sum()),
                       collapsed=int(skipped.sum()),
                       collapsed_indices=tuple(int(i) for i in np.flatnonzero(skipped)))


def _shot_summary(config: NetworkConfig, samples: SampleSet, plan: ShotPlan) -> LossSummary:
    values: List[float] = []
    skipped: List[int] = []
    for index in range(len(samples)):
        x, label = samples.pair(index)
        try:
            estimate = measure(forward(config, x, label), plan.spawn(index))
        except NumericalError as e:
            logger.debug("样本 %d 跳过: %s", index, e)
            skipped.append(index)
            continue
        values.append(estimate.mse)
    if not values:
        raise AllSamplesCollapsed(f"{len(samples)} 个样本全部塌缩或估计退化")
    return LossSummary(value=float(np.sum(values)) / len(values), used=len(values),
                       collapsed=len(skipped), collapsed_indices=tuple(skipped))


def accumulated_mse_summary(config: NetworkConfig, samples: SampleInput,
                            mode: Optional[ShotPlan] = None) -> LossSummary:
    """AccEk 及跳过样本统计"""
    samples = as_sample_set(samples)
    if len(samples) == 0:
        raise EmptyDataset("样本集为空")
    if mode is None:
        return _exact_summary(config, samples)
    return _shot_summary(config, samples, mode)


def accumulated_mse(config: NetworkConfig, samples: SampleInput,
                    mode: Optional[ShotPlan] = None) -> float:
    """AccEk = (1/t) Σ Eᵢ"""
    return accumulated_mse_summary(config, samples, mode).value
