"""
有限差分训练

Δζ = (AccEk(ζ+ε) − AccEk(ζ))/ε，所有参数在同一基点求梯度后同时更新 ζ ← ζ − kΔζ。
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from config import DEFAULT_EPSILON, DEFAULT_INIT_SEED, DEFAULT_ITERATIONS, DEFAULT_LEARNING_RATE
from quantum.errors import AllSamplesCollapsed, ConfigError
from quantum.loss import SampleInput, accumulated_mse_summary, as_sample_set
from quantum.measurement import ShotPlan
from quantum.network import NetworkConfig, param_view

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainingConfig:
    epsilon: float = DEFAULT_EPSILON
    learning_rate: float = DEFAULT_LEARNING_RATE
    iterations: int = DEFAULT_ITERATIONS
    seed: int = DEFAULT_INIT_SEED  # 初始化种子
    mode: Optional[ShotPlan] = None  # None 为精确模式

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon 必须 > 0，得到 {self.epsilon}")
        if self.learning_rate < 0:
            raise ConfigError(f"学习率不能为负，得到 {self.learning_rate}")
        if self.iterations < 1:
            raise ConfigError(f"迭代次数必须 ≥ 1，得到 {self.iterations}")


@dataclass(frozen=True, eq=False)
class Gradient:
    values: np.ndarray
    collapsed: np.ndarray  # 扰动后全部塌缩的分量，取值置 0
    mismatched: np.ndarray  # 扰动前后跳过的样本不同，差分基于不同样本集


@dataclass
class TrainingTrace:
    acc_mse_per_iteration: List[float] = field(default_factory=list)
    collapsed_sample_counts: List[int] = field(default_factory=list)
    best_iteration: int = -1
    best_params: Optional[np.ndarray] = None
    initial_params: Optional[np.ndarray] = None
    perturbation_collapses: int = 0
    perturbation_mismatches: int = 0

    def record(self, iteration: int, loss: float, collapsed: int, params: np.ndarray):
        self.acc_mse_per_iteration.append(loss)
        self.collapsed_sample_counts.append(collapsed)
        # 并列时保留第一次出现
        if self.best_iteration < 0 or loss < self.acc_mse_per_iteration[self.best_iteration]:
            self.best_iteration = iteration
            self.best_params = params.copy()

    @property
    def best_acc_mse(self) -> float:
        return self.acc_mse_per_iteration[self.best_iteration]


def _mode_for(train_cfg: TrainingConfig, iteration: int, component: int) -> Optional[ShotPlan]:
    if train_cfg.mode is None:
        return None
    return train_cfg.mode.spawn(iteration, component)


def initial_network(dim: int, n_uu_layers: int, train_cfg: TrainingConfig) -> NetworkConfig:
    """由 train_cfg.seed 生成随机初始网格"""
    return NetworkConfig.random(dim, n_uu_layers, np.random.default_rng(train_cfg.seed))


def gradient(config: NetworkConfig, dataset: SampleInput, train_cfg: TrainingConfig,
             base_loss: float, iteration: int = 0,
             base_skipped: Tuple[int, ...] = ()) -> Gradient:
    """前向差分梯度；每个参数一次完整数据集扫描

    base_skipped 为基点处跳过的样本下标，与扰动后不同时标记该分量
    """
    samples = as_sample_set(dataset)
    base = param_view(config)
    values = np.zeros_like(base)
    collapsed = np.zeros(base.shape[0], dtype=bool)
    mismatched = np.zeros(base.shape[0], dtype=bool)
    for m in range(base.shape[0]):
        shifted = base.copy()
        shifted[m] += train_cfg.epsilon
        try:
            summary = accumulated_mse_summary(config.with_params(shifted), samples,
                                              _mode_for(train_cfg, iteration, m + 1))
        except AllSamplesCollapsed:
            collapsed[m] = True
            logger.warning("参数 %d 扰动后所有样本塌缩，梯度分量置 0", m)
            continue
        if summary.collapsed_indices != tuple(base_skipped):
            mismatched[m] = True
            logger.debug("参数 %d 扰动后跳过样本 %s，基点跳过 %s",
                         m, summary.collapsed_indices, tuple(base_skipped))
        values[m] = (summary.value - base_loss) / train_cfg.epsilon
    return Gradient(values=values, collapsed=collapsed, mismatched=mismatched)


def train(config: NetworkConfig, dataset: SampleInput, train_cfg: TrainingConfig,
          progress: bool = False) -> Tuple[NetworkConfig, TrainingTrace]:
    """迭代训练，返回 AccEk 最小时的参数及训练记录"""
    samples = as_sample_set(dataset)
    params = param_view(config)
    trace = TrainingTrace(initial_params=params.copy())

    bar = tqdm(range(train_cfg.iterations), desc="训练", unit="it", disable=not progress)
    for iteration in bar:
        current = config.with_params(params)
        try:
            base = accumulated_mse_summary(current, samples, _mode_for(train_cfg, iteration, 0))
        except AllSamplesCollapsed as e:
            e.partial_trace = trace
            logger.error("第 %d 次迭代所有样本塌缩，训练中止", iteration)
            raise
        trace.record(iteration, base.value, base.collapsed, params)
        if base.collapsed:
            logger.debug("第 %d 次迭代跳过 %d 个塌缩样本", iteration, base.collapsed)
        bar.set_postfix(acc_mse=f"{base.value:.5f}")
        if iteration == train_cfg.iterations - 1:
            break  # 最后一次更新后的参数不再评估

        grad = gradient(current, samples, train_cfg, base.value, iteration, base.collapsed_indices)
        trace.perturbation_collapses += int(grad.collapsed.sum())
        trace.perturbation_mismatches += int(grad.mismatched.sum())
        params = params - train_cfg.learning_rate * grad.values

    logger.info("训练完成: 初始 AccEk %.6f, 最小 AccEk %.6f (第 %d 次迭代)",
                trace.acc_mse_per_iteration[0], trace.best_acc_mse, trace.best_iteration)
    return config.with_params(trace.best_params), trace
