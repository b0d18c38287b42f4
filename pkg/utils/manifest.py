"""
运行清单：命令行参数与可选 JSON 清单文件（清单中的键覆盖命令行）
"""
import json
import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from config import (
    DEFAULT_EPSILON, DEFAULT_INIT_SEED, DEFAULT_IRIS_PATH, DEFAULT_ITERATIONS,
    DEFAULT_LEARNING_RATE, DEFAULT_OUTPUT_DIR, DEFAULT_SHOT_SEED, DEFAULT_SPLIT_SEED,
    LAYER_BLOCKS,
)
from quantum.errors import ConfigError
from quantum.measurement import ShotPlan
from training.trainer import TrainingConfig

logger = logging.getLogger(__name__)

COMMANDS = ("train", "test", "distance", "resources", "preprocess", "reproduce")


@dataclass(frozen=True)
class RunManifest:
    command: str
    iris_path: Path = DEFAULT_IRIS_PATH
    layers: int = 3
    split_seed: int = DEFAULT_SPLIT_SEED
    init_seed: int = DEFAULT_INIT_SEED
    shot_seed: int = DEFAULT_SHOT_SEED
    iterations: int = DEFAULT_ITERATIONS
    epsilon: float = DEFAULT_EPSILON
    learning_rate: float = DEFAULT_LEARNING_RATE
    shots: Optional[int] = None  # None 为精确模式
    estimated_basis: bool = False
    output_dir: Path = DEFAULT_OUTPUT_DIR

    def __post_init__(self):
        object.__setattr__(self, "iris_path", Path(self.iris_path))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if self.command not in COMMANDS:
            raise ConfigError(f"未知命令: {self.command}")
        if self.layers not in LAYER_BLOCKS:
            raise ConfigError(f"层数只能是 {sorted(LAYER_BLOCKS)}，得到 {self.layers}")
        if self.shots is not None and self.shots < 1:
            raise ConfigError(f"--shots 必须 ≥ 1，得到 {self.shots}")

    @property
    def shot_plan(self) -> Optional[ShotPlan]:
        if self.shots is None:
            return None
        return ShotPlan.equal(self.shots, self.shot_seed, self.estimated_basis)

    def training_config(self, init_seed: Optional[int] = None) -> TrainingConfig:
        return TrainingConfig(
            epsilon=self.epsilon,
            learning_rate=self.learning_rate,
            iterations=self.iterations,
            seed=self.init_seed if init_seed is None else init_seed,
            mode=self.shot_plan,
        )

    def run_id(self, init_seed: Optional[int] = None) -> str:
        seed = self.init_seed if init_seed is None else init_seed
        mode = "exact" if self.shots is None else f"shots{self.shots}"
        return f"{self.layers}layer-split{self.split_seed}-init{seed}-{mode}"


def load_manifest_overrides(path: Path) -> Dict[str, Any]:
    """读取 JSON 清单，只接受 RunManifest 的字段名"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"无法读取清单 {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"清单必须是 JSON 对象: {path}")
    known = {f.name for f in fields(RunManifest)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"清单包含未知字段: {sorted(unknown)}")
    return data


def build_manifest(command: str, values: Dict[str, Any],
                   manifest_path: Optional[Path] = None) -> RunManifest:
    """命令行取值为基础，清单文件覆盖"""
    base = RunManifest(command=command, **{k: v for k, v in values.items() if v is not None})
    if manifest_path is None:
        return base
    overrides = load_manifest_overrides(manifest_path)
    overrides.pop("command", None)
    logger.info("使用清单覆盖参数: %s", manifest_path)
    try:
        return replace(base, **overrides)
    except TypeError as e:
        raise ConfigError(f"清单字段类型错误: {e}") from None
