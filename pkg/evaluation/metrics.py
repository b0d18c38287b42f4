"""
测试阶段评估：保真度、阈值识别率、投影数据
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_THRESHOLDS, SPECIES
from quantum.errors import BadDimension, EmptyDataset, NonlinearCollapse
from quantum.network import NetworkConfig, output_state
from quantum.state import AmplitudeVector, check_normalized, inner

logger = logging.getLogger(__name__)

ARGMAX_NOTE = "补充指标: 与各标签态保真度最大者是否为真实标签"


def fidelity(k: AmplitudeVector, v: AmplitudeVector) -> float:
    """F = ⟨v|k⟩⟨k|v⟩，实向量时为内积平方"""
    return inner(k, v) ** 2


@dataclass(frozen=True)
class SampleRecognition:
    label_index: int
    fidelity: Optional[float]  # 塌缩样本为 None
    recognized: Tuple[bool, ...]
    predicted_index: Optional[int] = None

    @property
    def collapsed(self) -> bool:
        return self.fidelity is None


@dataclass
class RecognitionReport:
    thresholds: Tuple[float, ...]
    rate_per_threshold: List[float] = field(default_factory=list)
    per_sample: List[SampleRecognition] = field(default_factory=list)
    argmax_accuracy: float = 0.0

    @property
    def collapsed_count(self) -> int:
        return sum(1 for s in self.per_sample if s.collapsed)

    def to_dict(self) -> dict:
        def class_name(index: int):
            return SPECIES[index] if index < len(SPECIES) else index

        return {
            "thresholds": list(self.thresholds),
            "rate_per_threshold": list(self.rate_per_threshold),
            "total": len(self.per_sample),
            "collapsed": self.collapsed_count,
            "argmax_accuracy": self.argmax_accuracy,
            "argmax_accuracy_note": ARGMAX_NOTE,
            "per_sample": [
                {
                    "class": class_name(s.label_index),
                    "fidelity": s.fidelity,
                    "recognized": list(s.recognized),
                    "predicted": None if s.predicted_index is None else class_name(s.predicted_index),
                }
                for s in self.per_sample
            ],
        }


def recognition_report(config: NetworkConfig,
                       test: Sequence[Sequence[AmplitudeVector]],
                       thresholds: Sequence[float] = DEFAULT_THRESHOLDS) -> RecognitionReport:
    """保真度严格大于阈值才算识别成功；塌缩样本在所有阈值下都不算识别"""
    if not test:
        raise EmptyDataset("测试集为空")
    thresholds = tuple(sorted(float(t) for t in thresholds))
    report = RecognitionReport(thresholds=thresholds)

    # 候选标签按标签基矢下标排列
    candidates = {}
    for pair in test:
        candidates.setdefault(int(np.argmax(pair[1].amps)), pair[1])
    candidate_items = sorted(candidates.items())

    hits = [0] * len(thresholds)
    correct = 0
    for pair in test:
        x, label = pair[0], pair[1]
        check_normalized(x, label)
        label_index = int(np.argmax(label.amps))
        try:
            k = output_state(config, x)
        except NonlinearCollapse as e:
            logger.warning("测试样本塌缩，记为未识别: %s", e)
            report.per_sample.append(SampleRecognition(
                label_index=label_index, fidelity=None,
                recognized=tuple(False for _ in thresholds)))
            continue
        f = fidelity(k, label)
        recognized = tuple(f > t for t in thresholds)
        for i, ok in enumerate(recognized):
            hits[i] += ok
        scores = [fidelity(k, cand) for _, cand in candidate_items]
        predicted = candidate_items[int(np.argmax(scores))][0]
        correct += predicted == label_index
        report.per_sample.append(SampleRecognition(
            label_index=label_index, fidelity=f, recognized=recognized,
            predicted_index=predicted))

    total = len(test)
    report.rate_per_threshold = [h / total for h in hits]
    report.argmax_accuracy = correct / total
    return report


@dataclass(frozen=True)
class ProjectionRow:
    x1: float
    x2: float
    x3: float
    x4: float
    cls: str
    source: str = "input"


def projection_data(vectors: Sequence[Tuple[AmplitudeVector, str]],
                    source: str = "input") -> List[ProjectionRow]:
    """(x₁/A, x₂/A) 与 (x₃/A, x₄/A) 两个二维投影，可直接绘图"""
    rows = []
    for vec, cls in vectors:
        if vec.dim != 4:
            raise BadDimension(f"投影数据需要 4 维向量，得到 {vec.dim}")
        x1, x2, x3, x4 = (float(v) for v in vec.amps)
        rows.append(ProjectionRow(x1, x2, x3, x4, str(cls), source))
    return rows
