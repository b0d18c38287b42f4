"""
鸢尾花数据集 - 读取、截断归一化预处理、训练/测试划分、标签态
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config import (
    IRIS_CUTS, IRIS_FEATURES, SAMPLES_PER_CLASS, SPECIES, SPECIES_ALIASES,
    SPECIES_LABEL_INDEX, TRAIN_PER_CLASS,
)
from quantum.errors import ClassCountMismatch, ParseError
from quantum.state import AmplitudeVector, amplitude_encode

logger = logging.getLogger(__name__)

_COLUMNS = list(IRIS_FEATURES) + ["species"]


@dataclass(frozen=True)
class RawSample:
    """一条原始记录，单位 cm"""

    sepal_length: float
    sepal_width: float
    petal_length: float
    petal_width: float
    species: str

    @property
    def features(self) -> Tuple[float, float, float, float]:
        return (self.sepal_length, self.sepal_width, self.petal_length, self.petal_width)


class LabeledSample(NamedTuple):
    vector: AmplitudeVector
    label: AmplitudeVector
    species: str
    index: int  # 在原始文件中的序号


@dataclass(frozen=True)
class SplitDataset:
    train: Tuple[LabeledSample, ...]
    test: Tuple[LabeledSample, ...]
    split_seed: int

    @property
    def train_indices(self) -> List[int]:
        return [s.index for s in self.train]

    @property
    def test_indices(self) -> List[int]:
        return [s.index for s in self.test]


def canonical_species(name: str) -> str:
    """类别名归一化，大小写不敏感，接受 versicolor/Versicolour 等写法"""
    key = str(name).strip().lower()
    if key not in SPECIES_ALIASES:
        raise ValueError(f"未知类别: {name!r}")
    return SPECIES_ALIASES[key]


def _is_number(text) -> bool:
    try:
        float(text)
        return True
    except (TypeError, ValueError):
        return False


def load_iris(path: Union[str, Path]) -> List[RawSample]:
    """读取标准逗号分隔的 Iris 文件（4 个数值 + 类别名），自动跳过表头"""
    path = Path(path)
    try:
        df = pd.read_csv(path, header=None, names=_COLUMNS, dtype=str,
                         skip_blank_lines=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ParseError("文件为空", line_no=1) from None
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ParseError(f"字段数不符: {e}",
                         line_no=int(match.group(1)) if match else None) from None

    samples: List[RawSample] = []
    seen_data = False
    for row_index, row in df.iterrows():
        line_no = int(row_index) + 1
        cells = [row[col] for col in _COLUMNS]
        if all(pd.isna(cell) for cell in cells):
            continue
        if not seen_data and not any(_is_number(cell) for cell in cells[:4]):
            logger.debug("跳过表头: 第 %d 行", line_no)
            seen_data = True
            continue
        seen_data = True
        if any(pd.isna(cell) for cell in cells):
            raise ParseError("缺少字段", line_no=line_no)
        values = pd.to_numeric(pd.Series(cells[:4]), errors="coerce")
        if values.isna().any():
            raise ParseError(f"无法解析数值: {cells[:4]}", line_no=line_no)
        if (values <= 0).any():
            raise ParseError(f"测量值必须为正: {cells[:4]}", line_no=line_no)
        try:
            species = canonical_species(cells[4])
        except ValueError as e:
            raise ParseError(str(e), line_no=line_no) from None
        samples.append(RawSample(*(float(v) for v in values), species=species))

    if not samples:
        raise ParseError("文件中没有数据行", line_no=1)
    _check_counts(samples, SAMPLES_PER_CLASS)
    logger.info("已读取 %d 条鸢尾花样本: %s", len(samples), path)
    return samples


def _check_counts(samples: Sequence[RawSample], expected: int):
    counts = {name: 0 for name in SPECIES}
    for sample in samples:
        counts[sample.species] += 1
    if any(count != expected for count in counts.values()):
        raise ClassCountMismatch(f"每类应有 {expected} 条样本，实际 {counts}")


def preprocess(sample: RawSample) -> AmplitudeVector:
    """SL、SW、PL 分别减去 4、3、4 cm，PW 不变，再做振幅编码"""
    return amplitude_encode(np.array(sample.features) - np.array(IRIS_CUTS))


def label_state(species: str) -> AmplitudeVector:
    """Setosa → |v⟩₁，Versicolour → |v⟩₂，Virginica → |v⟩₃"""
    return AmplitudeVector.basis(4, SPECIES_LABEL_INDEX[canonical_species(species)])


def labeled(sample: RawSample, index: int) -> LabeledSample:
    return LabeledSample(preprocess(sample), label_state(sample.species), sample.species, index)


def split(samples: Sequence[RawSample], seed: int) -> SplitDataset:
    """每类随机抽 40 条作训练集，其余 10 条作测试集"""
    _check_counts(samples, SAMPLES_PER_CLASS)
    rng = np.random.default_rng(seed)
    train: List[LabeledSample] = []
    test: List[LabeledSample] = []
    for name in SPECIES:
        members = [i for i, s in enumerate(samples) if s.species == name]
        order = rng.permutation(len(members))
        chosen = [members[k] for k in order]
        train.extend(labeled(samples[i], i) for i in chosen[:TRAIN_PER_CLASS])
        test.extend(labeled(samples[i], i) for i in chosen[TRAIN_PER_CLASS:])
    return SplitDataset(train=tuple(train), test=tuple(test), split_seed=seed)
