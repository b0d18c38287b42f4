# 数据集模块
from .iris import RawSample, LabeledSample, SplitDataset, load_iris, preprocess, split, label_state
