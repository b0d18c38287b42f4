"""
纠缠量子深度学习模拟器配置文件
"""
from pathlib import Path

# 项目目录
PROJECT_DIR = Path(__file__).parent

# 数据与输出路径（不在导入时创建目录）
DEFAULT_IRIS_PATH = PROJECT_DIR / "data" / "iris.data"
DEFAULT_OUTPUT_DIR = PROJECT_DIR / "runs"

# 数值容差
NORM_TOL = 1e-12          # 归一化容差
COLLAPSE_TOL = 1e-24      # 非线性层 a 的塌缩阈值（振幅尺度 1e-12）
DEGENERATE_TOL = 1e-12    # γ²、λ² 的退化阈值

# 训练超参数，单位 rad
DEFAULT_EPSILON = 0.001
DEFAULT_LEARNING_RATE = 0.05
DEFAULT_ITERATIONS = 5000

# 随机种子
DEFAULT_SPLIT_SEED = 0
DEFAULT_INIT_SEED = 1
DEFAULT_SHOT_SEED = 2
REPRODUCE_INIT_SEEDS = (1, 2, 3)

# 神经元层数 -> UU→NL 块数
LAYER_BLOCKS = {
    3: 2,  # Input → UU → NL → UU → NL
    4: 3,  # Input → UU → NL → UU → NL → UU → NL
}

# 识别阈值 E1..E5
DEFAULT_THRESHOLDS = (0.5, 0.6, 0.7, 0.8, 0.9)

# 鸢尾花数据集
IRIS_FEATURES = ("sepal_length", "sepal_width", "petal_length", "petal_width")
IRIS_CUTS = (4.0, 3.0, 4.0, 0.0)  # SL、SW、PL 各减去的常数，PW 不变
SAMPLES_PER_CLASS = 50
TRAIN_PER_CLASS = 40

SPECIES = ("Setosa", "Versicolour", "Virginica")

# 类别名 -> 标签态 |v⟩ᵢ 的基矢下标
SPECIES_LABEL_INDEX = {
    "Setosa": 0,
    "Versicolour": 1,
    "Virginica": 2,
}

# 常见拼写（小写匹配）
SPECIES_ALIASES = {
    "setosa": "Setosa",
    "iris-setosa": "Setosa",
    "versicolour": "Versicolour",
    "versicolor": "Versicolour",
    "iris-versicolour": "Versicolour",
    "iris-versicolor": "Versicolour",
    "virginica": "Virginica",
    "iris-virginica": "Virginica",
}

# 退出码
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3
