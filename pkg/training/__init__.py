# 训练模块
from .trainer import TrainingConfig, TrainingTrace, Gradient, gradient, initial_network, train
