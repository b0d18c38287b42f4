# 评估与报告模块
from .metrics import fidelity, RecognitionReport, recognition_report, ProjectionRow, projection_data
from .resources import ResourceCount, resource_estimate, resource_comparison
from .separability import linearly_separable
