# 量子态、网络与测量模块
from .state import AmplitudeVector, BranchState, amplitude_encode, ghz_init, set_input, inner, distance_squared
from .mesh import RotationMesh, build_matrix, apply_weight, random_mesh
from .nonlinear import NonlinearResult, nonlinear_map, apply_nonlinear
from .measurement import MseEstimate, ShotPlan, prepare_label, measure_exact, measure_shots
from .network import NetworkConfig, forward, output_state, param_view, forward_batch
from .loss import SampleSet, accumulated_mse, accumulated_mse_summary
