"""Core numerical modules for QCMM."""

from qcmm.core.analysis import AnalysisReport, build_report
from qcmm.core.kinematics import ParametricD7Model
from qcmm.core.models import Interpolation, read_tabulated_csv
from qcmm.core.trajectory import TrajectoryPoint, linear_grid

__all__ = [
    "AnalysisReport",
    "build_report",
    "ParametricD7Model",
    "Interpolation",
    "read_tabulated_csv",
    "TrajectoryPoint",
    "linear_grid",
]
