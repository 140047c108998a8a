"""
QCMM: two-qubit entanglement in a compact Minkowski manifold

Embeds two-qubit density matrices of the seven-parameter (D-7) class into a
pair of (3+1)-D points, measures quadridistances and quadrispeeds, classifies
states with the Peres-Horodecki criterion, and traces parametric families to
locate sudden death and revival of entanglement.
"""

# Expose key classes and functions at package level
from qcmm.config import Config
from qcmm.core.state_core import (
    D7Params,
    DensityMatrix4,
    FanoParams,
    ValidationReport,
    compose_d7,
    compose_from_fano,
    decompose_to_fano,
    project_d7,
    validate_density,
)
from qcmm.core.ppt_spectra import PhcVerdict, Spectrum4, classify_phc, partial_transpose
from qcmm.core.cmm_geometry import CmmCoords, QuadDistances, Region, coords_from_d7, quad_distances, region_of
from qcmm.core.kinematics import FunctionModel, KinematicSample, sample_kinematics
from qcmm.core.models import BewMode, BewModel, BewSpec, TabulatedModel, bew_d7, load_tabulated
from qcmm.core.trajectory import CrossingEvent, CrossingKind, TrajectoryTracer, find_crossings, trace_trajectory
from qcmm.schemas import SpeedsSchema, TabulatedModelSchema, TrajectorySchema

__version__ = Config.VERSION

__all__ = [
    "Config",
    "D7Params",
    "DensityMatrix4",
    "FanoParams",
    "ValidationReport",
    "compose_d7",
    "compose_from_fano",
    "decompose_to_fano",
    "project_d7",
    "validate_density",
    "PhcVerdict",
    "Spectrum4",
    "classify_phc",
    "partial_transpose",
    "CmmCoords",
    "QuadDistances",
    "Region",
    "coords_from_d7",
    "quad_distances",
    "region_of",
    "FunctionModel",
    "KinematicSample",
    "sample_kinematics",
    "BewMode",
    "BewModel",
    "BewSpec",
    "TabulatedModel",
    "bew_d7",
    "load_tabulated",
    "CrossingEvent",
    "CrossingKind",
    "TrajectoryTracer",
    "find_crossings",
    "trace_trajectory",
    "SpeedsSchema",
    "TabulatedModelSchema",
    "TrajectorySchema",
]
