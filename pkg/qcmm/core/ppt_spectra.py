"""
Partial transposition, spectra and the Peres-Horodecki classification.
"""

import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from qcmm.config import Config
from qcmm.core.cmm_geometry import CmmCoords, Region, classify_value, coords_from_d7, pt_coords
from qcmm.core.state_core import (
    D7Params,
    DensityMatrix4,
    FanoParams,
    MatrixLike,
    as_density,
    validate_density,
)
from qcmm.errors import InvalidState, NotHermitian

logger = logging.getLogger("QCMMSpectra")

# axis permutations of the (a, b, a', b') view of a 4x4 matrix
_PT_AXES = {1: (2, 1, 0, 3), 2: (0, 3, 2, 1)}


@dataclass(frozen=True)
class Spectrum4:
    """Four real eigenvalues, sorted descending.

    residual is the worst eigenpair residual for numeric spectra and 0 for
    closed forms.
    """

    values: Tuple[float, float, float, float]
    residual: float = field(default=0.0, compare=False)

    def __post_init__(self):
        ordered = tuple(sorted((float(v) for v in self.values), reverse=True))
        if len(ordered) != 4:
            raise ValueError(f"expected 4 eigenvalues, got {len(ordered)}")
        object.__setattr__(self, "values", ordered)

    @property
    def minimum(self) -> float:
        return self.values[-1]

    @property
    def total(self) -> float:
        return sum(self.values)

    def to_list(self) -> list:
        return list(self.values)


@dataclass(frozen=True)
class PhcVerdict:
    label: Region
    min_pt_eigenvalue: float
    tolerance_used: float

    def to_dict(self) -> dict:
        return {
            "label": self.label.value,
            "min_pt_eigenvalue": self.min_pt_eigenvalue,
            "tolerance_used": self.tolerance_used,
        }


def _check_hermitian_unit_trace(rho: DensityMatrix4, tol: float):
    report = validate_density(rho, tol)
    if not (report.hermitian_ok and report.trace_ok):
        raise InvalidState(
            f"partial transpose needs a Hermitian unit-trace matrix "
            f"(hermiticity {report.hermiticity_residual:.3e}, "
            f"trace deviation {report.trace_deviation:.3e})"
        )


def partial_transpose(rho: MatrixLike, qubit: int = 2, tol: float = Config.DEFAULT_TOL) -> DensityMatrix4:
    """Transpose the indices of one qubit.

    The output is Hermitian with the same trace but need not be positive.
    Applying it twice returns the input entries exactly.
    """
    if qubit not in _PT_AXES:
        raise ValueError(f"qubit must be 1 or 2, got {qubit}")
    rho = as_density(rho)
    _check_hermitian_unit_trace(rho, tol)
    swapped = rho.entries.reshape(2, 2, 2, 2).transpose(_PT_AXES[qubit]).reshape(4, 4)
    return DensityMatrix4(swapped)


def reflect_fano(f: FanoParams) -> FanoParams:
    """Reflect qubit 2's Pauli vector across the x-z plane.

    Negates P2y and the y column of the correlation matrix; the composed
    matrix equals the partial transpose on qubit 2.
    """
    p2 = f.p2.copy()
    p2[1] = -p2[1]
    m = f.m.copy()
    m[:, 1] = -m[:, 1]
    return FanoParams(f.p1.copy(), p2, m)


def eigenvalues_hermitian4(rho: MatrixLike, tol: float = Config.DEFAULT_TOL) -> Spectrum4:
    """Numeric spectrum of a Hermitian 4x4 matrix (LAPACK heevd via numpy).

    The eigenpair residual max ||H v - lambda v|| is measured on the Hermitian
    part H and carried on the result.
    """
    a = as_density(rho).entries
    skew = float(np.max(np.abs(a - a.conj().T)))
    if skew > tol:
        raise NotHermitian(skew, tol)
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    residual = float(np.max(np.linalg.norm(h @ v - v * w, axis=0)))
    if residual > Config.EIG_RESIDUAL_TOL:
        logger.warning(f"eigensolver residual {residual:.3e} above {Config.EIG_RESIDUAL_TOL:.0e}")
    return Spectrum4(tuple(w), residual=residual)


def _branch_pairs(c: CmmCoords) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    t1, *x1 = c.branch1()
    t2, *x2 = c.branch2()
    r1 = float(np.linalg.norm(x1))
    r2 = float(np.linalg.norm(x2))
    return ((t1 + r1) / 2, (t1 - r1) / 2), ((t2 + r2) / 2, (t2 - r2) / 2)


def d7_branch_eigenvalues(d: D7Params, transposed: bool = False):
    """Closed-form eigenvalues grouped by block: ((l1, l2), (l3, l4)).

    l1,2 = (t- +/- X1)/2 and l3,4 = (t+ +/- X2)/2; with transposed=True the
    same formulas run on the v/w-swapped coordinates.
    """
    c = coords_from_d7(d)
    return _branch_pairs(pt_coords(c) if transposed else c)


def d7_eigenvalues(d: D7Params) -> Spectrum4:
    (l1, l2), (l3, l4) = d7_branch_eigenvalues(d)
    return Spectrum4((l1, l2, l3, l4))


def d7_pt_eigenvalues(d: D7Params) -> Spectrum4:
    (l1, l2), (l3, l4) = d7_branch_eigenvalues(d, transposed=True)
    return Spectrum4((l1, l2, l3, l4))


def classify_phc(rho: MatrixLike, tol: float = Config.DEFAULT_TOL, qubit: int = 2) -> PhcVerdict:
    """Peres-Horodecki verdict from the smallest partial-transpose eigenvalue."""
    rho = as_density(rho)
    report = validate_density(rho, tol)
    if not report.passed:
        raise InvalidState(f"not a valid density matrix: failed {report.failures()}")
    lowest = eigenvalues_hermitian4(partial_transpose(rho, qubit, tol), tol).minimum
    verdict = PhcVerdict(classify_value(lowest, tol), lowest, tol)
    logger.debug(f"PHC verdict {verdict.label.value} (min PT eigenvalue {lowest:.6g})")
    return verdict
