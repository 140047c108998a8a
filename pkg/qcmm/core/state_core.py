"""
Two-qubit density matrices: construction, validation, Fano decomposition,
single-qubit reduction and the seven-parameter (D-7) class.

Basis ordering is |00>, |01>, |10>, |11> with qubit 1 the left tensor factor.
"""

import logging
from dataclasses import dataclass, field, fields
from typing import Dict, Iterable, Sequence, Union

import numpy as np

from qcmm.config import Config
from qcmm.errors import InvalidState, NonPositive, NotD7Class

logger = logging.getLogger("QCMMState")

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)
AXES = ("x", "y", "z")

# KRON_BASIS[i, j] = sigma_i (x) sigma_j with sigma_0 = identity
_SIGMA0 = (IDENTITY2,) + PAULI
KRON_BASIS = np.array([[np.kron(a, b) for b in _SIGMA0] for a in _SIGMA0])


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DensityMatrix4:
    """4x4 complex matrix in the computational basis.

    Construction only fixes the shape; the state invariants are checked by
    ``validate_density`` and by the composition paths.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (4, 4):
            raise InvalidState(f"expected a 4x4 matrix, got shape {entries.shape}")
        object.__setattr__(self, "entries", _frozen(entries))

    def __getitem__(self, index):
        return self.entries[index]

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))


@dataclass(frozen=True, eq=False)
class Qubit2x2:
    """Reduced single-qubit density matrix."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (2, 2):
            raise InvalidState(f"expected a 2x2 matrix, got shape {entries.shape}")
        object.__setattr__(self, "entries", _frozen(entries))


@dataclass(frozen=True, eq=False)
class FanoParams:
    """Polarization vectors p1, p2 and correlation matrix m (m[i, j] = M_ij)."""

    p1: np.ndarray
    p2: np.ndarray
    m: np.ndarray

    def __post_init__(self):
        p1 = np.array(self.p1, dtype=float).reshape(3)
        p2 = np.array(self.p2, dtype=float).reshape(3)
        m = np.array(self.m, dtype=float).reshape(3, 3)
        object.__setattr__(self, "p1", _frozen(p1))
        object.__setattr__(self, "p2", _frozen(p2))
        object.__setattr__(self, "m", _frozen(m))

    @classmethod
    def zeros(cls) -> "FanoParams":
        return cls(np.zeros(3), np.zeros(3), np.zeros((3, 3)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.p1)) and np.all(np.isfinite(self.p2))
                    and np.all(np.isfinite(self.m)))

    def bound_violations(self, tol: float = Config.DEFAULT_TOL) -> Dict[str, float]:
        """Entries breaking |P_k| <= 1 or |M_ij| <= 1 beyond tol."""
        out = {}
        for name, vec in (("|p1|", self.p1), ("|p2|", self.p2)):
            norm = float(np.linalg.norm(vec))
            if norm > 1.0 + tol:
                out[name] = norm
        for i, a in enumerate(AXES):
            for j, b in enumerate(AXES):
                if abs(self.m[i, j]) > 1.0 + tol:
                    out[f"m{a}{b}"] = float(self.m[i, j])
        return out

    def allclose(self, other: "FanoParams", atol: float = Config.ROUNDTRIP_TOL) -> bool:
        return (np.allclose(self.p1, other.p1, rtol=0, atol=atol)
                and np.allclose(self.p2, other.p2, rtol=0, atol=atol)
                and np.allclose(self.m, other.m, rtol=0, atol=atol))

    def to_dict(self) -> dict:
        return {"p1": self.p1.tolist(), "p2": self.p2.tolist(), "m": self.m.tolist()}


@dataclass(frozen=True)
class D7Params:
    """The seven free parameters of the z-aligned block-pattern class."""

    p1z: float = 0.0
    p2z: float = 0.0
    mxx: float = 0.0
    myy: float = 0.0
    mxy: float = 0.0
    myx: float = 0.0
    mzz: float = 0.0

    FIELDS = ("p1z", "p2z", "mxx", "myy", "mxy", "myx", "mzz")

    @classmethod
    def from_sequence(cls, values: Iterable[float]) -> "D7Params":
        values = [float(v) for v in values]
        if len(values) != 7:
            raise ValueError(f"expected 7 values, got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.as_tuple())))

    def to_fano(self) -> FanoParams:
        """Zero-padded embedding into the 15-parameter Fano form."""
        m = np.array([
            [self.mxx, self.mxy, 0.0],
            [self.myx, self.myy, 0.0],
            [0.0, 0.0, self.mzz],
        ])
        return FanoParams([0.0, 0.0, self.p1z], [0.0, 0.0, self.p2z], m)


@dataclass(frozen=True)
class ValidationReport:
    """Per-invariant residuals and pass/fail flags for a candidate state."""

    hermiticity_residual: float
    trace_deviation: float
    min_eigenvalue: float
    purity: float
    tolerance: float
    hermitian_ok: bool = field(init=False)
    trace_ok: bool = field(init=False)
    psd_ok: bool = field(init=False)
    purity_ok: bool = field(init=False)

    def __post_init__(self):
        tol = self.tolerance
        object.__setattr__(self, "hermitian_ok", self.hermiticity_residual <= tol)
        object.__setattr__(self, "trace_ok", self.trace_deviation <= tol)
        object.__setattr__(self, "psd_ok", self.min_eigenvalue >= -tol)
        object.__setattr__(self, "purity_ok", self.purity <= 1.0 + tol)

    @property
    def passed(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok and self.purity_ok

    def failures(self) -> list:
        names = ("hermitian", "trace", "psd", "purity")
        return [n for n in names if not getattr(self, f"{n}_ok")]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "hermiticity_residual": self.hermiticity_residual,
            "trace_deviation": self.trace_deviation,
            "min_eigenvalue": self.min_eigenvalue,
            "purity": self.purity,
            "tolerance": self.tolerance,
            "hermitian_ok": self.hermitian_ok,
            "trace_ok": self.trace_ok,
            "psd_ok": self.psd_ok,
            "purity_ok": self.purity_ok,
        }


MatrixLike = Union[DensityMatrix4, np.ndarray, Sequence]


def as_density(rho: MatrixLike) -> DensityMatrix4:
    return rho if isinstance(rho, DensityMatrix4) else DensityMatrix4(rho)


def _hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def min_eigenvalue(rho: MatrixLike) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    a = as_density(rho).entries
    return float(np.linalg.eigvalsh(_hermitian_part(a))[0])


def _require_hermitian_unit_trace(rho: DensityMatrix4, tol: float):
    a = rho.entries
    residual = float(np.max(np.abs(a - a.conj().T)))
    if residual > tol:
        raise InvalidState(f"matrix is not Hermitian: residual {residual:.3e}")
    deviation = abs(np.trace(a) - 1.0)
    if deviation > tol:
        raise InvalidState(f"trace deviates from 1 by {deviation:.3e}")


def validate_density(rho: MatrixLike, tol: float = Config.DEFAULT_TOL) -> ValidationReport:
    """Measure every density-matrix invariant; never raises on bad states."""
    a = as_density(rho).entries
    herm = _hermitian_part(a)
    return ValidationReport(
        hermiticity_residual=float(np.max(np.abs(a - a.conj().T))),
        trace_deviation=float(abs(np.trace(a) - 1.0)),
        min_eigenvalue=float(np.linalg.eigvalsh(herm)[0]),
        purity=float(np.real(np.trace(herm @ herm))),
        tolerance=tol,
    )


def fano_matrix(f: FanoParams) -> DensityMatrix4:
    """Matrix of a Fano parameter set, without the positivity gate."""
    coeffs = np.empty((4, 4))
    coeffs[0, 0] = 1.0
    coeffs[0, 1:] = f.p2
    coeffs[1:, 0] = f.p1
    coeffs[1:, 1:] = f.m
    return DensityMatrix4(0.25 * np.einsum("ij,ijkl->kl", coeffs, KRON_BASIS))


def compose_from_fano(f: FanoParams, tol: float = Config.DEFAULT_TOL) -> DensityMatrix4:
    """Build the density matrix of a Fano parameter set.

    Raises NonPositive when the parameters fall outside the state set.
    """
    if not f.is_finite():
        raise ValueError("Fano parameters must be finite")
    rho = fano_matrix(f)
    lowest = min_eigenvalue(rho)
    if lowest < -tol:
        raise NonPositive(lowest, tol)
    return rho


def decompose_to_fano(rho: MatrixLike, tol: float = Config.DEFAULT_TOL) -> FanoParams:
    """Polarization vectors and correlation matrix via Pauli traces.

    Requires a Hermitian unit-trace matrix; positivity is not required so that
    boundary and non-physical trajectory points can still be decomposed.
    """
    rho = as_density(rho)
    _require_hermitian_unit_trace(rho, tol)
    coeffs = np.real(np.einsum("ijkl,lk->ij", KRON_BASIS, rho.entries))
    return FanoParams(coeffs[1:, 0], coeffs[0, 1:], coeffs[1:, 1:])


def fano_from_entries(rho: MatrixLike) -> FanoParams:
    """Fano parameters read directly off the matrix entries."""
    r = as_density(rho).entries
    p1 = [
        2 * np.real(r[0, 2] + r[1, 3]),
        -2 * np.imag(r[0, 2] + r[1, 3]),
        np.real(r[0, 0] + r[1, 1] - r[2, 2] - r[3, 3]),
    ]
    p2 = [
        2 * np.real(r[0, 1] + r[2, 3]),
        -2 * np.imag(r[0, 1] + r[2, 3]),
        np.real(r[0, 0] - r[1, 1] + r[2, 2] - r[3, 3]),
    ]
    mxx = 2 * np.real(r[0, 3] + r[1, 2])
    myy = 2 * np.real(r[1, 2] - r[0, 3])
    mxy = 2 * np.imag(r[1, 2] - r[0, 3])
    myx = -2 * np.imag(r[0, 3] + r[1, 2])
    mxz = 2 * np.real(r[0, 2] - r[1, 3])
    myz = -2 * np.imag(r[0, 2] - r[1, 3])
    mzx = 2 * np.real(r[0, 1] - r[2, 3])
    mzy = -2 * np.imag(r[0, 1] - r[2, 3])
    mzz = np.real(r[0, 0] - r[1, 1] - r[2, 2] + r[3, 3])
    m = [[mxx, mxy, mxz], [myx, myy, myz], [mzx, mzy, mzz]]
    return FanoParams(p1, p2, m)


def reduce_qubit(rho: MatrixLike, which: int, tol: float = Config.DEFAULT_TOL) -> Qubit2x2:
    """Partial trace over the other qubit; which is 1 or 2."""
    rho = as_density(rho)
    _require_hermitian_unit_trace(rho, tol)
    t = rho.entries.reshape(2, 2, 2, 2)
    if which == 1:
        return Qubit2x2(np.einsum("ajbj->ab", t))
    if which == 2:
        return Qubit2x2(np.einsum("jajb->ab", t))
    raise ValueError(f"which must be 1 or 2, got {which}")


def qubit_from_polarization(p: Sequence[float]) -> Qubit2x2:
    """(1/2)(1 + sigma . p)."""
    p = np.asarray(p, dtype=float)
    return Qubit2x2(0.5 * (IDENTITY2 + np.einsum("i,ijk->jk", p, np.array(PAULI))))


# Off-pattern entries that must vanish in the D-7 class
_OFF_PATTERN = (
    ("p1x", lambda f: f.p1[0]),
    ("p1y", lambda f: f.p1[1]),
    ("p2x", lambda f: f.p2[0]),
    ("p2y", lambda f: f.p2[1]),
    ("mxz", lambda f: f.m[0, 2]),
    ("mzx", lambda f: f.m[2, 0]),
    ("myz", lambda f: f.m[1, 2]),
    ("mzy", lambda f: f.m[2, 1]),
)


def project_d7(f: FanoParams, tol: float = Config.DEFAULT_TOL) -> D7Params:
    """Keep the seven D-7 parameters; NotD7Class if any off-pattern entry exceeds tol."""
    offending = {}
    for name, getter in _OFF_PATTERN:
        magnitude = abs(float(getter(f)))
        if magnitude > tol:
            offending[name] = magnitude
    if offending:
        logger.debug(f"D-7 projection rejected: {offending}")
        raise NotD7Class(offending, tol)
    return D7Params(
        p1z=float(f.p1[2]),
        p2z=float(f.p2[2]),
        mxx=float(f.m[0, 0]),
        myy=float(f.m[1, 1]),
        mxy=float(f.m[0, 1]),
        myx=float(f.m[1, 0]),
        mzz=float(f.m[2, 2]),
    )


def compose_d7(d: D7Params, tol: float = Config.DEFAULT_TOL) -> DensityMatrix4:
    """Checked density matrix of a D-7 parameter set."""
    if not d.is_finite():
        raise ValueError("D-7 parameters must be finite")
    return compose_from_fano(d.to_fano(), tol)


def d7_matrix(d: D7Params) -> DensityMatrix4:
    """D-7 matrix without the positivity gate."""
    return fano_matrix(d.to_fano())


def density_from_ket(psi: Sequence[complex]) -> DensityMatrix4:
    """Projector onto a (normalised) two-qubit ket."""
    psi = np.asarray(psi, dtype=complex).reshape(4)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix4(np.outer(psi, psi.conj()))


def singlet_density() -> DensityMatrix4:
    """|psi-><psi-| with |psi-> = (|01> - |10>)/sqrt(2)."""
    return density_from_ket([0.0, 1.0, -1.0, 0.0])


def product_density(a: MatrixLike, b: MatrixLike) -> DensityMatrix4:
    """Tensor product of two single-qubit density matrices."""
    a = a.entries if isinstance(a, Qubit2x2) else np.asarray(a, dtype=complex)
    b = b.entries if isinstance(b, Qubit2x2) else np.asarray(b, dtype=complex)
    return DensityMatrix4(np.kron(a, b))
