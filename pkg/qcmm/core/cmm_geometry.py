"""
Compact Minkowski manifold (CMM) coordinates of D-7 states.

Each D-7 state maps to two (3+1)-D points, one per 2x2 block of its matrix:

    branch 1: (t-, u-, v+, w-)      branch 2: (t+, u+, v-, w+)

and its partial transpose to the same points with v and w subscripts swapped.
Squared quadridistances s^2 = t^2 - |X|^2 are kept as signed squares.
"""

import logging
import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Tuple

import numpy as np

from qcmm.config import Config
from qcmm.core.state_core import D7Params
from qcmm.errors import DomainError

logger = logging.getLogger("QCMMGeometry")


class Region(str, Enum):
    """Shared label set of the spectral and geometric classifiers."""

    SEPARABLE_LIKE = "SeparableLike"
    ENTANGLED_LIKE = "EntangledLike"
    LIGHT_LIKE = "LightLike"

    @property
    def code(self) -> str:
        return {"SeparableLike": "S", "EntangledLike": "E", "LightLike": "L"}[self.value]


def classify_value(value: float, tol: float) -> Region:
    """Label of a negativity indicator: below the band, inside it, above it."""
    if value < -tol:
        return Region.ENTANGLED_LIKE
    if abs(value) <= tol:
        return Region.LIGHT_LIKE
    return Region.SEPARABLE_LIKE


@dataclass(frozen=True)
class CmmCoords:
    t_minus: float
    u_minus: float
    v_plus: float
    w_minus: float
    t_plus: float
    u_plus: float
    v_minus: float
    w_plus: float

    def branch1(self) -> Tuple[float, float, float, float]:
        return (self.t_minus, self.u_minus, self.v_plus, self.w_minus)

    def branch2(self) -> Tuple[float, float, float, float]:
        return (self.t_plus, self.u_plus, self.v_minus, self.w_plus)

    def pt_branch1(self) -> Tuple[float, float, float, float]:
        return (self.t_minus, self.u_minus, self.v_minus, self.w_plus)

    def pt_branch2(self) -> Tuple[float, float, float, float]:
        return (self.t_plus, self.u_plus, self.v_plus, self.w_minus)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class QuadDistances:
    s1_sq: float
    s2_sq: float
    s1t_sq: float
    s2t_sq: float

    def as_tuple(self) -> tuple:
        return (self.s1_sq, self.s2_sq, self.s1t_sq, self.s2t_sq)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class RegionLabel:
    label: Region
    driver: str     # "s1t_sq" or "s2t_sq"
    value: float


def coords_from_d7(d: D7Params) -> CmmCoords:
    return CmmCoords(
        t_minus=(1.0 - d.mzz) / 2,
        u_minus=(d.p1z - d.p2z) / 2,
        v_plus=(d.mxx + d.myy) / 2,
        w_minus=(d.myx - d.mxy) / 2,
        t_plus=(1.0 + d.mzz) / 2,
        u_plus=(d.p1z + d.p2z) / 2,
        v_minus=(d.mxx - d.myy) / 2,
        w_plus=(d.myx + d.mxy) / 2,
    )


def d7_from_coords(c: CmmCoords) -> D7Params:
    """Inverse of coords_from_d7."""
    return D7Params(
        p1z=c.u_plus + c.u_minus,
        p2z=c.u_plus - c.u_minus,
        mxx=c.v_plus + c.v_minus,
        myy=c.v_plus - c.v_minus,
        mxy=c.w_plus - c.w_minus,
        myx=c.w_plus + c.w_minus,
        mzz=c.t_plus - c.t_minus,
    )


def pt_coords(c: CmmCoords) -> CmmCoords:
    """Partial transposition in coordinates: v+ <-> v-, w+ <-> w-."""
    return CmmCoords(
        t_minus=c.t_minus,
        u_minus=c.u_minus,
        v_plus=c.v_minus,
        w_minus=c.w_plus,
        t_plus=c.t_plus,
        u_plus=c.u_plus,
        v_minus=c.v_plus,
        w_plus=c.w_minus,
    )


def _interval(t: float, x: float, y: float, z: float) -> float:
    return t * t - (x * x + y * y + z * z)


def quad_distances(c: CmmCoords) -> QuadDistances:
    return QuadDistances(
        s1_sq=_interval(*c.branch1()),
        s2_sq=_interval(*c.branch2()),
        s1t_sq=_interval(*c.pt_branch1()),
        s2t_sq=_interval(*c.pt_branch2()),
    )


def invariance_residual(q: QuadDistances) -> float:
    """|s1^2 + s2^2 - s1t^2 - s2t^2|; measured, never assumed zero."""
    return abs(q.s1_sq + q.s2_sq - q.s1t_sq - q.s2t_sq)


def region_of(q: QuadDistances, tol: float = Config.DEFAULT_TOL) -> RegionLabel:
    driver, value = ("s1t_sq", q.s1t_sq) if q.s1t_sq <= q.s2t_sq else ("s2t_sq", q.s2t_sq)
    return RegionLabel(classify_value(value, tol), driver, value)


def forward_cone_check(c: CmmCoords, tol: float = Config.DEFAULT_TOL) -> bool:
    """True iff both state branches sit inside the forward cone t >= |X|.

    Equivalent to positive semidefiniteness of the D-7 matrix; the band of
    2*tol matches an eigenvalue band of tol since lambda = (t - |X|) / 2.
    """
    for t, *spatial in (c.branch1(), c.branch2()):
        gap = t - float(np.linalg.norm(spatial))
        if gap < -2 * tol:
            logger.debug(f"branch at t={t:.6g} lies {-gap:.3e} outside the forward cone")
            return False
    return True


def display_root(sq: float) -> float:
    """Quadridistance for display: sqrt of a non-negative square, NaN otherwise."""
    return math.sqrt(sq) if sq >= 0 else math.nan


def lightcone_reference(x: float) -> Tuple[float, float, float, float]:
    """Point of the 45 degree comparison line (t, u, v, w) = (x, 0, x, 0)."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"light-cone reference is defined on [0, 1], got {x}")
    return (x, 0.0, x, 0.0)
