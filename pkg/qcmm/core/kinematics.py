"""
Velocities, speeds and squared quadrispeeds along one-parameter D-7 families.

A branch velocity is the rate of its spatial coordinates against its own
pseudo-time coordinate, each differentiated in the intrinsic parameter theta:

    V = (du/dtheta, dv/dtheta, dw/dtheta) / (dt/dtheta)

so any monotone reparametrization of theta cancels. Squared quadrispeeds are
1 - |V|^2 and go negative for "superluminal" motion; no roots are taken.

Models are called from worker threads by the trajectory engine and must be
stateless or internally synchronised.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Tuple, runtime_checkable

import numpy as np

from qcmm.config import Config
from qcmm.core.cmm_geometry import CmmCoords, coords_from_d7
from qcmm.core.state_core import D7Params
from qcmm.errors import DegenerateClock, DomainError

logger = logging.getLogger("QCMMKinematics")

Vector3 = Tuple[float, float, float]


@runtime_checkable
class ParametricD7Model(Protocol):
    """theta -> D7Params on a closed domain, optionally with d(D7Params)/dtheta."""

    @property
    def domain(self) -> Tuple[float, float]: ...

    def __call__(self, theta: float) -> D7Params: ...

    def derivative(self, theta: float) -> Optional[D7Params]: ...


@dataclass(frozen=True)
class FunctionModel:
    """ParametricD7Model assembled from plain callables."""

    func: Callable[[float], D7Params]
    lo: float
    hi: float
    derivative_func: Optional[Callable[[float], D7Params]] = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty domain [{self.lo}, {self.hi}]")

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.lo, self.hi)

    def __call__(self, theta: float) -> D7Params:
        return self.func(theta)

    def derivative(self, theta: float) -> Optional[D7Params]:
        return None if self.derivative_func is None else self.derivative_func(theta)


class CoordinateRates(CmmCoords):
    """d(CmmCoords)/dtheta; the rates satisfy dt-/dtheta + dt+/dtheta = 0."""


@dataclass(frozen=True)
class KinematicSample:
    theta: float
    v1: Optional[Vector3]
    v2: Optional[Vector3]
    v1t: Optional[Vector3]
    v2t: Optional[Vector3]
    speed1: float
    speed2: float
    speed1t: float
    speed2t: float
    qspeed1_sq: float
    qspeed2_sq: float
    qspeed1t_sq: float
    qspeed2t_sq: float
    degenerate: Tuple[str, ...] = ()

    def speeds(self) -> dict:
        return {
            "speed1": self.speed1,
            "speed2": self.speed2,
            "speed1t": self.speed1t,
            "speed2t": self.speed2t,
            "qspeed1_sq": self.qspeed1_sq,
            "qspeed2_sq": self.qspeed2_sq,
            "qspeed1t_sq": self.qspeed1t_sq,
            "qspeed2t_sq": self.qspeed2t_sq,
        }


# (branch, transposed) -> (clock coordinate, spatial coordinates)
_BRANCH_COMPONENTS = {
    (1, False): ("t_minus", ("u_minus", "v_plus", "w_minus")),
    (2, False): ("t_plus", ("u_plus", "v_minus", "w_plus")),
    (1, True): ("t_minus", ("u_minus", "v_minus", "w_plus")),
    (2, True): ("t_plus", ("u_plus", "v_plus", "w_minus")),
}

# sample field suffix for each (branch, transposed)
_SAMPLE_KEYS = {(1, False): "1", (2, False): "2", (1, True): "1t", (2, True): "2t"}


def _coord_vector(model: ParametricD7Model, theta: float) -> np.ndarray:
    return np.array(coords_from_d7(model(theta)).as_tuple())


def _linear_rates(dd: D7Params) -> CoordinateRates:
    """Chain rule through the linear part of the coordinate map."""
    return CoordinateRates(
        t_minus=-dd.mzz / 2,
        u_minus=(dd.p1z - dd.p2z) / 2,
        v_plus=(dd.mxx + dd.myy) / 2,
        w_minus=(dd.myx - dd.mxy) / 2,
        t_plus=dd.mzz / 2,
        u_plus=(dd.p1z + dd.p2z) / 2,
        v_minus=(dd.mxx - dd.myy) / 2,
        w_plus=(dd.myx + dd.mxy) / 2,
    )


def coordinate_derivatives(
    model: ParametricD7Model,
    theta: float,
    h: Optional[float] = None,
) -> CoordinateRates:
    """Rates of the eight CMM coordinates at theta.

    Uses the model's analytic derivative when it has one; otherwise a central
    difference, switching to a second-order one-sided stencil at the domain
    edges.
    """
    lo, hi = model.domain
    if not lo <= theta <= hi:
        raise DomainError(f"theta={theta} outside model domain [{lo}, {hi}]")

    dd = model.derivative(theta)
    if dd is not None:
        return _linear_rates(dd)

    h = Config.default_step(theta) if h is None else h
    if h <= 0:
        raise DomainError(f"finite-difference step must be positive, got {h}")
    if theta - h >= lo and theta + h <= hi:
        rates = (_coord_vector(model, theta + h) - _coord_vector(model, theta - h)) / (2 * h)
    elif theta + 2 * h <= hi:
        # differences first so flat data gives exact zeros
        c0, c1, c2 = (_coord_vector(model, theta + k * h) for k in range(3))
        rates = (4 * (c1 - c0) - (c2 - c0)) / (2 * h)
    elif theta - 2 * h >= lo:
        c0, c1, c2 = (_coord_vector(model, theta - k * h) for k in range(3))
        rates = ((c2 - c0) - 4 * (c1 - c0)) / (2 * h)
    else:
        raise DomainError(f"domain [{lo}, {hi}] is narrower than the stencil (h={h})")
    return CoordinateRates(*(float(r) for r in rates))


def velocity_from_rates(
    rates: CoordinateRates,
    branch: int,
    transposed: bool = False,
    eps_den: float = Config.EPS_DEN,
) -> Vector3:
    """Branch velocity from precomputed coordinate rates."""
    try:
        clock, spatial = _BRANCH_COMPONENTS[(branch, bool(transposed))]
    except KeyError:
        raise ValueError(f"branch must be 1 or 2, got {branch}") from None
    rate = getattr(rates, clock)
    if abs(rate) < eps_den:
        raise DegenerateClock(branch, bool(transposed), rate)
    return tuple(getattr(rates, name) / rate for name in spatial)


def velocity(
    model: ParametricD7Model,
    theta: float,
    branch: int,
    transposed: bool = False,
    h: Optional[float] = None,
    eps_den: float = Config.EPS_DEN,
) -> Vector3:
    return velocity_from_rates(coordinate_derivatives(model, theta, h), branch, transposed, eps_den)


def speed(
    model: ParametricD7Model,
    theta: float,
    branch: int,
    transposed: bool = False,
    h: Optional[float] = None,
    eps_den: float = Config.EPS_DEN,
) -> float:
    """Euclidean norm of the branch velocity; unbounded above."""
    return float(np.linalg.norm(velocity(model, theta, branch, transposed, h, eps_den)))


def quadrispeed_sq(
    model: ParametricD7Model,
    theta: float,
    branch: int,
    transposed: bool = False,
    h: Optional[float] = None,
    eps_den: float = Config.EPS_DEN,
) -> float:
    """1 - speed^2, signed."""
    return 1.0 - speed(model, theta, branch, transposed, h, eps_den) ** 2


def sample_from_rates(
    theta: float,
    rates: CoordinateRates,
    eps_den: float = Config.EPS_DEN,
) -> KinematicSample:
    values = {}
    degenerate = []
    for key, suffix in _SAMPLE_KEYS.items():
        try:
            vel = velocity_from_rates(rates, *key, eps_den=eps_den)
        except DegenerateClock as exc:
            logger.debug(f"theta={theta}: {exc}")
            degenerate.append(suffix)
            values[f"v{suffix}"] = None
            values[f"speed{suffix}"] = math.inf
            values[f"qspeed{suffix}_sq"] = -math.inf
            continue
        spd = float(np.linalg.norm(vel))
        values[f"v{suffix}"] = vel
        values[f"speed{suffix}"] = spd
        values[f"qspeed{suffix}_sq"] = 1.0 - spd ** 2
    return KinematicSample(theta=theta, degenerate=tuple(degenerate), **values)


def sample_kinematics(
    model: ParametricD7Model,
    theta: float,
    h: Optional[float] = None,
    eps_den: float = Config.EPS_DEN,
) -> KinematicSample:
    """All four velocities at theta; stationary clocks are flagged per branch."""
    return sample_from_rates(theta, coordinate_derivatives(model, theta, h), eps_den)
