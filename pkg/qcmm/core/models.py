"""
Built-in BEW family and tabulated user families.

BEW: rho(x) = x |psi-><psi-| + (1 - x)/4 I, with x either the sweep
parameter itself or a function of time (decay e^(-gamma t), growth
1 - e^(-gamma t)).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator

from qcmm.config import Config
from qcmm.core.state_core import D7Params
from qcmm.errors import DomainError, MalformedTable
from qcmm.schemas import TabulatedModelSchema

logger = logging.getLogger("QCMMModels")


class BewMode(str, Enum):
    PARAMETER_X = "parameter_x"
    DECAY = "decay"
    GROWTH = "growth"


class Interpolation(str, Enum):
    LINEAR = "linear"
    CUBIC_MONOTONE = "cubic-monotone"


@dataclass(frozen=True)
class BewSpec:
    mode: BewMode = BewMode.PARAMETER_X
    gamma: float = Config.DEFAULT_GAMMA

    def __post_init__(self):
        object.__setattr__(self, "mode", BewMode(self.mode))
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError(f"gamma must be positive, got {self.gamma}")


def bew_d7(x: float) -> D7Params:
    """(p1z, p2z, mxx, myy, mxy, myx, mzz) = (0, 0, -x, -x, 0, 0, -x)."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"BEW weight x must lie in [0, 1], got {x}")
    return D7Params(mxx=-x, myy=-x, mzz=-x)


def bew_x_of_t(spec: BewSpec, t: float) -> float:
    if spec.mode is BewMode.PARAMETER_X:
        return t
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")
    decayed = math.exp(-spec.gamma * t)
    return decayed if spec.mode is BewMode.DECAY else 1.0 - decayed


def bew_dx_dt(spec: BewSpec, t: float) -> float:
    if spec.mode is BewMode.PARAMETER_X:
        return 1.0
    rate = spec.gamma * math.exp(-spec.gamma * t)
    return -rate if spec.mode is BewMode.DECAY else rate


class BewModel:
    """ParametricD7Model for a BEW mode with its analytic derivative."""

    def __init__(self, spec: Optional[BewSpec] = None, lo: float = 0.0, hi: Optional[float] = None):
        self.spec = spec or BewSpec()
        if hi is None:
            hi = 1.0 if self.spec.mode is BewMode.PARAMETER_X else 10.0 / self.spec.gamma
        if not lo < hi:
            raise DomainError(f"empty domain [{lo}, {hi}]")
        if lo < 0 or (self.spec.mode is BewMode.PARAMETER_X and hi > 1.0):
            raise DomainError(f"domain [{lo}, {hi}] leaves the BEW range for mode {self.spec.mode.value}")
        self.lo = float(lo)
        self.hi = float(hi)

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.lo, self.hi)

    def x_value(self, theta: float) -> float:
        return bew_x_of_t(self.spec, theta)

    def __call__(self, theta: float) -> D7Params:
        return bew_d7(self.x_value(theta))

    def derivative(self, theta: float) -> D7Params:
        rate = bew_dx_dt(self.spec, theta)
        return D7Params(mxx=-rate, myy=-rate, mzz=-rate)

    def __repr__(self):
        return f"BewModel(mode={self.spec.mode.value}, gamma={self.spec.gamma}, domain={self.domain})"


class TabulatedModel:
    """Interpolated D-7 family; exact at the knots, no analytic derivative."""

    def __init__(self, frame: pd.DataFrame, interpolation: Union[str, Interpolation] = Interpolation.LINEAR):
        self.interpolation = Interpolation(interpolation)
        self.theta = frame["theta"].to_numpy(dtype=float)
        self.values = frame[list(D7Params.FIELDS)].to_numpy(dtype=float)
        if self.interpolation is Interpolation.CUBIC_MONOTONE:
            self._pchip = PchipInterpolator(self.theta, self.values, axis=0, extrapolate=False)

    @property
    def domain(self) -> Tuple[float, float]:
        return (float(self.theta[0]), float(self.theta[-1]))

    def __call__(self, theta: float) -> D7Params:
        lo, hi = self.domain
        if not lo <= theta <= hi:
            raise DomainError(f"theta={theta} outside table range [{lo}, {hi}]")
        knot = np.searchsorted(self.theta, theta)
        if knot < len(self.theta) and self.theta[knot] == theta:
            return D7Params.from_sequence(self.values[knot])
        if self.interpolation is Interpolation.CUBIC_MONOTONE:
            return D7Params.from_sequence(self._pchip(theta))
        return D7Params.from_sequence(
            np.interp(theta, self.theta, self.values[:, k]) for k in range(self.values.shape[1])
        )

    def derivative(self, theta: float) -> None:
        return None

    def __repr__(self):
        return f"TabulatedModel(rows={len(self.theta)}, interpolation={self.interpolation.value})"


def load_tabulated(
    rows: Union[pd.DataFrame, Sequence[Sequence[float]]],
    interpolation: Union[str, Interpolation] = Interpolation.LINEAR,
) -> TabulatedModel:
    """Validate knot rows (theta + seven D-7 parameters) and wrap them as a model."""
    schema = TabulatedModelSchema()
    if isinstance(rows, pd.DataFrame):
        frame = rows
    else:
        try:
            frame = pd.DataFrame(list(rows), columns=schema.required_columns, dtype=float)
        except (ValueError, TypeError) as e:
            raise MalformedTable(f"rows must hold 8 numbers each: {e}") from e
    ok, errors = schema.validate(frame)
    if not ok:
        raise MalformedTable("; ".join(errors))
    try:
        interpolation = Interpolation(interpolation)
    except ValueError:
        raise MalformedTable(f"unknown interpolation '{interpolation}'") from None
    logger.info(f"Loaded tabulated model with {len(frame)} knots ({interpolation.value})")
    return TabulatedModel(frame.reset_index(drop=True), interpolation)


def read_tabulated_csv(path: Union[str, Path], interpolation: Union[str, Interpolation] = Interpolation.LINEAR) -> TabulatedModel:
    try:
        frame = pd.read_csv(path, encoding="utf-8")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise MalformedTable(f"failed to read table {path}: {e}") from e
    return load_tabulated(frame, interpolation)
