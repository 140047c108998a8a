"""
Trajectory sweeps and sudden-death / revival detection.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect
from tqdm import tqdm

from qcmm.config import Config
from qcmm.core.cmm_geometry import (
    CmmCoords,
    QuadDistances,
    RegionLabel,
    coords_from_d7,
    display_root,
    invariance_residual,
    lightcone_reference,
    quad_distances,
    region_of,
)
from qcmm.core.kinematics import KinematicSample, ParametricD7Model, sample_kinematics
from qcmm.core.state_core import D7Params, d7_matrix, min_eigenvalue
from qcmm.errors import DomainError
from qcmm.schemas import SpeedsSchema, TrajectorySchema


class CrossingKind(str, Enum):
    SUDDEN_DEATH = "SuddenDeath"    # entangled -> separable as theta grows
    REVIVAL = "Revival"             # separable -> entangled as theta grows


@dataclass(frozen=True)
class TrajectoryPoint:
    theta: float
    x_value: float
    d7: D7Params
    coords: CmmCoords
    quad: QuadDistances
    region: RegionLabel
    kinematics: KinematicSample
    validity: float     # min eigenvalue of the composed matrix

    @property
    def residual(self) -> float:
        return invariance_residual(self.quad)

    def is_valid(self, tol: float = Config.DEFAULT_TOL) -> bool:
        return self.validity >= -tol


@dataclass(frozen=True)
class CrossingEvent:
    theta_star: float
    kind: CrossingKind
    driver: str
    refinement_width: float
    resolution_limited: bool = False

    def to_dict(self) -> dict:
        return {
            "theta_star": self.theta_star,
            "kind": self.kind.value,
            "driver": self.driver,
            "refinement_width": self.refinement_width,
            "resolution_limited": self.resolution_limited,
        }


class TrajectoryTracer:
    """Evaluate a D-7 family point by point and locate region crossings."""

    def __init__(
        self,
        model: ParametricD7Model,
        tol: float = Config.DEFAULT_TOL,
        step: Optional[float] = None,
        eps_den: float = Config.EPS_DEN,
        workers: int = Config.DEFAULT_WORKERS,
        show_progress: bool = False,
    ):
        """
        Initialize trajectory tracer.

        Args:
            model: Parametric D-7 family (must be safe to call from threads)
            tol: Region / validity tolerance
            step: Finite-difference step; None picks Config.default_step(theta)
            eps_den: Threshold below which a pseudo-time rate counts as stationary
            workers: Thread count for per-point evaluation (1 = sequential)
            show_progress: Show a tqdm bar on stderr
        """
        self.model = model
        self.tol = tol
        self.step = step
        self.eps_den = eps_den
        self.workers = max(1, int(workers))
        self.show_progress = show_progress

        self.logger = logging.getLogger("QCMMTrajectory")

    def _check_inside(self, thetas: Sequence[float]):
        lo, hi = self.model.domain
        outside = [t for t in thetas if not lo <= t <= hi]
        if outside:
            raise DomainError(f"{len(outside)} theta value(s) outside model domain [{lo}, {hi}], e.g. {outside[0]}")

    def evaluate_point(self, theta: float) -> TrajectoryPoint:
        d = self.model(theta)
        coords = coords_from_d7(d)
        quad = quad_distances(coords)
        validity = min_eigenvalue(d7_matrix(d))
        if validity < -self.tol:
            self.logger.warning(f"theta={theta}: composed matrix not PSD (min eigenvalue {validity:.3e})")
        x_of = getattr(self.model, "x_value", None)
        return TrajectoryPoint(
            theta=float(theta),
            x_value=float(x_of(theta)) if x_of is not None else math.nan,
            d7=d,
            coords=coords,
            quad=quad,
            region=region_of(quad, self.tol),
            kinematics=sample_kinematics(self.model, theta, self.step, self.eps_den),
            validity=validity,
        )

    def trace(self, grid: Sequence[float]) -> List[TrajectoryPoint]:
        """One point per grid value, in grid order, independent of worker count."""
        grid = [float(t) for t in grid]
        if len(grid) < 2:
            raise DomainError(f"grid needs at least 2 points, got {len(grid)}")
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise DomainError("grid must be sorted ascending")
        self._check_inside(grid)

        self.logger.info(f"Tracing {len(grid)} points on [{grid[0]}, {grid[-1]}] with {self.workers} worker(s)")
        if self.workers == 1:
            points = [self.evaluate_point(t) for t in tqdm(grid, desc="trajectory", disable=not self.show_progress)]
        else:
            # Executor.map yields results in submission order
            with ThreadPoolExecutor(max_workers=self.workers) as ex:
                points = list(
                    tqdm(
                        ex.map(self.evaluate_point, grid),
                        total=len(grid),
                        desc="trajectory",
                        disable=not self.show_progress,
                    )
                )

        invalid = sum(1 for p in points if not p.is_valid(self.tol))
        if invalid:
            self.logger.warning(f"{invalid} of {len(points)} points are outside the state set")
        return points

    def _quad_at(self, theta: float) -> QuadDistances:
        return quad_distances(coords_from_d7(self.model(theta)))

    def indicator(self, theta: float) -> float:
        """min(s1t^2, s2t^2): negative inside the entangled-like region."""
        q = self._quad_at(theta)
        return min(q.s1t_sq, q.s2t_sq)

    def _refine(self, a: float, b: float, sign_a: float, tol: float, limited: bool) -> CrossingEvent:
        theta_star = float(bisect(self.indicator, a, b, xtol=tol / 2))
        qa, qb = self._quad_at(a), self._quad_at(b)
        changed = [name for name in ("s1t_sq", "s2t_sq")
                   if (getattr(qa, name) < 0) != (getattr(qb, name) < 0)]
        if changed:
            driver = changed[0]
        else:
            driver = region_of(self._quad_at(theta_star), self.tol).driver
        kind = CrossingKind.SUDDEN_DEATH if sign_a < 0 else CrossingKind.REVIVAL
        self.logger.info(f"{kind.value} at theta={theta_star:.12g} (driver {driver})")
        return CrossingEvent(theta_star, kind, driver, tol, limited)

    def find_crossings(
        self,
        theta_lo: float,
        theta_hi: float,
        coarse_n: int = Config.DEFAULT_COARSE_N,
        tol: float = Config.DEFAULT_BISECT_TOL,
    ) -> List[CrossingEvent]:
        """Scan the negativity indicator on a coarse grid and bisect each sign change.

        Each coarse cell is also probed at its midpoint; a sign flip there with
        matching endpoint signs means two crossings share the cell, and both
        halves are refined and flagged resolution-limited.
        """
        if not theta_lo < theta_hi:
            raise DomainError(f"need theta_lo < theta_hi, got [{theta_lo}, {theta_hi}]")
        if coarse_n < 2:
            raise DomainError(f"coarse_n must be >= 2, got {coarse_n}")
        if not tol > 0:
            raise DomainError(f"bisection tolerance must be positive, got {tol}")
        self._check_inside([theta_lo, theta_hi])

        grid = np.linspace(theta_lo, theta_hi, coarse_n)
        signs = _node_signs([self.indicator(t) for t in grid])
        if signs is None:
            self.logger.warning(f"indicator vanishes on every node of [{theta_lo}, {theta_hi}]")
            return []

        events = []
        for a, b, sa, sb in zip(grid, grid[1:], signs, signs[1:]):
            if sa != sb:
                events.append(self._refine(a, b, sa, tol, limited=False))
                continue
            mid = 0.5 * (a + b)
            fm = self.indicator(mid)
            if fm != 0 and np.sign(fm) != sa:
                self.logger.warning(
                    f"two crossings inside coarse cell [{a:.6g}, {b:.6g}]; increase coarse_n"
                )
                events.append(self._refine(a, mid, sa, tol, limited=True))
                events.append(self._refine(mid, b, -sa, tol, limited=True))

        events.sort(key=lambda e: e.theta_star)
        return events


def _node_signs(values: Sequence[float]) -> Optional[List[float]]:
    """Signs of the indicator on the coarse nodes, with zeros resolved.

    A run of zero nodes takes the sign that follows it, so a sign change across
    the run puts the crossing at its first node, while a touch (same sign on
    both sides) produces no crossing. A trailing run takes the preceding sign.
    Returns None when every node is zero.
    """
    signs = [float(np.sign(v)) for v in values]
    following = 0.0
    for i in range(len(signs) - 1, -1, -1):
        if signs[i] == 0:
            signs[i] = following
        else:
            following = signs[i]
    if following == 0:
        return None
    preceding = following
    for i, s in enumerate(signs):
        if s == 0:
            signs[i] = preceding
        else:
            preceding = s
    return signs


def trace_trajectory(model: ParametricD7Model, grid: Sequence[float], **kwargs) -> List[TrajectoryPoint]:
    return TrajectoryTracer(model, **kwargs).trace(grid)


def find_crossings(
    model: ParametricD7Model,
    theta_lo: float,
    theta_hi: float,
    coarse_n: int = Config.DEFAULT_COARSE_N,
    tol: float = Config.DEFAULT_BISECT_TOL,
    **kwargs,
) -> List[CrossingEvent]:
    return TrajectoryTracer(model, **kwargs).find_crossings(theta_lo, theta_hi, coarse_n, tol)


def linear_grid(lo: float, hi: float, n: int) -> Tuple[float, ...]:
    """Evenly spaced grid including both endpoints."""
    if n < 2:
        raise DomainError(f"grid needs at least 2 points, got {n}")
    return tuple(float(t) for t in np.linspace(lo, hi, n))


def trajectory_frame(points: Sequence[TrajectoryPoint]) -> pd.DataFrame:
    """Trajectory table in TrajectorySchema column order."""
    rows = []
    for p in points:
        row = {"theta": p.theta, "x": p.x_value}
        row.update(p.coords.to_dict())
        row.update(p.quad.to_dict())
        row["region"] = p.region.label.code
        row.update(p.kinematics.speeds())
        row["min_eig"] = p.validity
        rows.append(row)
    return pd.DataFrame(rows, columns=TrajectorySchema.required_columns)


def speeds_frame(points: Sequence[TrajectoryPoint]) -> pd.DataFrame:
    """Speeds table in SpeedsSchema column order."""
    rows = []
    for p in points:
        row = {"theta": p.theta, "t_minus": p.coords.t_minus, "t_plus": p.coords.t_plus}
        row.update(p.kinematics.speeds())
        rows.append(row)
    return pd.DataFrame(rows, columns=SpeedsSchema.required_columns)


def with_display_columns(frame: pd.DataFrame) -> pd.DataFrame:
    """Add display roots s1, s2, s1t, s2t and the light-cone reference columns."""
    frame = frame.copy()
    for name in ("s1", "s2", "s1t", "s2t"):
        frame[name] = [display_root(v) for v in frame[f"{name}_sq"]]
    cone = [lightcone_reference(x) if math.isfinite(x) else (math.nan,) * 4 for x in frame["x"]]
    for k, name in enumerate(("cone_t", "cone_u", "cone_v", "cone_w")):
        frame[name] = [c[k] for c in cone]
    return frame
