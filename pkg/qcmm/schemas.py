"""
CSV schema definitions and validation for qcmm tables.
"""

import math
from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd


class BaseSchema(ABC):
    """Base class for CSV schemas."""

    required_columns: List[str] = []
    optional_columns: List[str] = []

    @abstractmethod
    def validate_row(self, row: pd.Series) -> Tuple[bool, Optional[str]]:
        """Validate a single row. Returns (is_valid, error_message)."""
        pass

    def validate_frame(self, df: pd.DataFrame) -> List[str]:
        """Whole-table checks that do not fit a single row."""
        return []

    def validate(self, df: pd.DataFrame) -> Tuple[bool, List[str]]:
        """Validate entire DataFrame."""
        errors = []

        # Check required columns
        missing_cols = [c for c in self.required_columns if c not in df.columns]
        if missing_cols:
            errors.append(f"Missing required columns: {missing_cols}")
            return False, errors

        # Validate each row
        for idx, row in df.iterrows():
            is_valid, error = self.validate_row(row)
            if not is_valid:
                errors.append(f"Row {idx}: {error}")

        errors.extend(self.validate_frame(df))
        return len(errors) == 0, errors

    @property
    def all_columns(self) -> List[str]:
        """Get all columns (required + optional)."""
        return self.required_columns + self.optional_columns


class TabulatedModelSchema(BaseSchema):
    """Schema for user-supplied D-7 family tables."""

    required_columns = ["theta", "p1z", "p2z", "mxx", "myy", "mxy", "myx", "mzz"]
    optional_columns = []

    def validate_row(self, row: pd.Series) -> Tuple[bool, Optional[str]]:
        for col in self.required_columns:
            try:
                value = float(row[col])
            except (TypeError, ValueError):
                return False, f"{col} is not a number: {row[col]!r}"
            if not math.isfinite(value):
                return False, f"{col} must be finite, got {value}"
            if col != "theta" and not -1.0 <= value <= 1.0:
                return False, f"{col} must lie in [-1, 1], got {value}"
        return True, None

    def validate_frame(self, df: pd.DataFrame) -> List[str]:
        errors = []
        if len(df) < 2:
            errors.append(f"at least 2 rows required, got {len(df)}")
        theta = pd.to_numeric(df["theta"], errors="coerce").to_numpy(dtype=float)
        if len(theta) >= 2 and not np.all(np.diff(theta) > 0):
            errors.append("theta must be strictly increasing")
        return errors


class TrajectorySchema(BaseSchema):
    """Column order of trajectory output."""

    required_columns = [
        "theta", "x",
        "t_minus", "u_minus", "v_plus", "w_minus",
        "t_plus", "u_plus", "v_minus", "w_plus",
        "s1_sq", "s2_sq", "s1t_sq", "s2t_sq",
        "region",
        "speed1", "speed2", "speed1t", "speed2t",
        "qspeed1_sq", "qspeed2_sq", "qspeed1t_sq", "qspeed2t_sq",
        "min_eig",
    ]
    optional_columns = ["s1", "s2", "s1t", "s2t", "cone_t", "cone_u", "cone_v", "cone_w"]

    def validate_row(self, row: pd.Series) -> Tuple[bool, Optional[str]]:
        if row["region"] not in ("S", "E", "L"):
            return False, f"region must be S, E or L, got {row['region']!r}"
        residual = abs(row["s1_sq"] + row["s2_sq"] - row["s1t_sq"] - row["s2t_sq"])
        if residual > 1e-12:
            return False, f"quadridistance sums disagree by {residual:.3e}"
        return True, None


class SpeedsSchema(BaseSchema):
    """Column order of speeds output."""

    required_columns = [
        "theta", "t_minus", "t_plus",
        "speed1", "speed2", "speed1t", "speed2t",
        "qspeed1_sq", "qspeed2_sq", "qspeed1t_sq", "qspeed2t_sq",
    ]
    optional_columns = []

    def validate_row(self, row: pd.Series) -> Tuple[bool, Optional[str]]:
        for suffix in ("1", "2", "1t", "2t"):
            spd = row[f"speed{suffix}"]
            if math.isinf(spd):
                continue
            if spd < 0:
                return False, f"speed{suffix} must be non-negative"
            if abs(row[f"qspeed{suffix}_sq"] - (1.0 - spd ** 2)) > 1e-12 * max(1.0, spd ** 2):
                return False, f"qspeed{suffix}_sq does not equal 1 - speed{suffix}^2"
        return True, None


# Validation functions
def validate_csv(csv_path: str, schema: BaseSchema) -> Tuple[bool, List[str]]:
    """Validate a CSV file against a schema."""
    try:
        df = pd.read_csv(csv_path, encoding="utf-8")
        return schema.validate(df)
    except Exception as e:
        return False, [f"Failed to read CSV: {str(e)}"]


def validate_tabulated_csv(csv_path: str) -> Tuple[bool, List[str]]:
    """Validate a tabulated-model CSV"""
    return validate_csv(csv_path, TabulatedModelSchema())


def validate_trajectory_csv(csv_path: str) -> Tuple[bool, List[str]]:
    """Validate a trajectory CSV"""
    return validate_csv(csv_path, TrajectorySchema())


def validate_speeds_csv(csv_path: str) -> Tuple[bool, List[str]]:
    """Validate a speeds CSV"""
    return validate_csv(csv_path, SpeedsSchema())
