"""
Central configuration management for qcmm.
"""

import os
from pathlib import Path
from typing import Dict, Any

import yaml
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Central configuration manager."""

    VERSION = "1.0.0"

    # Project paths
    PROJECT_ROOT = Path(__file__).parent.parent
    DATA_DIR = PROJECT_ROOT / "data"
    LOGS_DIR = PROJECT_ROOT / "logs"
    CONFIGS_DIR = PROJECT_ROOT / "configs"

    LOGGING_CONFIG = Path(
        os.getenv("QCMM_LOGGING_CONFIG", str(CONFIGS_DIR / "logging_config.yaml"))
    )
    PRESETS_CONFIG = CONFIGS_DIR / "figure_presets.yaml"

    # Tolerances
    DEFAULT_TOL = 1e-9          # invariant checks, PHC band, region band
    ROUNDTRIP_TOL = 1e-12       # algebraic roundtrips
    EIG_RESIDUAL_TOL = 1e-10    # max ||A v - lambda v|| of a numeric eigenpair

    # Finite differences: h = STEP_SCALE * max(1, |theta|)
    STEP_SCALE = 1e-5
    EPS_DEN = 1e-12             # stationary pseudo-time threshold

    # Models and sweeps
    DEFAULT_GAMMA = 1.0
    DEFAULT_GRID_N = 101
    DEFAULT_COARSE_N = 256
    DEFAULT_BISECT_TOL = 1e-9
    DEFAULT_WORKERS = int(os.getenv("QCMM_WORKERS", "4"))

    # Logger names, one per concern
    LOGGER_NAMES = (
        "QCMMState",
        "QCMMSpectra",
        "QCMMGeometry",
        "QCMMKinematics",
        "QCMMTrajectory",
        "QCMMModels",
        "QCMMAnalysis",
        "QCMMCli",
    )

    @classmethod
    def load_config(cls, config_path: str) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")

        with open(path, "r") as f:
            return yaml.safe_load(f)

    @classmethod
    def load_presets(cls) -> Dict[str, Any]:
        """Load the figure presets keyed by preset name."""
        return cls.load_config(str(cls.PRESETS_CONFIG))["presets"]

    @classmethod
    def default_step(cls, theta: float) -> float:
        """Finite-difference step for a parameter value."""
        return cls.STEP_SCALE * max(1.0, abs(theta))

    @classmethod
    def ensure_directories(cls):
        """Ensure log directories exist."""
        cls.LOGS_DIR.mkdir(parents=True, exist_ok=True)
