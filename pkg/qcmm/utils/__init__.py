"""Utility modules for QCMM."""

from qcmm.utils.config_loader import stamp, fill_vars
from qcmm.utils.io_utils import ensure_dir, dumps_json, frame_to_csv, frame_to_json, write_text
from qcmm.utils.log_utils import setup_logging, get_logger
from qcmm.utils.state_io import ParsedState, parse_state, read_state

__all__ = [
    "stamp",
    "fill_vars",
    "ensure_dir",
    "dumps_json",
    "frame_to_csv",
    "frame_to_json",
    "write_text",
    "setup_logging",
    "get_logger",
    "ParsedState",
    "parse_state",
    "read_state",
]
