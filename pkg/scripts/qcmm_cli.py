#!/usr/bin/env python3
"""
CLI script for QCMM: validate, analyze, trajectory, speeds, crossings.

Examples:
    python scripts/qcmm_cli.py analyze --model bew --x 0.9
    python scripts/qcmm_cli.py trajectory --emit fig7 --out data/outputs/fig7.csv
    python scripts/qcmm_cli.py crossings --model bew --mode decay --gamma 1 --lo 0 --hi 10
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qcmm.cli import main


if __name__ == "__main__":
    sys.exit(main())
