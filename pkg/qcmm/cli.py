"""
Command-line front end: validate, analyze, trajectory, speeds, crossings.

Exit codes: 0 success, 1 usage / parse / configuration error, 2 validation
failure.
"""

import argparse
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional

from qcmm.config import Config
from qcmm.core.analysis import build_report
from qcmm.core.models import BewMode, BewModel, BewSpec, Interpolation, bew_d7, read_tabulated_csv
from qcmm.core.state_core import d7_matrix, validate_density
from qcmm.core.trajectory import (
    TrajectoryTracer,
    linear_grid,
    speeds_frame,
    trajectory_frame,
    with_display_columns,
)
from qcmm.errors import ConfigError, QcmmError, StateParseError
from qcmm.utils.config_loader import fill_vars, stamp
from qcmm.utils.io_utils import dumps_json, frame_to_csv, frame_to_json, write_text
from qcmm.utils.log_utils import get_logger, setup_logging
from qcmm.utils.state_io import ParsedState, read_state

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2

PRESET_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "cone")


class QcmmArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1.

    Prefix matching is off: subcommand flags such as --lo would otherwise be
    claimed as ambiguous abbreviations of the top-level --log-* options.
    """

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    model: Optional[str] = None
    x: Optional[float] = None
    mode: str = BewMode.PARAMETER_X.value
    gamma: float = Config.DEFAULT_GAMMA
    interpolation: str = Interpolation.LINEAR.value
    lo: Optional[float] = None
    hi: Optional[float] = None
    n: int = Config.DEFAULT_GRID_N
    tol: float = Config.DEFAULT_TOL
    step: Optional[float] = None
    coarse_n: int = Config.DEFAULT_COARSE_N
    bisect_tol: float = Config.DEFAULT_BISECT_TOL
    fmt: str = "text"
    out: Optional[str] = None
    emit: Optional[str] = None
    columns: Optional[List[str]] = None
    workers: int = Config.DEFAULT_WORKERS
    progress: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Merge flags over preset values over defaults, then validate."""
        cfg = cls(command=args.command)
        for name in ("input_path", "model", "x", "tol", "out", "workers", "progress"):
            if getattr(args, name, None) is not None:
                setattr(cfg, name, getattr(args, name))

        if args.command in ("validate", "analyze"):
            cfg.fmt = args.format or "text"
        elif args.command == "crossings":
            cfg.fmt = "json"
        else:
            cfg.fmt = args.format or "csv"

        if args.command in ("trajectory", "speeds", "crossings"):
            emit = getattr(args, "emit", None)
            if emit:
                if args.input_path:
                    raise ConfigError("--emit presets use the built-in BEW model; drop --input")
                presets = Config.load_presets()
                if emit not in presets or "columns" not in presets[emit]:
                    raise ConfigError(f"preset {emit!r} missing or without columns in {Config.PRESETS_CONFIG}")
                preset = presets[emit]
                cfg.emit = emit
                cfg.model = "bew"
                cfg.columns = list(preset["columns"])
                for key in ("mode", "gamma", "lo", "hi", "n"):
                    if key in preset:
                        setattr(cfg, key, preset[key])
            for key in ("mode", "gamma", "interpolation", "lo", "hi", "n", "step", "coarse_n", "bisect_tol"):
                value = getattr(args, key, None)
                if value is not None:
                    setattr(cfg, key, value)
            if cfg.input_path is None and cfg.model is None:
                cfg.model = "bew"
            if cfg.input_path is None:
                if cfg.lo is None:
                    cfg.lo = 0.0
                if cfg.hi is None:
                    cfg.hi = 1.0 if cfg.mode == BewMode.PARAMETER_X.value else 5.0 / cfg.gamma

        cfg.check()
        return cfg

    def check(self):
        if not self.tol > 0:
            raise ConfigError(f"--tol must be positive, got {self.tol}")
        if self.input_path and self.model:
            raise ConfigError("give either --input or --model, not both")
        if self.command in ("validate", "analyze"):
            if not self.input_path and self.model is None:
                raise ConfigError("a state is required: --input FILE or --model bew --x X")
            if self.model == "bew" and self.x is None:
                raise ConfigError("--model bew needs --x")
            return
        if self.n < 2:
            raise ConfigError(f"--n must be >= 2, got {self.n}")
        if self.lo is not None and self.hi is not None and not self.lo < self.hi:
            raise ConfigError(f"need --lo < --hi, got [{self.lo}, {self.hi}]")
        if not self.gamma > 0:
            raise ConfigError(f"--gamma must be positive, got {self.gamma}")
        if self.coarse_n < 2:
            raise ConfigError(f"--coarse-n must be >= 2, got {self.coarse_n}")
        if not self.bisect_tol > 0:
            raise ConfigError(f"--bisect-tol must be positive, got {self.bisect_tol}")
        if self.step is not None and not self.step > 0:
            raise ConfigError(f"--step must be positive, got {self.step}")

    def meta(self) -> dict:
        meta = {
            "version": Config.VERSION,
            "command": self.command,
            "tolerances": {"tol": self.tol, "bisect_tol": self.bisect_tol, "eps_den": Config.EPS_DEN},
            "grid": {"lo": self.lo, "hi": self.hi, "n": self.n},
        }
        if self.input_path:
            meta["model"] = {"table": self.input_path, "interpolation": self.interpolation}
        else:
            meta["model"] = {"name": "bew", "mode": self.mode, "gamma": self.gamma}
        if self.emit:
            meta["preset"] = self.emit
        return meta


def build_parser() -> QcmmArgumentParser:
    parser = QcmmArgumentParser(
        prog="qcmm",
        description="Two-qubit entanglement in the compact Minkowski manifold picture",
    )
    parser.add_argument("--log-file", default=None, help="Job log file; {timestamp} is filled in")
    parser.add_argument("--log-level", default=None, help="Console log level (default from logging config)")

    common = QcmmArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help=f"Invariant/region tolerance (default {Config.DEFAULT_TOL})")
    common.add_argument("--out", default=None, help="Output file (default stdout)")

    state = QcmmArgumentParser(add_help=False)
    state.add_argument("--input", dest="input_path", default=None, help="JSON state file")
    state.add_argument("--model", choices=["bew"], default=None, help="Built-in state family")
    state.add_argument("--x", type=float, default=None, help="BEW weight x in [0, 1]")
    state.add_argument("--format", choices=["text", "json"], default=None)

    family = QcmmArgumentParser(add_help=False)
    family.add_argument("--input", dest="input_path", default=None, help="Tabulated model CSV")
    family.add_argument("--interpolation", choices=[i.value for i in Interpolation], default=None)
    family.add_argument("--model", choices=["bew"], default=None, help="Built-in family")
    family.add_argument("--mode", choices=[m.value for m in BewMode], default=None)
    family.add_argument("--gamma", type=float, default=None, help="Decay rate for decay/growth modes")
    family.add_argument("--lo", type=float, default=None)
    family.add_argument("--hi", type=float, default=None)
    family.add_argument("--workers", type=int, default=None, help="Threads for per-point evaluation")
    family.add_argument("--progress", action="store_true", default=None, help="Progress bar on stderr")

    grid = QcmmArgumentParser(add_help=False)
    grid.add_argument("--n", type=int, default=None, help="Grid points")
    grid.add_argument("--step", type=float, default=None, help="Finite-difference step")
    grid.add_argument("--format", choices=["csv", "json"], default=None)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common, state], help="Check density-matrix invariants")
    sub.add_parser("analyze", parents=[common, state], help="Fano form, spectra, PHC verdict, CMM picture")
    traj = sub.add_parser("trajectory", parents=[common, family, grid], help="Sweep a family along a grid")
    traj.add_argument("--emit", choices=PRESET_NAMES, default=None, help="Figure-data preset")
    sub.add_parser("speeds", parents=[common, family, grid], help="Speeds and squared quadrispeeds along a grid")
    cross = sub.add_parser("crossings", parents=[common, family], help="Sudden-death / revival events")
    cross.add_argument("--coarse-n", dest="coarse_n", type=int, default=None)
    cross.add_argument("--bisect-tol", dest="bisect_tol", type=float, default=None)
    return parser


def load_state(cfg: RunConfig) -> ParsedState:
    if cfg.input_path:
        return read_state(cfg.input_path)
    d7 = bew_d7(cfg.x)
    return ParsedState("d7", d7_matrix(d7), fano=d7.to_fano(), d7=d7)


def build_model(cfg: RunConfig):
    """Table or BEW model; a table without --lo/--hi spans its own knots."""
    if cfg.input_path:
        model = read_tabulated_csv(cfg.input_path, cfg.interpolation)
        lo, hi = model.domain
        cfg.lo = lo if cfg.lo is None else cfg.lo
        cfg.hi = hi if cfg.hi is None else cfg.hi
        return model
    return BewModel(BewSpec(BewMode(cfg.mode), cfg.gamma), lo=cfg.lo, hi=cfg.hi)


def cmd_validate(cfg: RunConfig) -> int:
    parsed = load_state(cfg)
    report = validate_density(parsed.matrix, cfg.tol)
    payload = {"input_kind": parsed.kind, **report.to_dict()}
    if parsed.fano is not None:
        payload["bound_violations"] = parsed.fano.bound_violations(cfg.tol)
    if cfg.fmt == "json":
        write_text(dumps_json(payload), cfg.out)
    else:
        text = "\n".join(f"{k}: {v!r}" for k, v in payload.items()) + "\n"
        write_text(text, cfg.out)
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_analyze(cfg: RunConfig) -> int:
    logger = get_logger("QCMMCli")
    parsed = load_state(cfg)
    validation = validate_density(parsed.matrix, cfg.tol)
    if not validation.passed:
        logger.error(f"input is not a valid state: failed {validation.failures()}")
        write_text(dumps_json({"valid": False, **validation.to_dict()}), cfg.out)
        return EXIT_INVALID
    report = build_report(parsed.matrix, cfg.tol)
    if cfg.fmt == "json":
        write_text(dumps_json(report.to_dict()), cfg.out)
    else:
        write_text(report.to_text() + "\n", cfg.out)
    return EXIT_OK


def _trace(cfg: RunConfig):
    model = build_model(cfg)
    tracer = TrajectoryTracer(model, tol=cfg.tol, step=cfg.step, workers=cfg.workers, show_progress=cfg.progress)
    return tracer.trace(linear_grid(cfg.lo, cfg.hi, cfg.n))


def _emit_frame(cfg: RunConfig, frame) -> int:
    if cfg.fmt == "json":
        write_text(frame_to_json(frame, cfg.meta()), cfg.out)
    else:
        write_text(frame_to_csv(frame), cfg.out)
    return EXIT_OK


def cmd_trajectory(cfg: RunConfig) -> int:
    frame = trajectory_frame(_trace(cfg))
    if cfg.columns:
        frame = with_display_columns(frame)[cfg.columns]
    return _emit_frame(cfg, frame)


def cmd_speeds(cfg: RunConfig) -> int:
    return _emit_frame(cfg, speeds_frame(_trace(cfg)))


def cmd_crossings(cfg: RunConfig) -> int:
    model = build_model(cfg)
    tracer = TrajectoryTracer(model, tol=cfg.tol, workers=1)
    events = tracer.find_crossings(cfg.lo, cfg.hi, cfg.coarse_n, cfg.bisect_tol)
    for event in events:
        get_logger("QCMMCli").info(
            f"{event.kind.value} at {event.theta_star!r} via {event.driver} (width {event.refinement_width})"
        )
    meta = cfg.meta()
    meta["coarse_n"] = cfg.coarse_n
    write_text(dumps_json({"meta": meta, "events": [e.to_dict() for e in events]}), cfg.out)
    return EXIT_OK


HANDLERS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "trajectory": cmd_trajectory,
    "speeds": cmd_speeds,
    "crossings": cmd_crossings,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    log_file = None
    if args.log_file:
        log_file = Path(fill_vars(args.log_file, timestamp=stamp()))
        if log_file.parent == Path("."):
            # bare file names go to the project log directory
            Config.ensure_directories()
            log_file = Config.LOGS_DIR / log_file
    setup_logging(str(Config.LOGGING_CONFIG), job_log_file=str(log_file) if log_file else None, level=args.log_level)
    logger = get_logger("QCMMCli")

    try:
        cfg = RunConfig.from_args(args)
        logger.info(f"Running {cfg.command} with {asdict(cfg)}")
        return HANDLERS[cfg.command](cfg)
    except StateParseError as e:
        logger.error(f"cannot parse state: {e}")
        print(f"qcmm: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (QcmmError, FileNotFoundError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"qcmm: error: {e}", file=sys.stderr)
        return EXIT_USAGE
