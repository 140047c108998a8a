import logging, logging.config, pathlib, yaml

from qcmm.config import Config


def setup_logging(cfg_path: str, job_log_file: str | None = None, level: str | None = None):
    with open(cfg_path, "r") as f:
        cfg = yaml.safe_load(f)

    # ensure directories exist
    for handler in cfg.get("handlers", {}).values():
        if "filename" in handler:
            pathlib.Path(handler["filename"]).parent.mkdir(parents=True, exist_ok=True)

    # if a job-specific log file is provided, clone a file handler onto every qcmm logger
    if job_log_file:
        job_dir = pathlib.Path(job_log_file).parent
        job_dir.mkdir(parents=True, exist_ok=True)
        cfg["handlers"]["job_file"] = {
            "class": "logging.FileHandler",
            "level": "DEBUG",
            "formatter": "std",
            "filename": str(job_log_file),
        }
        for name in Config.LOGGER_NAMES:
            if name in cfg.get("loggers", {}):
                cfg["loggers"][name]["handlers"].append("job_file")

    # console verbosity override, e.g. from --log-level
    if level:
        for name in Config.LOGGER_NAMES:
            if name in cfg.get("loggers", {}):
                cfg["loggers"][name]["level"] = level.upper()
        if "console" in cfg.get("handlers", {}):
            cfg["handlers"]["console"]["level"] = level.upper()

    logging.config.dictConfig(cfg)

def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
