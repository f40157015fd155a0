import logging
import sys

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
ROOT_LOGGER = "lesionbench"


def setup_logger(level: int | str = logging.INFO) -> logging.Logger:
    """
    Configure the package logger with a single stderr handler.

    Calling it again changes the level and rebinds the handler to the current
    stderr; handlers are never duplicated.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {level}")
    logger.setLevel(level)
    if not any(getattr(h, "_lesionbench", False) for h in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._lesionbench = True
        logger.addHandler(handler)
    for handler in logger.handlers:
        if getattr(handler, "_lesionbench", False):
            handler.setStream(sys.stderr)
            handler.setLevel(level)
    return logger


class WarningCollector(logging.Handler):
    """
    Collects WARNING records emitted while a subcommand runs so they can be
    copied into the report's `warnings` list.
    """

    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages: list[str] = []

    def emit(self, record: logging.LogRecord) -> None:
        if record.levelno == logging.WARNING:
            self.messages.append(record.getMessage())

    def __enter__(self):
        logging.getLogger(ROOT_LOGGER).addHandler(self)
        return self

    def __exit__(self, *exc):
        logging.getLogger(ROOT_LOGGER).removeHandler(self)
        return False
