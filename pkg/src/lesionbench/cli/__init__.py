"""
Command-line surface: flags in `commands`, workflows in `tasks`
"""
from .runconfig import RunConfig, DEFAULT_SPLIT_COUNTS
from .commands import COMMANDS

__all__ = ["RunConfig", "DEFAULT_SPLIT_COUNTS", "COMMANDS"]
