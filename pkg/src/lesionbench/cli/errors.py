"""
Turns lesionbench failures into click exits: one line on stderr, code 1
"""
import functools
import logging

import click

from ..errors import LesionBenchError
from ..reports import Report

logger = logging.getLogger(__name__)


class ReportErrors(click.ClickException):
    """A report was written but carries per-image errors"""

    exit_code = 1

    def __init__(self, report: Report):
        super().__init__(f"{len(report.errors)} image(s) failed; see report errors")
        self.report = report


def handle_errors(fn):
    """
    Wrap a subcommand so that expected failures exit 1 with a message
    instead of a traceback. Reports with errors also exit 1.
    """

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            result = fn(*args, **kwargs)
        except LesionBenchError as err:
            logger.debug("subcommand failed", exc_info=True)
            raise click.ClickException(str(err))
        except OSError as err:
            raise click.ClickException(f"{err.filename or ''}: {err.strerror or err}".lstrip(": "))
        if isinstance(result, Report) and not result.ok:
            raise ReportErrors(result)
        return result

    return wrapper
