import logging

import click

from config import Config
from .logs import setup_logger

logger = logging.getLogger(__name__)


def create_cli() -> click.Group:
    @click.group()
    @click.version_option(Config.VERSION, prog_name="lesionbench")
    @click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level")
    def cli(verbose: bool):
        """ISIC-2018 lesion analysis scoring, augmentation and diagnosis"""
        setup_logger("DEBUG" if verbose else Config.LOG_LEVEL)

    from .cli import COMMANDS

    for command in COMMANDS:
        cli.add_command(command)

    return cli
