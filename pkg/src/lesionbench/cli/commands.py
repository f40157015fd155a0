"""
click subcommands. Each one builds a RunConfig from its flags and hands it
to the matching workflow in `tasks`.
"""
import json
from pathlib import Path

import click

from config import Config
from ..errors import ConfigError
from ..reports import Report
from . import tasks
from .errors import handle_errors
from .runconfig import REPORT_FORMATS, RunConfig

DIR = click.Path(path_type=Path, file_okay=False)
ANY_PATH = click.Path(path_type=Path)


def task_option(fn):
    return click.option(
        "--task", type=click.IntRange(1, 3), default=1, show_default=True, help="ISIC task number"
    )(fn)


def out_option(fn):
    return click.option("--out", type=DIR, required=True, help="Output directory")(fn)


def seed_option(fn):
    return click.option("--seed", type=click.IntRange(min=0), default=None, help="PRNG seed")(fn)


def ids_option(fn):
    return click.option(
        "--ids", type=ANY_PATH, default=None, help="Restrict to the ids listed in this file (e.g. test.txt)"
    )(fn)


def strict_option(fn):
    return click.option(
        "--strict/--skip-missing",
        default=True,
        show_default=True,
        help="Fail on missing predictions and undefined class scores, or warn and skip them",
    )(fn)


def format_option(fn):
    return click.option(
        "--format",
        "report_format",
        type=click.Choice(REPORT_FORMATS),
        default="json",
        show_default=True,
        help="csv also writes per-image scores.csv next to report.json",
    )(fn)


def geometry_options(fn):
    fn = click.option(
        "--target-side", type=click.IntRange(min=1), default=Config.TARGET_SIDE, show_default=True,
        help="Side of network-resolution prediction squares",
    )(fn)
    return click.option(
        "--threshold", type=click.IntRange(0, 255), default=Config.MASK_THRESHOLD, show_default=True,
        help="Gray level above which a mask pixel is active",
    )(fn)


def _echo_report(report: Report) -> None:
    click.echo(json.dumps(report.summary(), indent=2, sort_keys=True))


def _run_config(**kwargs) -> RunConfig:
    try:
        return RunConfig(**kwargs)
    except ConfigError as err:
        raise click.UsageError(str(err))


@click.command("split")
@task_option
@click.option("--images", type=DIR, required=True)
@click.option("--truth", type=ANY_PATH, required=True, help="Mask directory (tasks 1-2) or ground-truth CSV (task 3)")
@out_option
@seed_option
@click.option("--train-count", type=click.IntRange(min=0), default=None)
@click.option("--test-count", type=click.IntRange(min=0), default=None)
@click.option("--stratified", is_flag=True, help="Keep label proportions in the test set (task 3)")
@handle_errors
def split_cmd(**kwargs):
    """Deterministic train/test split written as train.txt and test.txt"""
    assignment = tasks.cmd_split(_run_config(**kwargs))
    click.echo(f"train: {len(assignment.train_ids)} test: {len(assignment.test_ids)}")
    return assignment


@click.command("eval-boundary")
@click.option("--truth", type=DIR, required=True, help="Directory of <id>_segmentation.png")
@click.option("--pred", type=DIR, required=True, help="Predictor root holding task1/")
@out_option
@ids_option
@strict_option
@format_option
@geometry_options
@handle_errors
def eval_boundary_cmd(**kwargs):
    """Per-image Jaccard and the task-1 score"""
    report = tasks.cmd_eval_boundary(_run_config(task=1, **kwargs))
    _echo_report(report)
    return report


@click.command("eval-attributes")
@click.option("--truth", type=DIR, required=True, help="Directory of <id>_attribute_<name>.png")
@click.option("--pred", type=DIR, required=True, help="Predictor root holding task2/")
@out_option
@ids_option
@strict_option
@format_option
@geometry_options
@handle_errors
def eval_attributes_cmd(**kwargs):
    """Per-class and overall task-2 scores"""
    report = tasks.cmd_eval_attributes(_run_config(task=2, **kwargs))
    _echo_report(report)
    return report


@click.command("diagnose")
@click.option("--images", type=DIR, required=True)
@click.option("--pred", type=DIR, required=True, help="Predictor root holding task3/ (and task1/)")
@out_option
@ids_option
@click.option("--intersect-boundary/--no-intersect-boundary", default=True, show_default=True)
@click.option("--baseline", is_flag=True, help="Compute boundaries with the Otsu baseline")
@format_option
@geometry_options
@handle_errors
def diagnose_cmd(**kwargs):
    """Area-vote a diagnosis for every image"""
    report = tasks.cmd_diagnose(_run_config(task=3, **kwargs))
    _echo_report(report)
    return report


@click.command("eval-diagnosis")
@click.option("--truth", type=ANY_PATH, required=True, help="Ground-truth CSV")
@click.option("--pred", type=ANY_PATH, default=None, help="Predictions CSV")
@click.option("--votes", type=ANY_PATH, default=None, help="votes.jsonl from diagnose; its labels are scored instead of CSV argmaxes")
@out_option
@ids_option
@strict_option
@format_option
@handle_errors
def eval_diagnosis_cmd(**kwargs):
    """Accuracy, confusion matrix and balanced accuracy for task 3"""
    if kwargs["pred"] is None and kwargs["votes"] is None:
        raise click.UsageError("One of --pred or --votes is required")
    report = tasks.cmd_eval_diagnosis(_run_config(task=3, **kwargs))
    _echo_report(report)
    return report


@click.command("augment")
@click.option("--images", type=DIR, required=True)
@click.option("--truth", type=DIR, default=None, help="Mask directory; masks follow their image")
@out_option
@seed_option
@ids_option
@click.option("--count", type=click.IntRange(min=0), default=1, show_default=True, help="Variants per image")
@handle_errors
def augment_cmd(**kwargs):
    """Write seeded augmented variants and manifest.json"""
    manifest = tasks.cmd_augment(_run_config(**kwargs))
    click.echo(f"{len(manifest['variants'])} variant(s) written")
    return manifest


@click.command("baseline-segment")
@click.option("--images", type=DIR, required=True)
@out_option
@ids_option
@format_option
@handle_errors
def baseline_segment_cmd(**kwargs):
    """Otsu baseline boundary masks in the predictor layout"""
    report = tasks.cmd_baseline_segment(_run_config(task=1, **kwargs))
    _echo_report(report)
    return report


@click.command("synthesize")
@out_option
@click.option("--count", type=click.IntRange(min=0), default=50, show_default=True)
@seed_option
@handle_errors
def synthesize_cmd(**kwargs):
    """Synthetic dark-ellipse lesions with known masks"""
    image_dir, mask_dir = tasks.cmd_synthesize(_run_config(**kwargs))
    click.echo(f"images: {image_dir}\nmasks: {mask_dir}")


@click.command("model-config")
@task_option
@handle_errors
def model_config_cmd(**kwargs):
    """Print the documented predictor configuration for a task"""
    click.echo(json.dumps(tasks.cmd_model_config(_run_config(**kwargs)), indent=2, sort_keys=True))


COMMANDS = [
    split_cmd,
    augment_cmd,
    eval_boundary_cmd,
    eval_attributes_cmd,
    diagnose_cmd,
    eval_diagnosis_cmd,
    baseline_segment_cmd,
    synthesize_cmd,
    model_config_cmd,
]
