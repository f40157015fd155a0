"""
The subcommand workflows, one function per subcommand. Each takes a
RunConfig, validates its paths before doing any work, and returns what it
produced; the click layer only parses flags and sets the exit code.
"""
import json
import logging
from pathlib import Path
from typing import Optional

from config import Config
from ..augment import apply, sample_spec
from ..dataset import (
    discover,
    load_diagnosis_predictions,
    load_ground_truth_csv,
    load_vote_labels,
    predicted_label,
    read_id_list,
    segmentation_name,
    split,
    write_diagnosis_predictions,
)
from ..dataset.discover import ATTRIBUTE_PATTERN, SEGMENTATION_PATTERN, _list_images
from ..diagnose import BaselinePredictor, DirectoryPredictor, classify
from ..errors import (
    ConfigError,
    DatasetError,
    PredictionMissingError,
    UndefinedScoreError,
)
from ..logs import WarningCollector
from ..masks import active_count, read_image, read_mask, write_image, write_mask
from ..metrics import (
    AttributeClass,
    LABEL_NAMES,
    MaskPair,
    attribute_class_score,
    attribute_overall_score,
    balanced_accuracy,
    boundary_score,
    confusion,
    confusion_summary,
    diagnosis_accuracy,
    pair_jaccards,
    per_class_recall,
)
from ..modelconfig import for_task
from ..parallel import map_ordered
from ..reports import UNDEFINED, Report
from ..synthetic import write_dataset
from .runconfig import RunConfig

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"
SCORES_FILE = "scores.csv"
PREDICTIONS_FILE = "predictions.csv"
VOTES_FILE = "votes.jsonl"
MANIFEST_FILE = "manifest.json"


def _restrict(ids: list[str], config: RunConfig) -> list[str]:
    if config.ids is None:
        return ids
    wanted = set(read_id_list(config.ids))
    unknown = sorted(wanted - set(ids))
    if unknown:
        logger.warning(f"{len(unknown)} id(s) from {config.ids} have no ground truth, e.g. {unknown[0]}")
    return [i for i in ids if i in wanted]


def _finish(report: Report, config: RunConfig, collector: WarningCollector) -> Report:
    report.warnings.extend(collector.messages)
    out = config.require_out()
    report.write_json(out / REPORT_FILE)
    if config.report_format == "csv":
        report.write_csv(out / SCORES_FILE)
    return report


def _handle_missing(missing: list[str], available: int, config: RunConfig, what: str) -> None:
    if not missing:
        return
    if available == 0:
        raise PredictionMissingError(
            f"No overlapping ids between {what} predictions and ground truth", missing
        )
    message = f"{len(missing)} image(s) have no {what} prediction, e.g. {missing[0]}"
    if config.strict:
        raise PredictionMissingError(message + " (use --skip-missing to score the rest)", missing)
    logger.warning(message + "; skipped")


def cmd_split(config: RunConfig):
    """Write train.txt/test.txt for the task's images"""
    config.require_dirs("images")
    seed = config.require_seed()
    out = config.require_out()
    if config.task == 3:
        config.require_files("truth")
        index = discover(3, config.images, ground_truth=load_ground_truth_csv(config.truth))
    else:
        config.require_dirs("truth")
        index = discover(config.task, config.images, config.truth)
    if config.stratified and config.task != 3:
        raise ConfigError("--stratified needs task 3 diagnosis labels")
    train_count, test_count = config.split_counts(len(index))
    strata = index.labels() if config.stratified else None
    assignment = split(index, train_count, test_count, seed, strata=strata)
    assignment.write(out)
    return assignment


def cmd_eval_boundary(config: RunConfig) -> Report:
    """Per-image Jaccard and S1 for task-1 predictions"""
    config.require_dirs("truth", "pred")
    config.require_out()
    predictor = DirectoryPredictor(config.pred, target_side=config.target_side, threshold=config.threshold)
    truths = {
        found.group("id"): path
        for path in sorted(config.truth.glob("*.png"))
        if (found := SEGMENTATION_PATTERN.match(path.name))
    }
    ids = _restrict(sorted(truths), config)

    def load(image_id: str) -> Optional[MaskPair]:
        ground_truth = read_mask(truths[image_id], config.threshold)
        try:
            predicted = predictor.segmentation(image_id, ground_truth.width, ground_truth.height)
        except PredictionMissingError:
            return None
        return MaskPair(ground_truth, predicted, image_id)

    with WarningCollector() as collector:
        loaded = map_ordered(load, ids)
        missing = [i for i, pair in zip(ids, loaded) if pair is None]
        pairs = [pair for pair in loaded if pair is not None]
        _handle_missing(missing, len(pairs), config, "boundary")
        if not pairs:
            raise PredictionMissingError("No ground truth masks to score")
        jaccards = pair_jaccards(pairs)
        report = Report(
            kind="eval-boundary",
            config=config.to_dict(),
            records=[{"image_id": p.image_id, "jaccard": j} for p, j in zip(pairs, jaccards)],
            aggregates={"S1": boundary_score(pairs), "N": len(pairs), "skipped": missing},
        )
    return _finish(report, config, collector)


def cmd_eval_attributes(config: RunConfig) -> Report:
    """Per-class S2(j) and overall S2 for task-2 predictions"""
    config.require_dirs("truth", "pred")
    config.require_out()
    predictor = DirectoryPredictor(config.pred, target_side=config.target_side, threshold=config.threshold)
    truths: dict[str, dict[AttributeClass, Path]] = {}
    for path in sorted(config.truth.glob("*.png")):
        found = ATTRIBUTE_PATTERN.match(path.name)
        if found:
            truths.setdefault(found.group("id"), {})[AttributeClass(found.group("name"))] = path
    incomplete = sorted(i for i, masks in truths.items() if len(masks) != len(AttributeClass))
    if incomplete:
        raise DatasetError(
            f"{len(incomplete)} image(s) lack some of the {len(AttributeClass)} attribute masks, e.g. {incomplete[0]}"
        )
    ids = _restrict(sorted(truths), config)

    def load(image_id: str) -> Optional[dict[AttributeClass, MaskPair]]:
        ground_truths = {a: read_mask(p, config.threshold) for a, p in truths[image_id].items()}
        width, height = next(iter(ground_truths.values())).shape
        try:
            predicted = predictor.attributes(image_id, width, height)
        except PredictionMissingError:
            return None
        return {a: MaskPair(ground_truths[a], predicted[a], image_id) for a in AttributeClass}

    with WarningCollector() as collector:
        loaded = map_ordered(load, ids)
        missing = [i for i, pairs in zip(ids, loaded) if pairs is None]
        images = [pairs for pairs in loaded if pairs is not None]
        _handle_missing(missing, len(images), config, "attribute")
        if not images:
            raise PredictionMissingError("No ground truth attribute masks to score")

        records = []
        per_class: dict[AttributeClass, Optional[float]] = {}
        for attribute in AttributeClass:
            pairs = [pairs_by_class[attribute] for pairs_by_class in images]
            for pair, score in zip(pairs, pair_jaccards(pairs)):
                records.append(
                    {
                        "image_id": pair.image_id,
                        "attribute": attribute.value,
                        "jaccard": score,
                        "ground_truth_empty": active_count(pair.ground_truth) == 0,
                    }
                )
            try:
                per_class[attribute] = attribute_class_score(pairs, attribute)
            except UndefinedScoreError as err:
                if config.strict:
                    raise UndefinedScoreError(
                        f"{err} (use --skip-missing to report it as undefined)", attribute
                    )
                logger.warning(str(err))
                per_class[attribute] = None
        try:
            overall = attribute_overall_score(per_class, skip_undefined=not config.strict)
        except UndefinedScoreError as err:
            logger.warning(str(err))
            overall = None
        report = Report(
            kind="eval-attributes",
            config=config.to_dict(),
            records=records,
            aggregates={
                "S2_per_class": {
                    a.value: (UNDEFINED if s is None else s) for a, s in per_class.items()
                },
                "N_per_class": {
                    a.value: sum(
                        1 for r in records if r["attribute"] == a.value and not r["ground_truth_empty"]
                    )
                    for a in AttributeClass
                },
                "S2": overall,
                "skipped": missing,
            },
        )
    return _finish(report, config, collector)


def cmd_diagnose(config: RunConfig) -> Report:
    """Area-vote every image and write predictions.csv and votes.jsonl"""
    config.require_dirs("images", "pred")
    out = config.require_out()
    class_predictor = DirectoryPredictor(config.pred, target_side=config.target_side, threshold=config.threshold)
    if not class_predictor.has_predictions(3):
        raise DatasetError(f"Predictor root {config.pred} has no task3 class masks")
    images = _list_images(config.images)
    if config.baseline:
        boundary_predictor = BaselinePredictor(images)
    else:
        boundary_predictor = class_predictor
    ids = _restrict(sorted(images), config)

    def run(image_id: str):
        return classify(
            read_image(images[image_id]),
            image_id,
            boundary_predictor,
            class_predictor,
            intersect_boundary=config.intersect_boundary,
        )

    with WarningCollector() as collector:
        diagnoses = map_ordered(run, ids)
        traces = [d.to_trace() for d in diagnoses]
        write_diagnosis_predictions(
            out / PREDICTIONS_FILE, {d.image_id: d.confidence.values for d in diagnoses}
        )
        (out / VOTES_FILE).write_text(
            "".join(json.dumps(t, sort_keys=True) + "\n" for t in traces),
            encoding="utf-8",
            newline="\n",
        )
        label_counts = {name: 0 for name in LABEL_NAMES}
        for d in diagnoses:
            label_counts[d.label.value] += 1
        report = Report(
            kind="diagnose",
            config=config.to_dict(),
            records=traces,
            aggregates={
                "N": len(diagnoses),
                "fallbacks": sum(1 for d in diagnoses if d.fallback),
                "label_counts": label_counts,
            },
            errors=[f"{d.image_id}: {d.error}" for d in diagnoses if d.error],
        )
    return _finish(report, config, collector)


def cmd_eval_diagnosis(config: RunConfig) -> Report:
    """
    S3, confusion matrix and balanced accuracy for task-3 predictions.

    Labels come from the `diagnose` vote trace when `votes` is set, so near
    ties lost to four-decimal rounding keep their voted label; otherwise each
    CSV row's argmax, with a uniform row read as the fallback label.
    """
    config.require_files("truth")
    config.require_out()
    truth = load_ground_truth_csv(config.truth)
    if config.votes is not None:
        config.require_files("votes")
        predicted = load_vote_labels(config.votes)
    else:
        config.require_files("pred")
        predicted = {
            image_id: predicted_label(vector)
            for image_id, vector in load_diagnosis_predictions(config.pred).items()
        }
    ids = _restrict(truth.ids, config)

    with WarningCollector() as collector:
        missing = [i for i in ids if i not in predicted]
        scored = [i for i in ids if i in predicted]
        _handle_missing(missing, len(scored), config, "diagnosis")
        if not scored:
            raise PredictionMissingError("No ground truth rows to score")
        extra = sorted(set(predicted) - set(truth.ids))
        if extra:
            logger.warning(f"{len(extra)} prediction row(s) have no ground truth, e.g. {extra[0]}")
        truths = [truth.label(i) for i in scored]
        predictions = [predicted[i] for i in scored]
        cm = confusion(predictions, truths)
        recalls = per_class_recall(cm)
        report = Report(
            kind="eval-diagnosis",
            config=config.to_dict(),
            records=[
                {
                    "image_id": image_id,
                    "truth": t.value,
                    "predicted": p.value,
                    "correct": t is p,
                }
                for image_id, t, p in zip(scored, truths, predictions)
            ],
            aggregates={
                "S3": diagnosis_accuracy(predictions, truths),
                "N": len(scored),
                "confusion": cm.to_dict(),
                "balanced_accuracy": balanced_accuracy(cm),
                "per_class_recall": {
                    label.value: (UNDEFINED if r is None else r) for label, r in recalls.items()
                },
                "confusion_summary": confusion_summary(cm),
                "skipped": missing,
            },
        )
    return _finish(report, config, collector)


def _masks_by_image(mask_dir: Optional[Path]) -> dict[str, list[tuple[str, Path]]]:
    """image id -> [(name suffix after the id, path)]"""
    found: dict[str, list[tuple[str, Path]]] = {}
    if mask_dir is None:
        return found
    for path in sorted(mask_dir.glob("*.png")):
        match = SEGMENTATION_PATTERN.match(path.name) or ATTRIBUTE_PATTERN.match(path.name)
        if match:
            image_id = match.group("id")
            found.setdefault(image_id, []).append((path.name[len(image_id):], path))
    return found


def cmd_augment(config: RunConfig) -> dict:
    """
    Write `count` augmented variants per image (and its masks) with a JSON
    manifest of the specs used. Variant n of the image at sorted position p
    uses draw index p * count + n.
    """
    config.require_dirs("images")
    if config.truth is not None:
        config.require_dirs("truth")
    seed = config.require_seed()
    out = config.require_out()
    image_out, mask_out = out / "images", out / "masks"
    try:
        image_out.mkdir(parents=True, exist_ok=True)
        mask_out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise DatasetError(f"Output directory {out} is not writable: {err}")
    images = _list_images(config.images)
    masks = _masks_by_image(config.truth)
    ids = _restrict(sorted(images), config)

    def augment_one(position_and_id: tuple[int, str]) -> list[dict]:
        position, image_id = position_and_id
        if config.count == 0:
            return []
        image = read_image(images[image_id])
        named = masks.get(image_id, [])
        originals = [read_mask(path, config.threshold) for _, path in named]
        variants = []
        for n in range(config.count):
            draw_index = position * config.count + n
            spec = sample_spec(seed, draw_index)
            augmented, augmented_masks = apply(spec, image, originals)
            variant_id = f"{image_id}_aug{n}"
            image_path = write_image(augmented, image_out / f"{variant_id}.png")
            mask_entries = []
            for (suffix, _), original, mask in zip(named, originals, augmented_masks):
                mask_path = write_mask(mask, mask_out / f"{variant_id}{suffix}")
                mask_entries.append(
                    {
                        "path": mask_path.name,
                        "active_count": active_count(mask),
                        "source_active_count": active_count(original),
                    }
                )
            variants.append(
                {
                    "image_id": image_id,
                    "variant": n,
                    "draw_index": draw_index,
                    "image": image_path.name,
                    "masks": mask_entries,
                    "spec": spec.to_dict(),
                }
            )
        return variants

    variants = [v for batch in map_ordered(augment_one, list(enumerate(ids))) for v in batch]
    manifest = {
        "tool": "lesionbench",
        "version": Config.VERSION,
        "seed": seed,
        "count": config.count,
        "order": "flips, rotation, luminosity, blur",
        "variants": variants,
    }
    (out / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    logger.info(f"Wrote {len(variants)} augmented variant(s) to {out}")
    return manifest


def cmd_baseline_segment(config: RunConfig) -> Report:
    """Segment every image with the Otsu baseline into `<out>/task1/`"""
    config.require_dirs("images")
    out = config.require_out()
    images = _list_images(config.images)
    ids = _restrict(sorted(images), config)
    predictor = BaselinePredictor(images)
    task_dir = out / "task1"

    def segment(image_id: str) -> dict:
        width, height = read_image(images[image_id]).shape
        mask = predictor.segmentation(image_id, width, height)
        write_mask(mask, task_dir / segmentation_name(image_id))
        return {"image_id": image_id, "active_count": active_count(mask), "width": width, "height": height}

    with WarningCollector() as collector:
        task_dir.mkdir(parents=True, exist_ok=True)
        records = map_ordered(segment, ids)
        report = Report(
            kind="baseline-segment",
            config=config.to_dict(),
            records=records,
            aggregates={"N": len(records), "empty": sum(1 for r in records if r["active_count"] == 0)},
        )
    return _finish(report, config, collector)


def cmd_synthesize(config: RunConfig) -> tuple[Path, Path]:
    seed = config.require_seed()
    out = config.require_out()
    return write_dataset(out, config.count, seed)


def cmd_model_config(config: RunConfig) -> dict:
    return for_task(config.task).to_dict()
