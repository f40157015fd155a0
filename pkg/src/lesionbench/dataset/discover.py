"""
Discovery of ISIC-shaped image folders and their masks
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import DatasetError
from ..masks import image_size
from ..masks.io import IMAGE_SUFFIXES
from ..metrics import AttributeClass, DiagnosisLabel
from ..parallel import map_ordered
from .groundtruth import GroundTruthTable

logger = logging.getLogger(__name__)

VALID_TASKS = frozenset([1, 2, 3])
SEGMENTATION_ROLE = "segmentation"
SEGMENTATION_PATTERN = re.compile(r"^(?P<id>.+)_segmentation\.png$")
ATTRIBUTE_PATTERN = re.compile(
    r"^(?P<id>.+)_attribute_(?P<name>"
    + "|".join(a.value for a in AttributeClass)
    + r")\.png$"
)
# Any mask-named file, used to keep masks out of the image list
MASK_NAME_PATTERN = re.compile(r"^.+_(segmentation|attribute_[a-z_]+)\.png$")


def segmentation_name(image_id: str) -> str:
    return f"{image_id}_segmentation.png"


def attribute_name(image_id: str, attribute: AttributeClass) -> str:
    return f"{image_id}_attribute_{attribute.value}.png"


def check_task(task: int) -> int:
    if task not in VALID_TASKS:
        raise ValueError(f"Invalid task: {task} - should be 1, 2 or 3")
    return task


@dataclass(frozen=True)
class IndexEntry:
    image_id: str
    image_path: Path
    mask_paths: dict[str, Path] = field(default_factory=dict)
    label: Optional[DiagnosisLabel] = None

    def to_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "image_path": str(self.image_path),
            "mask_paths": {role: str(p) for role, p in sorted(self.mask_paths.items())},
            "label": self.label.value if self.label else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> IndexEntry:
        return cls(
            image_id=data["image_id"],
            image_path=Path(data["image_path"]),
            mask_paths={role: Path(p) for role, p in data["mask_paths"].items()},
            label=DiagnosisLabel(data["label"]) if data.get("label") else None,
        )


@dataclass(frozen=True)
class DatasetIndex:
    """
    Entries sorted by image id. Task 1 entries carry one `segmentation`
    mask, task 2 entries one mask per attribute class, task 3 entries a label.
    """

    task: int
    entries: tuple[IndexEntry, ...] = ()
    unmatched: tuple[str, ...] = ()

    def __post_init__(self):
        check_task(self.task)
        entries = tuple(sorted(self.entries, key=lambda e: e.image_id))
        ids = [e.image_id for e in entries]
        if len(set(ids)) != len(ids):
            raise DatasetError("DatasetIndex image ids must be unique")
        for entry in entries:
            match self.task:
                case 1:
                    if set(entry.mask_paths) != {SEGMENTATION_ROLE}:
                        raise DatasetError(
                            f"{entry.image_id}: task 1 entries need exactly one segmentation mask"
                        )
                case 2:
                    if set(entry.mask_paths) != {a.value for a in AttributeClass}:
                        raise DatasetError(
                            f"{entry.image_id}: task 2 entries need all {len(AttributeClass)} attribute masks"
                        )
                case 3:
                    if entry.label is None:
                        raise DatasetError(f"{entry.image_id}: task 3 entries need a diagnosis")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "unmatched", tuple(sorted(self.unmatched)))

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def ids(self) -> list[str]:
        return [e.image_id for e in self.entries]

    def counts_by_role(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.entries:
            for role in entry.mask_paths:
                counts[role] = counts.get(role, 0) + 1
        return dict(sorted(counts.items()))

    def labels(self) -> dict[str, DiagnosisLabel]:
        return {e.image_id: e.label for e in self.entries if e.label is not None}

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "entries": [e.to_dict() for e in self.entries],
            "unmatched": list(self.unmatched),
        }

    @classmethod
    def from_dict(cls, data: dict) -> DatasetIndex:
        return cls(
            task=data["task"],
            entries=tuple(IndexEntry.from_dict(e) for e in data["entries"]),
            unmatched=tuple(data.get("unmatched", [])),
        )


def save_index(index: DatasetIndex, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(index.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_index(path: str | Path) -> DatasetIndex:
    return DatasetIndex.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _list_files(directory: Optional[Path]) -> list[Path]:
    if directory is None:
        return []
    if not directory.is_dir():
        raise DatasetError(f"Not a readable directory: {directory}")
    return sorted(p for p in directory.iterdir() if p.is_file())


def _list_images(image_dir: Path) -> dict[str, Path]:
    images = {}
    for path in _list_files(image_dir):
        if path.suffix.lower() not in IMAGE_SUFFIXES or MASK_NAME_PATTERN.match(path.name):
            continue
        if path.stem in images:
            raise DatasetError(f"Two images share the id {path.stem}")
        images[path.stem] = path
    return images


def _match_masks(task: int, mask_dir: Optional[Path], image_dir: Path) -> tuple[dict, list]:
    masks: dict[str, dict[str, Path]] = {}
    unmatched = []
    pattern = SEGMENTATION_PATTERN if task == 1 else ATTRIBUTE_PATTERN
    for path in _list_files(mask_dir):
        found = pattern.match(path.name)
        if found is None:
            # images living next to their masks are not "unmatched"
            if mask_dir != image_dir or MASK_NAME_PATTERN.match(path.name):
                unmatched.append(path.name)
            continue
        role = SEGMENTATION_ROLE if task == 1 else found.group("name")
        masks.setdefault(found.group("id"), {})[role] = path
    return masks, unmatched


def _check_dimensions(entries: list[IndexEntry]) -> None:
    def mismatches(entry: IndexEntry) -> list[str]:
        size = image_size(entry.image_path)
        return [
            f"{path.name}: {mask_size[0]}x{mask_size[1]} vs image {size[0]}x{size[1]}"
            for path in entry.mask_paths.values()
            if (mask_size := image_size(path)) != size
        ]

    problems = [p for found in map_ordered(mismatches, entries) for p in found]
    for problem in problems:
        logger.error(f"Mask dimension mismatch: {problem}")
    if problems:
        raise DatasetError(
            f"{len(problems)} mask(s) do not match their image dimensions: {problems[0]}"
        )


def discover(
    task: int,
    image_dir: str | Path,
    mask_dir: Optional[str | Path] = None,
    ground_truth: Optional[GroundTruthTable] = None,
    check_dimensions: bool = True,
) -> DatasetIndex:
    """
    Build the index for one task from an image folder and, for tasks 1-2,
    a mask folder (`<id>_segmentation.png` or `<id>_attribute_<name>.png`),
    or, for task 3, a ground-truth table.

    The result depends only on directory contents, never on listing order.

    Raises:
        DatasetError: If an image lacks its required masks or diagnosis, a
            mask has no image, or mask and image dimensions differ.
    """
    check_task(task)
    image_dir = Path(image_dir)
    images = _list_images(image_dir)
    unmatched: list[str] = []
    entries = []

    if task in (1, 2):
        mask_dir = Path(mask_dir) if mask_dir is not None else image_dir
        masks, unmatched = _match_masks(task, mask_dir, image_dir)
        orphans = sorted(set(masks) - set(images))
        if orphans:
            raise DatasetError(f"{len(orphans)} mask id(s) have no image, e.g. {orphans[0]}")
        required = 1 if task == 1 else len(AttributeClass)
        incomplete = sorted(i for i in images if len(masks.get(i, {})) != required)
        if incomplete:
            raise DatasetError(
                f"{len(incomplete)} image(s) lack their {required} required mask(s), e.g. {incomplete[0]}"
            )
        entries = [IndexEntry(i, images[i], masks[i]) for i in sorted(images)]
        if check_dimensions:
            _check_dimensions(entries)
    else:
        if ground_truth is None:
            raise DatasetError("Task 3 discovery needs a ground truth table")
        missing = sorted(i for i in images if i not in ground_truth)
        if missing:
            raise DatasetError(f"{len(missing)} image(s) have no diagnosis row, e.g. {missing[0]}")
        unmatched = [f"{i} (csv row without image)" for i in ground_truth.ids if i not in images]
        entries = [
            IndexEntry(i, images[i], label=ground_truth.label(i)) for i in sorted(images)
        ]

    for name in unmatched:
        logger.warning(f"Unmatched file: {name}")
    logger.info(f"Discovered {len(entries)} task {task} entries in {image_dir}")
    return DatasetIndex(task=task, entries=tuple(entries), unmatched=tuple(unmatched))
