"""
Diagnosis ground-truth and prediction CSVs (`image,MEL,NV,BCC,AKIEC,BKL,DF,VASC`)
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from ..errors import GroundTruthError
from ..metrics import DiagnosisLabel, FALLBACK_LABEL, LABEL_NAMES, LABEL_ORDER

logger = logging.getLogger(__name__)

ID_COLUMN = "image"
HEADER = (ID_COLUMN, *LABEL_NAMES)
ONE_HOT_TOLERANCE = 1e-6
CSV_FLOAT_FORMAT = "%.4f"


@dataclass(frozen=True)
class GroundTruthTable:
    rows: dict[str, DiagnosisLabel] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, image_id: str) -> bool:
        return image_id in self.rows

    def label(self, image_id: str) -> DiagnosisLabel:
        return self.rows[image_id]

    @property
    def ids(self) -> list[str]:
        return sorted(self.rows)

    def class_counts(self) -> dict[DiagnosisLabel, int]:
        counts = {label: 0 for label in LABEL_ORDER}
        for label in self.rows.values():
            counts[label] += 1
        return counts


def _read_table(path: str | Path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype={ID_COLUMN: str}, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise GroundTruthError(f"{path}: file is empty, header row required")
    missing = [column for column in HEADER if column not in frame.columns]
    if missing:
        raise GroundTruthError(f"{path}: missing column(s): {', '.join(missing)}")
    duplicated = frame[ID_COLUMN][frame[ID_COLUMN].duplicated()].tolist()
    if duplicated:
        raise GroundTruthError(f"{path}: duplicate image id(s): {', '.join(duplicated[:5])}")
    try:
        values = frame[list(LABEL_NAMES)].apply(pd.to_numeric, errors="raise")
    except (ValueError, TypeError) as err:
        raise GroundTruthError(f"{path}: unparseable number: {err}")
    values.index = frame[ID_COLUMN]
    return values


def load_ground_truth_csv(path: str | Path) -> GroundTruthTable:
    """
    Parse a one-hot diagnosis CSV; each row's 1.0 column becomes its label.

    Values within 1e-6 of 0 or 1 are accepted.

    Raises:
        GroundTruthError: On a missing column, a duplicate image id, an
            unparseable number or a row that is not one-hot.
    """
    values = _read_table(path)
    matrix = values.to_numpy(dtype=np.float64)
    near_one = np.abs(matrix - 1.0) <= ONE_HOT_TOLERANCE
    near_zero = np.abs(matrix) <= ONE_HOT_TOLERANCE
    rows = {}
    for row_number, image_id in enumerate(values.index):
        if not (near_one[row_number] | near_zero[row_number]).all() or near_one[
            row_number
        ].sum() != 1:
            raise GroundTruthError(
                f"{path}: row for {image_id} is not one-hot "
                f"(values {matrix[row_number].tolist()}, sum {matrix[row_number].sum():g})"
            )
        rows[image_id] = DiagnosisLabel.from_index(int(np.argmax(matrix[row_number])))
    logger.info(f"Loaded {len(rows)} ground truth rows from {path}")
    return GroundTruthTable(rows=rows)


def load_diagnosis_predictions(path: str | Path) -> dict[str, np.ndarray]:
    """
    Read a task-3 prediction CSV into confidence vectors keyed by image id.
    Rows need not be one-hot.
    """
    values = _read_table(path)
    matrix = values.to_numpy(dtype=np.float64)
    if (matrix < 0).any():
        raise GroundTruthError(f"{path}: negative confidence values")
    return {image_id: matrix[i] for i, image_id in enumerate(values.index)}


def predicted_label(vector: Sequence[float]) -> DiagnosisLabel:
    """
    The label a confidence vector stands for: its argmax, or the fallback
    label when every entry is equal (the vector an all-empty vote emits).
    """
    values = np.asarray(vector, dtype=np.float64)
    if np.ptp(values) == 0:
        return FALLBACK_LABEL
    return DiagnosisLabel.from_index(int(np.argmax(values)))


def load_vote_labels(path: str | Path) -> dict[str, DiagnosisLabel]:
    """
    Read the emitted labels from a `votes.jsonl` trace file.

    Raises:
        GroundTruthError: On unreadable JSON, missing fields, an unknown
            label or a duplicate image id.
    """
    if not Path(path).read_text(encoding="utf-8").strip():
        return {}
    try:
        frame = pd.read_json(path, lines=True, dtype={"image_id": str, "label": str})
    except ValueError as err:
        raise GroundTruthError(f"{path}: unreadable vote trace: {err}")
    missing = [column for column in ("image_id", "label") if column not in frame.columns]
    if missing:
        raise GroundTruthError(f"{path}: vote trace lacks field(s) {', '.join(missing)}")
    duplicates = frame["image_id"][frame["image_id"].duplicated()].tolist()
    if duplicates:
        raise GroundTruthError(f"{path}: duplicate image id {duplicates[0]}")
    try:
        return {
            str(image_id): DiagnosisLabel.from_name(str(label))
            for image_id, label in zip(frame["image_id"], frame["label"])
        }
    except ValueError as err:
        raise GroundTruthError(f"{path}: {err}")


def write_diagnosis_predictions(
    path: str | Path, rows: Mapping[str, Sequence[float]]
) -> Path:
    """
    Write confidence vectors with the ground-truth header, four decimals per
    value, rows ordered by image id, UTF-8 with LF line endings.

    Raises:
        ValueError: On a vector that does not have seven entries or holds a
            negative confidence.
    """
    path = Path(path)
    records = []
    for image_id in sorted(rows):
        vector = [float(v) for v in rows[image_id]]
        if len(vector) != len(LABEL_NAMES):
            raise ValueError(
                f"Confidence vector for {image_id} has {len(vector)} entries, expected {len(LABEL_NAMES)}"
            )
        if any(v < 0 for v in vector):
            raise ValueError(f"Confidence vector for {image_id} has a negative entry")
        records.append([image_id, *vector])
    frame = pd.DataFrame(records, columns=list(HEADER))
    frame[list(LABEL_NAMES)] = frame[list(LABEL_NAMES)].astype(np.float64)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        path,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        lineterminator="\n",
        encoding="utf-8",
    )
    return path


def one_hot(label: DiagnosisLabel) -> list[float]:
    vector = [0.0] * len(LABEL_ORDER)
    vector[label.index] = 1.0
    return vector


def write_ground_truth_csv(path: str | Path, table: GroundTruthTable) -> Path:
    return write_diagnosis_predictions(
        path, {image_id: one_hot(label) for image_id, label in table.rows.items()}
    )
