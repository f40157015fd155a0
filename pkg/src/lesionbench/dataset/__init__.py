"""
ISIC-shaped dataset ingestion: folders, masks, diagnosis CSVs and splits
"""
from .groundtruth import (
    GroundTruthTable,
    load_ground_truth_csv,
    load_diagnosis_predictions,
    load_vote_labels,
    predicted_label,
    write_diagnosis_predictions,
    write_ground_truth_csv,
    one_hot,
)
from .discover import (
    DatasetIndex,
    IndexEntry,
    discover,
    save_index,
    load_index,
    segmentation_name,
    attribute_name,
)
from .split import SplitAssignment, SplitMix64, split, read_id_list

__all__ = [
    "GroundTruthTable",
    "load_ground_truth_csv",
    "load_diagnosis_predictions",
    "load_vote_labels",
    "predicted_label",
    "write_diagnosis_predictions",
    "write_ground_truth_csv",
    "one_hot",
    "DatasetIndex",
    "IndexEntry",
    "discover",
    "save_index",
    "load_index",
    "segmentation_name",
    "attribute_name",
    "SplitAssignment",
    "SplitMix64",
    "split",
    "read_id_list",
]
