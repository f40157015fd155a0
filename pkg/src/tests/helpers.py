import numpy as np

from lesionbench.masks import BinaryMask
from lesionbench.metrics import LABEL_ORDER


def block(width: int, height: int, x0: int, y0: int, x1: int, y1: int) -> BinaryMask:
    """Mask with the half-open rectangle [x0, x1) x [y0, y1) active"""
    bits = np.zeros((height, width), dtype=bool)
    bits[y0:y1, x0:x1] = True
    return BinaryMask(bits)


# Row counts (actual x predicted, MEL..VASC) whose row-normalized form
# matches the reference task-3 confusion table to four decimals. This is a
# compact construction (2,001 samples); `scaled_reference_counts` grows
# it to the 10,015-image training class sizes.
REFERENCE_CONFUSION_COUNTS = [
    [172, 40, 3, 3, 9, 0, 1],
    [69, 1218, 9, 2, 14, 3, 2],
    [7, 4, 73, 6, 6, 3, 2],
    [15, 1, 5, 30, 10, 4, 0],
    [37, 29, 7, 2, 151, 6, 0],
    [2, 7, 1, 2, 0, 16, 0],
    [0, 2, 0, 0, 0, 1, 27],
]
REFERENCE_DIAGONAL = [0.7544, 0.9248, 0.7228, 0.4615, 0.6509, 0.5714, 0.9]
# Per-class attribute scores in AttributeClass order
REFERENCE_ATTRIBUTE_SCORES = [0.2610, 0.2120, 0.3082, 0.3725, 0.2462]
# Training images per class, MEL..VASC (10,015 in total)
TRAINING_CLASS_TOTALS = [1113, 6705, 514, 327, 1099, 115, 142]


def scaled_reference_counts(totals=TRAINING_CLASS_TOTALS):
    """
    Spread each row total over the reference row fractions by largest
    remainder; every cell lands within one count of its exact share.
    """
    rows = []
    for row, total in zip(REFERENCE_CONFUSION_COUNTS, totals):
        exact = np.asarray(row, dtype=np.float64) * total / sum(row)
        cells = np.floor(exact).astype(int)
        order = np.argsort(-(exact - cells), kind="stable")
        cells[order[: total - cells.sum()]] += 1
        rows.append(cells.tolist())
    return rows


def labels_from_counts(counts):
    """Expand a count table into parallel (predictions, truths) label lists"""
    predictions, truths = [], []
    for actual, row in zip(LABEL_ORDER, counts):
        for predicted, n in zip(LABEL_ORDER, row):
            predictions.extend([predicted] * n)
            truths.extend([actual] * n)
    return predictions, truths
