"""
Deterministic train/test splitting.

Shuffling uses SplitMix64, pinned so assignments are identical on every
platform and Python version:

    state  <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z      <- (state xor (state >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z      <- (z xor (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output <- z xor (z >> 31)

Ids are sorted lexicographically, then Fisher-Yates shuffled with
j = output mod (i + 1) for i from n - 1 down to 1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Mapping, Optional, Sequence

from ..errors import SplitError
from .discover import DatasetIndex

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
PRNG_NAME = "splitmix64"
TRAIN_FILE = "train.txt"
TEST_FILE = "test.txt"


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def shuffle(self, items: Sequence) -> list:
        shuffled = list(items)
        for i in range(len(shuffled) - 1, 0, -1):
            j = self.next() % (i + 1)
            shuffled[i], shuffled[j] = shuffled[j], shuffled[i]
        return shuffled


@dataclass(frozen=True)
class SplitAssignment:
    seed: int
    train_ids: tuple[str, ...]
    test_ids: tuple[str, ...]
    stratified: bool = False

    def __post_init__(self):
        overlap = set(self.train_ids) & set(self.test_ids)
        if overlap:
            raise SplitError(f"train and test share {len(overlap)} id(s)")

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        """Writes train.txt and test.txt, one id per line in sorted order"""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, ids in ((TRAIN_FILE, self.train_ids), (TEST_FILE, self.test_ids)):
            path = out_dir / name
            path.write_text("".join(f"{i}\n" for i in sorted(ids)), encoding="utf-8", newline="\n")
            paths.append(path)
        return paths[0], paths[1]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "prng": PRNG_NAME,
            "stratified": self.stratified,
            "train_count": len(self.train_ids),
            "test_count": len(self.test_ids),
        }


def read_id_list(path: str | Path) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip()]


def _stratified_test_quota(
    groups: Mapping[Hashable, list[str]], test_count: int, total: int
) -> dict[Hashable, int]:
    # largest remainder allocation, ties broken by group key order
    exact = {key: len(ids) * test_count / total for key, ids in groups.items()}
    quota = {key: int(value) for key, value in exact.items()}
    short = test_count - sum(quota.values())
    by_remainder = sorted(groups, key=lambda key: (-(exact[key] - quota[key]), str(key)))
    for key in by_remainder[:short]:
        quota[key] += 1
    return quota


def split(
    index: DatasetIndex | Sequence[str],
    train_count: int,
    test_count: int,
    seed: int,
    strata: Optional[Mapping[str, Hashable]] = None,
) -> SplitAssignment:
    """
    Shuffle the sorted ids with a seeded SplitMix64 and put the first
    `train_count` into train, the rest into test.

    With `strata` (id -> group, e.g. diagnosis label) each group is shuffled on
    its own and contributes a largest-remainder share of the test set.

    Raises:
        SplitError: If the counts do not add up to the number of ids.
    """
    ids = sorted(index.ids if isinstance(index, DatasetIndex) else index)
    if train_count < 0 or test_count < 0:
        raise SplitError("train_count and test_count must be non-negative")
    if train_count + test_count != len(ids):
        raise SplitError(
            f"Count mismatch: {train_count} + {test_count} != {len(ids)} available ids"
        )
    rng = SplitMix64(seed)
    if strata is None:
        shuffled = rng.shuffle(ids)
        train, test = shuffled[:train_count], shuffled[train_count:]
    else:
        missing = [i for i in ids if i not in strata]
        if missing:
            raise SplitError(f"{len(missing)} id(s) have no stratum, e.g. {missing[0]}")
        groups: dict[Hashable, list[str]] = {}
        for image_id in ids:
            groups.setdefault(strata[image_id], []).append(image_id)
        groups = dict(sorted(groups.items(), key=lambda item: str(item[0])))
        quota = _stratified_test_quota(groups, test_count, len(ids)) if ids else {}
        train, test = [], []
        for key, members in groups.items():
            shuffled = rng.shuffle(members)
            test.extend(shuffled[: quota[key]])
            train.extend(shuffled[quota[key]:])
    logger.info(f"Split {len(ids)} ids into {len(train)} train / {len(test)} test (seed {seed})")
    return SplitAssignment(
        seed=seed,
        train_ids=tuple(train),
        test_ids=tuple(test),
        stratified=strata is not None,
    )
