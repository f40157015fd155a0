from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Literal, Optional

from config import Config
from ..errors import ConfigError

ReportFormat = Literal["json", "csv"]
REPORT_FORMATS = ("json", "csv")
# (train, test) image counts per task
DEFAULT_SPLIT_COUNTS = {1: (2294, 300), 2: (2294, 300), 3: (8015, 2000)}


@dataclass(frozen=True)
class RunConfig:
    """
    Everything one subcommand invocation needs. Echoed verbatim into reports.
    """

    task: int = 1
    images: Optional[Path] = None
    truth: Optional[Path] = None
    pred: Optional[Path] = None
    out: Optional[Path] = None
    ids: Optional[Path] = None
    votes: Optional[Path] = None
    seed: Optional[int] = None
    strict: bool = True
    intersect_boundary: bool = True
    baseline: bool = False
    stratified: bool = False
    report_format: ReportFormat = "json"
    count: int = 0
    train_count: Optional[int] = None
    test_count: Optional[int] = None
    target_side: int = Config.TARGET_SIDE
    threshold: int = Config.MASK_THRESHOLD

    def __post_init__(self):
        if self.task not in (1, 2, 3):
            raise ConfigError(f"Invalid task: {self.task} - should be 1, 2 or 3")
        if self.report_format not in REPORT_FORMATS:
            raise ConfigError(
                f"Invalid report format: {self.report_format} - should be json or csv"
            )
        if self.count < 0:
            raise ConfigError(f"count must be non-negative, got {self.count}")
        if self.seed is not None and self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        for name in ("images", "truth", "pred", "out", "ids", "votes"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, Path):
                object.__setattr__(self, name, Path(value))

    def require_dirs(self, *names: str) -> RunConfig:
        """
        Raises:
            ConfigError: If a named path is unset or not a directory.
        """
        for name in names:
            path = getattr(self, name)
            if path is None:
                raise ConfigError(f"--{name} is required")
            if not path.is_dir():
                raise ConfigError(f"--{name} {path} is not a directory")
        return self

    def require_files(self, *names: str) -> RunConfig:
        for name in names:
            path = getattr(self, name)
            if path is None:
                raise ConfigError(f"--{name} is required")
            if not path.is_file():
                raise ConfigError(f"--{name} {path} is not a file")
        return self

    def require_out(self) -> Path:
        if self.out is None:
            raise ConfigError("--out is required")
        if self.out.exists() and not self.out.is_dir():
            raise ConfigError(f"--out {self.out} exists and is not a directory")
        return self.out

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError("--seed is required for this subcommand")
        return self.seed

    def split_counts(self, available: int) -> tuple[int, int]:
        """
        Requested (train, test) counts. Defaults follow the task; giving only
        one of the two derives the other from the available total.
        """
        if self.train_count is None and self.test_count is None:
            return DEFAULT_SPLIT_COUNTS[self.task]
        if self.train_count is None:
            return available - self.test_count, self.test_count
        if self.test_count is None:
            return self.train_count, available - self.train_count
        return self.train_count, self.test_count

    def to_dict(self) -> dict:
        echo = {}
        for f in fields(self):
            value = getattr(self, f.name)
            echo[f.name] = str(value) if isinstance(value, Path) else value
        return echo
