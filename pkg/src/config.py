"""
Defines all lesionbench runtime configuration
"""
import os
from dotenv import load_dotenv


load_dotenv()


def env_int(name: str, default: int) -> int:
    """
    Read a positive integer from the environment.

    Args:
        name (str): Environment variable name.
        default (int): Value used when the variable is unset or empty.

    Returns:
        int: The parsed value.

    Raises:
        ValueError: If the value is not a positive integer.
    """
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be a positive integer, got: {raw!r}")
    if value <= 0:
        raise ValueError(f"{name} must be a positive integer, got: {value}")
    return value


class Config:
    VERSION = os.environ.get("VERSION") or "0.1.0"
    THREADS = env_int("LESION_BENCH_THREADS", os.cpu_count() or 1)
    # Preprocessing
    TARGET_SIDE = env_int("LESION_BENCH_TARGET_SIDE", 768)
    MASK_THRESHOLD = env_int("LESION_BENCH_MASK_THRESHOLD", 127)
    LOG_LEVEL = os.environ.get("LESION_BENCH_LOG_LEVEL") or "INFO"
