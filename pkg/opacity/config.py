import logging
import os

from dotenv import load_dotenv

load_dotenv()

OBSERVER_CAP_ENV = "PREOPA_OBSERVER_CAP"
LOG_LEVEL_ENV = "PREOPA_LOG_LEVEL"
DEFAULT_OBSERVER_CAP = 2**20


def observer_cap() -> int:
    """Maximum number of observer states, read from the environment."""
    raw = os.getenv(OBSERVER_CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_OBSERVER_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{OBSERVER_CAP_ENV} must be an integer, got {raw!r}")
    if cap <= 0:
        raise ValueError(f"{OBSERVER_CAP_ENV} must be positive, got {cap}")
    return cap


def log_level() -> int:
    name = os.getenv(LOG_LEVEL_ENV, "WARNING").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValueError(f"{LOG_LEVEL_ENV} is not a logging level: {name!r}")
    return level
