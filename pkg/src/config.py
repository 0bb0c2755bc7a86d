"""Configuration management for the Zastavnyi kernels toolkit."""

import os
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        return float("nan")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        return -1


class Config:
    """Configuration class for numerical tolerances, defaults and logging."""

    def __init__(self):
        """Initialize configuration from environment variables."""
        # Logging
        self.log_level = os.getenv("ZASTAVNYI_LOG_LEVEL", "WARNING").upper()
        self.log_file: Optional[str] = os.getenv("ZASTAVNYI_LOG_FILE") or None

        # Grid evaluation threads
        self.workers = _env_int("ZASTAVNYI_WORKERS", 1)

        # Hankel quadrature
        self.hankel_rtol = _env_float("ZASTAVNYI_HANKEL_RTOL", 1e-8)
        self.hankel_max_panels = _env_int("ZASTAVNYI_HANKEL_MAX_PANELS", 10_000)

        # Generalized Cauchy series
        self.series_max_terms = _env_int("ZASTAVNYI_SERIES_MAX_TERMS", 10_000)
        self.series_cancellation_limit = _env_float("ZASTAVNYI_SERIES_CANCELLATION_LIMIT", 1e6)
        self.series_max_argument = _env_float("ZASTAVNYI_SERIES_MAX_ARGUMENT", 30.0)

        # Generalized Wendland quadrature
        self.gw_nodes = _env_int("ZASTAVNYI_GW_NODES", 64)
        self.gw_max_nodes = _env_int("ZASTAVNYI_GW_MAX_NODES", 4096)
        self.gw_rtol = _env_float("ZASTAVNYI_GW_RTOL", 1e-11)

        # Positive-definiteness checks
        self.gram_points = _env_int("ZASTAVNYI_GRAM_POINTS", 200)
        self.seed = _env_int("ZASTAVNYI_SEED", 0)

        # Output
        self.csv_digits = _env_int("ZASTAVNYI_CSV_DIGITS", 17)

    def validate_logging_config(self) -> bool:
        """Check if the log level names a standard logging level."""
        return self.log_level in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}

    def validate_tolerances(self) -> bool:
        """Check that every tolerance is a positive finite number."""
        values = (
            self.hankel_rtol,
            self.series_cancellation_limit,
            self.series_max_argument,
            self.gw_rtol,
        )
        return all(v == v and 0.0 < v < float("inf") for v in values)

    def validate_limits(self) -> bool:
        """Check that counts and limits are usable."""
        return (
            self.workers >= 1
            and self.hankel_max_panels >= 1
            and self.series_max_terms >= 1
            and 1 <= self.gw_nodes <= self.gw_max_nodes
            and 1 <= self.gram_points <= 500
            and self.seed >= 0
            and 1 <= self.csv_digits <= 17
        )

    def get_invalid_settings(self) -> list[str]:
        """Return a list of invalid configuration items."""
        invalid = []
        if not self.validate_logging_config():
            invalid.append(f"Log level (ZASTAVNYI_LOG_LEVEL={self.log_level})")
        if not self.validate_tolerances():
            invalid.append(
                "Tolerances (ZASTAVNYI_HANKEL_RTOL, ZASTAVNYI_SERIES_CANCELLATION_LIMIT, "
                "ZASTAVNYI_SERIES_MAX_ARGUMENT, ZASTAVNYI_GW_RTOL)"
            )
        if not self.validate_limits():
            invalid.append(
                "Limits (ZASTAVNYI_WORKERS, ZASTAVNYI_HANKEL_MAX_PANELS, ZASTAVNYI_SERIES_MAX_TERMS, "
                "ZASTAVNYI_GW_NODES, ZASTAVNYI_GW_MAX_NODES, ZASTAVNYI_GRAM_POINTS, "
                "ZASTAVNYI_SEED, ZASTAVNYI_CSV_DIGITS)"
            )
        return invalid


# Global configuration instance
config = Config()
