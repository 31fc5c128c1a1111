import json
import logging
import math
from functools import lru_cache
from typing import Tuple, Union

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


def parse_window(value: Union[str, list, tuple]) -> Tuple[float, float]:
    """Parse a window given as "LO:HI" or as a JSON list [LO, HI]"""
    if isinstance(value, (list, tuple)):
        items = list(value)
    elif isinstance(value, str):
        text = value.strip()
        if text.startswith("["):
            try:
                items = json.loads(text)
            except json.JSONDecodeError as e:
                raise ValueError(f"window is not valid JSON: {value!r}") from e
        else:
            items = text.split(":")
    else:
        raise ValueError(f"window must be 'LO:HI' or [LO, HI], got {value!r}")

    if len(items) != 2:
        raise ValueError(f"window needs exactly two bounds, got {value!r}")
    try:
        lo, hi = float(items[0]), float(items[1])
    except (TypeError, ValueError) as e:
        raise ValueError(f"window bounds must be numbers: {value!r}") from e
    return lo, hi


class Settings(BaseSettings):
    # App
    app_name: str = "Tropical Cycles Toolkit"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "WARNING"
    log_json: bool = True

    # Amoeba sampling
    amoeba_grid: int = 200
    amoeba_window: Union[str, Tuple[float, float]] = "-5:5"
    amoeba_residual_tolerance: float = 1e-6
    amoeba_log_base: float = math.e

    # Certificates
    fourier_height: int = 2  # default frequency set: nonzero l with |l|_1 <= height
    max_enumeration_terms: int = 64  # guard for subset enumerations

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="TROPICAL_",
        case_sensitive=False,
    )

    @field_validator("amoeba_window", mode="before")
    @classmethod
    def parse_amoeba_window(cls, v):
        return parse_window(v)

    @field_validator("log_level")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {v}")
        return level

    def validate_ranges(self) -> None:
        """
        Validate numeric settings that must be consistent with each other.
        Raises ValueError listing every violation at once.
        """
        errors = []

        lo, hi = self.amoeba_window
        if not lo < hi:
            errors.append(f"TROPICAL_AMOEBA_WINDOW must satisfy LO < HI, got {lo}:{hi}")

        if self.amoeba_grid < 2:
            errors.append("TROPICAL_AMOEBA_GRID must be at least 2")

        if self.amoeba_residual_tolerance <= 0:
            errors.append("TROPICAL_AMOEBA_RESIDUAL_TOLERANCE must be positive")

        if self.amoeba_log_base <= 1:
            errors.append("TROPICAL_AMOEBA_LOG_BASE must be greater than 1")

        if self.fourier_height < 1:
            errors.append("TROPICAL_FOURIER_HEIGHT must be at least 1")

        if self.max_enumeration_terms < 1:
            errors.append("TROPICAL_MAX_ENUMERATION_TERMS must be at least 1")

        if errors:
            error_msg = "Configuration validation failed:\n" + "\n".join(
                f"  - {e}" for e in errors
            )
            logger.error(error_msg)
            raise ValueError(error_msg)

        logger.debug("Configuration validation passed")


@lru_cache()
def get_settings() -> Settings:
    settings = Settings()
    try:
        settings.validate_ranges()
    except ValueError as e:
        if not settings.debug:
            raise
        logger.warning(f"Continuing in debug mode despite configuration issues: {e}")
    return settings
