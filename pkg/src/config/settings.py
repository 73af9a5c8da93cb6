"""Application settings and configuration.

Process-wide defaults are read from the environment (prefix ``PDSPLIT_``)
or an optional ``.env`` file. Per-run choices live in the CLI run config.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Defaults shared by solvers, monitors, and the CLI."""

    model_config = SettingsConfigDict(
        env_prefix="PDSPLIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        frozen=True,
    )

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    log_renderer: Literal["console", "json"] = "console"

    monitor_abs_tol: float = Field(default=1e-9, ge=0, description="Absolute slack for inequality monitors")
    monitor_rel_tol: float = Field(
        default=1e-9, ge=0, description="Slack relative to the largest participating term"
    )

    power_iterations: int = Field(default=500, ge=1)
    probe_samples: int = Field(default=10_000, ge=1)
    oracle_grid_points: int = Field(default=2001, ge=1000)
    step_safety: float = Field(
        default=0.99, gt=0, lt=1, description="Factor applied to the largest certified step"
    )
    record_wall_time: bool = Field(
        default=False, description="Fill the wall_time trace column (breaks byte-reproducibility)"
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the cached process settings."""
    return Settings()
