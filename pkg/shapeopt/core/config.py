"""Tool settings.

Only presentation concerns live here. Problem definitions are read from
versioned YAML files (see ``shapeopt.problem.loader``), never from the
environment, so numerical artifacts do not depend on the shell.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Tool settings.

    All settings can be overridden via ``SHAPEOPT_``-prefixed environment variables.
    """

    model_config = SettingsConfigDict(
        env_prefix="SHAPEOPT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    environment: Literal["development", "production"] = Field(
        default="development",
        description="'development' gives human-readable logs, 'production' gives JSON lines",
    )
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="INFO", description="Root log level"
    )


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


__all__ = ["Settings", "get_settings"]
