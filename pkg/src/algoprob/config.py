"""Configuration management for algoprob."""

import sys
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


class Settings(BaseSettings):
    """Application settings loaded from environment and config file."""

    model_config = SettingsConfigDict(
        env_prefix="ALGOPROB_",
        env_file=".env",
        extra="ignore",
    )

    # Parallelism
    workers: int = Field(default=1, ge=1, le=512, description="Worker processes for machine-space shards")
    shards_per_worker: int = Field(
        default=4, ge=1, description="Index shards planned per worker"
    )

    # Machine-space budget
    max_states: int = Field(
        default=4, ge=1, le=4, description="Largest n accepted for (n,2) enumeration"
    )
    long_running_states: int = Field(
        default=4, ge=1, description="Warn when n reaches this value"
    )
    default_cap: int = Field(default=1000, ge=1, description="Default step cap per run")

    # Statistics
    default_seed: int = Field(
        default=42, ge=0, lt=2**64, description="Seed used when none is given"
    )
    permutations: int = Field(
        default=999, ge=1, description="Shuffles used for permutation p-values"
    )

    @classmethod
    def load(cls) -> "Settings":
        """Load settings from environment and config file."""
        config_path = Path.home() / ".algoprob" / "config.toml"
        file_settings = {}

        if config_path.exists():
            try:
                with open(config_path, "rb") as f:
                    file_settings = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise ValueError(
                    f"Invalid TOML in config file '{config_path}': {e}"
                ) from e
            except PermissionError as e:
                raise ValueError(
                    f"Cannot read config file '{config_path}': permission denied"
                ) from e
            except OSError as e:
                raise ValueError(
                    f"Cannot read config file '{config_path}': {e}"
                ) from e

        return cls(**file_settings)


# Global settings instance
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get or create the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings.load()
    return _settings


def reset_settings() -> None:
    """Reset settings (useful for testing)."""
    global _settings
    _settings = None
