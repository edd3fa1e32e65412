"""
Application settings loaded from environment variables.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings; every field has a default that reproduces the fixtures."""

    model_config = SettingsConfigDict(env_file=".env", env_prefix="SGPOINTS_")

    # Logging
    log_level: str = "INFO"

    # Solver limits
    max_adjunctions: int = 4  # automatic tower extensions per solve
    max_elimination_steps: int = 64  # resultant steps per system
    root_of_unity_search: int = 96  # largest order probed for roots of unity

    # paper-suite
    suite_workers: int = 4

    # HTTP surface
    api_key: str = ""
    debug: bool = False


@lru_cache
def get_settings() -> Settings:
    return Settings()
