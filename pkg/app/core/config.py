import logging
from pathlib import Path
from typing import List

from pydantic import field_validator
from pydantic_settings import BaseSettings

_PACKAGE_DIR = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    APP_NAME: str = "Leibniz Workbench"
    ENVIRONMENT: str = "development"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Catalog
    CATALOG_PATH: str = str(_PACKAGE_DIR / "catalog" / "data" / "catalog.json")
    SAMPLE_VALUES: List[str] = ["-2", "-1", "0", "1/2", "3"]
    EXTRA_SAMPLE_VALUES: List[str] = ["2", "-1/3", "5", "7/2"]
    SAMPLES_PER_ENTRY: int = 5

    # Verification
    MAX_WORKERS: int = 1
    RANDOM_SEED: int = 1729

    # Output
    OUTPUT_DIR: str = "."

    @field_validator("LOG_LEVEL")
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))():
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator("SAMPLES_PER_ENTRY")
    def validate_samples(cls, v: int) -> int:
        if v < 5:
            raise ValueError("At least 5 samples per catalog entry are required")
        return v

    @field_validator("MAX_WORKERS")
    def validate_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("MAX_WORKERS must be positive")
        return v

    @property
    def effective_log_level(self) -> str:
        return "DEBUG" if self.DEBUG else self.LOG_LEVEL

    class Config:
        env_file = [".env", ".env.local"]
        case_sensitive = True


settings = Settings()
