"""
Runtime settings for jetbig.

Values come from the environment (prefix JETBIG_) or a local .env file.

Usage:
    from jetbig.config import get_settings
    settings = get_settings()
    settings.threads        # worker cap for sample matrices
"""
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    threads: int = 1
    log_dir: str = ""
    log_level: str = "WARNING"
    d_max: int = 60
    max_period: int = 420
    sample_budget: int = 400_000
    held_out: int = 2
    full_branch_limit: int = 12
    s_prime_l_bound: Literal["cn", "3n"] = "cn"
    witness_step: str = "1/20"
    census_n: int = 12

    model_config = SettingsConfigDict(env_file=".env", env_prefix="JETBIG_", extra="ignore")

    @field_validator("threads", "max_period", "sample_budget", "held_out", "census_n")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be >= 1, got {v}")
        return v

    @field_validator("d_max")
    @classmethod
    def _d_max_range(cls, v: int) -> int:
        if v < 5:
            raise ValueError(f"d_max must be >= 5, got {v}")
        return v

    @field_validator("log_level")
    @classmethod
    def _level_name(cls, v: str) -> str:
        v = v.upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {v!r}")
        return v

    @field_validator("witness_step")
    @classmethod
    def _rational_step(cls, v: str) -> str:
        try:
            step = Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"witness_step is not a rational: {v!r}") from e
        if step <= 0:
            raise ValueError(f"witness_step must be positive, got {v!r}")
        return v

    @property
    def witness_step_value(self) -> Fraction:
        return Fraction(self.witness_step)


@lru_cache
def get_settings() -> Settings:
    return Settings()
