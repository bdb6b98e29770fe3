"""Runtime settings: defaults, optional .env file, environment, then explicit overrides."""
from __future__ import annotations

import os
from pathlib import Path
from typing import Any

from dotenv import dotenv_values
from pydantic import BaseModel, Field

ROOT = Path(__file__).resolve().parent.parent
ENV_PATH = ROOT / ".env"

ENV_PREFIX = "RENYI_"


class Settings(BaseModel):
    """Tunable tolerances and execution knobs."""
    tie_tol: float = Field(default=1e-9, gt=0, description="Absolute tolerance for special-line classification")
    series_tol: float = Field(default=1e-13, gt=0, description="Absolute tail tolerance of the series oracle")
    max_workers: int = Field(default=8, ge=1, description="Thread pool size for sweeps")
    log_level: str = Field(default="INFO", description="Root logging level")


def load_env() -> dict[str, str]:
    """Merge the optional .env file with the process environment (environment wins)."""
    env = dotenv_values(ENV_PATH) if ENV_PATH.exists() else {}
    env.update(os.environ)
    return {k: v for k, v in env.items() if v is not None}


def load_settings(**overrides: Any) -> Settings:
    """Build Settings from RENYI_* variables, then apply non-None keyword overrides."""
    env = load_env()
    values: dict[str, Any] = {}
    for name in Settings.model_fields:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = raw
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Settings(**values)
