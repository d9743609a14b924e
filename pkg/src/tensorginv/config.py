"""
Runtime configuration.

Settings come from TENSORGINV_* environment variables (a .env file is loaded
by the CLI), with built-in defaults for everything. RunConfig is the parsed
command line; CLI flags override Settings.
"""
import os
import logging
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

ENV_PREFIX = "TENSORGINV_"


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logging.warning(f"Ignoring malformed {ENV_PREFIX}{name}={raw!r}, using {default}")
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logging.warning(f"Ignoring malformed {ENV_PREFIX}{name}={raw!r}, using {default}")
        return default


class Settings(BaseModel):
    """Tolerance policy and harness defaults"""

    verify_tol: float = 1e-10
    equality_tol: float = 1e-8
    subspace_tol: float = 1e-8
    solve_tol: float = 1e-8
    repeats: int = 30
    seed: int = 0
    out_dir: str = "reports"
    workers: int = 4
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            verify_tol=_env_float("VERIFY_TOL", 1e-10),
            equality_tol=_env_float("EQUALITY_TOL", 1e-8),
            subspace_tol=_env_float("SUBSPACE_TOL", 1e-8),
            solve_tol=_env_float("SOLVE_TOL", 1e-8),
            repeats=max(1, _env_int("REPEATS", 30)),
            seed=_env_int("SEED", 0),
            out_dir=os.getenv(ENV_PREFIX + "OUT_DIR", "reports"),
            workers=max(1, _env_int("WORKERS", 4)),
            log_level=os.getenv(ENV_PREFIX + "LOG_LEVEL", "INFO").upper(),
        )


# Module defaults used when callers pass tol=None.
DEFAULTS = Settings()


class RunConfig(BaseModel):
    """One CLI invocation, serializable for reports"""

    command: str
    input_path: Optional[str] = None
    z_path: Optional[str] = None
    x_path: Optional[str] = None
    y_path: Optional[str] = None
    rhs: Optional[str] = None
    kinds: List[str] = Field(default_factory=list)
    system: Optional[str] = None
    mode: Optional[str] = None
    problems: List[str] = Field(default_factory=list)
    tol: Optional[float] = None
    repeats: int = 30
    out_dir: str = "reports"
    seed: int = 0
    sample_q: int = 0
    strict_range: bool = True

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in ("compute", "verify", "solve", "bench"):
            raise ValueError(f"unknown command {value!r}")
        return value

    @field_validator("kinds")
    @classmethod
    def _lower_kinds(cls, value: List[str]) -> List[str]:
        return [kind.strip().lower() for kind in value if kind.strip()]

    @field_validator("repeats")
    @classmethod
    def _positive_repeats(cls, value: int) -> int:
        if value < 1:
            raise ValueError("repeats must be >= 1")
        return value

    @field_validator("sample_q")
    @classmethod
    def _nonnegative_samples(cls, value: int) -> int:
        if value < 0:
            raise ValueError("sample_q must be >= 0")
        return value

    @field_validator("tol")
    @classmethod
    def _positive_tol(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 0:
            raise ValueError("tol must be positive")
        return value
