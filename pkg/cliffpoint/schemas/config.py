"""
Run configuration and the report envelope written by the command line.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, validator

from ..constants import (
    DEFAULT_DIGITS,
    DEFAULT_SIEVE_LIMIT,
    MAX_SIEVE_LIMIT,
    MIN_DIGITS,
    LogLevel,
    OutputFormat,
)
from .numerics import PrecisionContext


class RunConfig(BaseModel):
    """Options shared by every command."""
    digits: Optional[int] = Field(default=None, ge=MIN_DIGITS, description="Precision override; per-command policy when unset")
    sieve_limit: int = Field(default=DEFAULT_SIEVE_LIMIT, ge=2, le=MAX_SIEVE_LIMIT, description="Default sieve bound")
    cache_dir: Optional[Path] = Field(default=None, description="Sieve cache directory")
    output: OutputFormat = Field(default=OutputFormat.TEXT, description="Report format")
    log_level: LogLevel = Field(default=LogLevel.WARNING, description="Logging level")

    class Config:
        frozen = True

    @validator("output", pre=True)
    def validate_output(cls, v):
        if isinstance(v, str):
            return OutputFormat(v.lower())
        return v

    @validator("log_level", pre=True)
    def validate_log_level(cls, v):
        if isinstance(v, str):
            return LogLevel(v.lower())
        return v

    def context(self, default: int = DEFAULT_DIGITS) -> PrecisionContext:
        return PrecisionContext(digits=self.digits if self.digits is not None else default)


class CommandReport(BaseModel):
    """Envelope of every machine-readable report."""
    command: str = Field(description="Command that produced the report")
    inputs: Dict[str, Any] = Field(default_factory=dict, description="Resolved inputs")
    outputs: Any = Field(description="Command results, JSON-safe")
    precision_digits: int = Field(description="Working precision of the run")
    rigorous: bool = Field(description="True only for fully certified crossings")

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), sort_keys=True, indent=2)
