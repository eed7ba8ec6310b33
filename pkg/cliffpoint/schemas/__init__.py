"""
Pydantic schemas for cliffpoint.
"""

from .numerics import BigReal, PrecisionContext

from .series import (
    SeriesSpec,
    EMParams,
    CrossingChecks,
    CrossingResult
)

from .sinc import (
    SincSequence,
    PiecewisePoly,
    IdentityReport
)

from .primes import (
    APClass,
    MertensEstimate,
    CutoffEstimate
)

from .towers import (
    TowerReal,
    NamedConstants,
    SkewesReport,
    Section8Report,
    LemmaReport
)

from .config import (
    RunConfig,
    CommandReport
)

__all__ = [
    # Precision
    "BigReal",
    "PrecisionContext",

    # Series crossings
    "SeriesSpec",
    "EMParams",
    "CrossingChecks",
    "CrossingResult",

    # Sinc identity
    "SincSequence",
    "PiecewisePoly",
    "IdentityReport",

    # Primes
    "APClass",
    "MertensEstimate",
    "CutoffEstimate",

    # Towers
    "TowerReal",
    "NamedConstants",
    "SkewesReport",
    "Section8Report",
    "LemmaReport",

    # Run configuration
    "RunConfig",
    "CommandReport"
]
