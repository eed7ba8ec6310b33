"""
Service modules for cliffpoint.
Contains the numeric algorithms; each module owns its exception hierarchy.
"""

from .numerics import NumericsError, DomainError, PrecisionError, bernoulli, digamma
from .euler_maclaurin import (
    CrossingError,
    ChecksFailed,
    PrecisionInsufficientError,
    DirectSumLimitError,
    solve_crossing,
)
from .piecewise import (
    SincIdentityError,
    OutOfDeskScaleError,
    LHSConvergenceError,
    convolve,
    box_density,
    density_value_at,
)
from .sinc_identity import identity_check, rhs_integral, lhs_sum_direct, lhs_sum_poisson
from .sieve import PrimeAPError, SieveLimitError, SieveCacheError, SieveCache, sieve, load_or_build
from .prime_ap import CutoffDomainError, mertens_estimate, cutoff_from_mertens, all_primes_cutoff
from .towers import TowerError, OverLoggingError, TowerParseError, UnexpandableError, normalize, compare

__all__ = [
    # Numerics
    "NumericsError",
    "DomainError",
    "PrecisionError",
    "bernoulli",
    "digamma",

    # Crossings
    "CrossingError",
    "ChecksFailed",
    "PrecisionInsufficientError",
    "DirectSumLimitError",
    "solve_crossing",

    # Sinc identity
    "SincIdentityError",
    "OutOfDeskScaleError",
    "LHSConvergenceError",
    "convolve",
    "box_density",
    "density_value_at",
    "identity_check",
    "rhs_integral",
    "lhs_sum_direct",
    "lhs_sum_poisson",

    # Primes
    "PrimeAPError",
    "SieveLimitError",
    "SieveCacheError",
    "SieveCache",
    "sieve",
    "load_or_build",
    "CutoffDomainError",
    "mertens_estimate",
    "cutoff_from_mertens",
    "all_primes_cutoff",

    # Towers
    "TowerError",
    "OverLoggingError",
    "TowerParseError",
    "UnexpandableError",
    "normalize",
    "compare",
]
