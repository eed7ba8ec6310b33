"""
Cliffpoint Constants
====================

Shared constants and enums for every cliffpoint module: precision policy,
golden values, published Mertens constants and named huge numbers.
"""

from enum import Enum
from typing import Dict, Tuple

# ============================================================================
# PRECISION POLICY
# ============================================================================

MIN_DIGITS = 30
DEFAULT_DIGITS = 50
GUARD_DIGITS = 10

# ============================================================================
# ENUMS
# ============================================================================

class OutputFormat(str, Enum):
    """Report output formats."""
    TEXT = "text"
    JSON = "json"
    CSV = "csv"

class LogLevel(Enum):
    """Log levels."""
    DEBUG = "debug"
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"
    CRITICAL = "critical"

class Ordering(Enum):
    """Result of comparing two huge numbers."""
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"

class ExitCode(int, Enum):
    """Process exit codes."""
    SUCCESS = 0
    USAGE = 2
    CHECKS_FAILED = 3
    CACHE_IO = 4

class SieveOrigin(str, Enum):
    """Where a sieve bitset came from."""
    MEMORY = "memory"
    FILE = "file"

# ============================================================================
# EULER-MACLAURIN CROSSINGS
# ============================================================================

# Guard against direct summation that cannot finish.
DIRECT_SUM_LIMIT = 10 ** 10
CROSSING_GUARD_DIGITS = 40
BISECTION_WIDTH = "0.25"
SCAN_HALF_WIDTH = 2
# A passing margin closer than this many remainder bounds is re-certified.
MARGIN_SAFETY_FACTOR = 10

# m -> (K, J) used for each row of the published crossing table.
TABLE1_PARAMS: Dict[int, Tuple[int, int]] = {
    1: (100, 1),
    2: (100, 1),
    3: (1000, 1),
    4: (1000, 2),
    5: (1000, 3),
    6: (1000, 3),
    7: (1000, 4),
    8: (1000, 5),
    9: (1000, 6),
    10: (1000, 7),
    11: (1000, 8),
    12: (1000, 8),
    13: (1000, 10),
    14: (1000, 10),
    15: (1000, 11),
    16: (1000, 12),
    17: (1000, 13),
    18: (1000, 14),
    19: (1000, 15),
    20: (1000, 16),
    100: (50000, 60),
}

# Largest M with sum_{k=0}^{M} 1/(mk+1) < 2*pi.
TABLE1_M: Dict[int, int] = {
    1: 299,
    2: 40248,
    3: 6699356,
    4: 1199640415,
    5: 222209538173,
    6: 41928392459412,
    7: 8000791810720605,
    8: 1537961933686185453,
    9: 297136851932007766218,
    10: 57616626381701142703593,
    11: 11202463675353183172586907,
    12: 2182608774487516995740392959,
    13: 425930131275278060684396950683,
    14: 83225800344072649528263059652618,
    15: 16279019516889202909861702224716180,
    16: 3186898150182578894413446451622161442,
    17: 624331345650550634164994069452043597341,
    18: 122382651928233262387099042295616064808177,
    19: 24001760343280992647777613927571508451532532,
    20: 4709265577657827035628502288018792360631413283,
    100: int(
        "15930636153764656093549951961696713197434975028940"
        "85877192998763567162101035983381719598376913882972"
        "95285352168437589967676947222915769714257521188927"
        "15116548003599042566741587106668007049302125094673"
        "665769807765071841758755530945"
    ),
}

# Harmonic series passing 100 (K, J).
HARMONIC_100_PARAMS: Tuple[int, int] = (10000, 10)
HARMONIC_100_DIGITS = 44

# ============================================================================
# SINC IDENTITY
# ============================================================================

MAX_SINC_LENGTH = 24
MAX_PIECES = 1 << 12
DIRECT_LHS_TERM_CAP = 200_000
DEFAULT_DIRECT_TOL = "1e-6"

# ============================================================================
# PRIMES IN ARITHMETIC PROGRESSIONS
# ============================================================================

DEFAULT_SIEVE_LIMIT = 10 ** 7
MAX_SIEVE_LIMIT = 4 * 10 ** 9
SIEVE_SEGMENT_ODDS = 1 << 20
SIEVE_MAGIC = b"SVC1"
SIEVE_CACHE_ENV = "CLIFFPOINT_CACHE"
SIEVE_CACHE_SUFFIX = ".svc"

# Meissel-Mertens constant B (OEIS A077761).
MERTENS_B = "0.26149721284764278375542683860869585905156664826120"

CUTOFF_GUARD_DIGITS = 30

# (q, a) -> published M(q, a) at the precision the examples use.
PUBLISHED_MQA: Dict[Tuple[int, int], str] = {
    (3, 1): "-0.3568904795",
    (10, 1): "-0.2088344774302376",
    (10, 3): "0.1386504057476469",
    (10, 7): "-0.1039035249178728",
    (10, 9): "-0.2644151905518937",
    (100, 1): (
        "-0.0327328506433100964865591320930048072116438944230"
        "5808121239698784116683056664327790581593738706166"
        "32469149389219354796589435060666487892"
    ),
}

# Observed values of the x = 10^7 estimate for large moduli.
OBSERVED_MQA: Dict[Tuple[int, int], str] = {
    (269, 2): "0.49776",
    (9999, 1): "-0.0004",
    (9999, 2): "0.49959",
}

# Worked examples: label -> (q, a).
CUTOFF_EXAMPLES: Dict[str, Tuple[int, int]] = {
    "A": (3, 1),
    "B": (10, 1),
    "C": (10, 3),
    "D": (10, 7),
    "E": (10, 9),
    "F": (100, 1),
}

EXAMPLE_F_EXPONENT = int(
    "2272586775359001684288392849910387559794317395514706629"
    "6853514124083426515979578332298510630142796585419982817"
)

# ============================================================================
# HUGE NUMBERS
# ============================================================================

# Largest known prime P = 2^LARGEST_KNOWN_PRIME_EXPONENT - 1.
LARGEST_KNOWN_PRIME_EXPONENT = 43112609
LARGEST_KNOWN_PRIME_DIGITS = 12978189

SKEWES_1_TOP = "79"
SKEWES_2_TOP = "7.705"
BAYS_HUDSON_CROSSING = "1.39822e316"

# Expanding exp(v) is refused once v exceeds this.
TOWER_EXPANSION_LIMIT = 10 ** 6
TOWER_SNAP_DIGITS = 5

LEMMA_RATIO_POINTS = ("0.4", "0.5", "1", "2", "5", "10", "50")
LEMMA_DOUBLING_POINTS = ("0.7", "1", "2", "5")
LEMMA_QUOTIENT_POINTS = ("2", "5", "10", "50")

# ============================================================================
# UTILITY MAPPINGS
# ============================================================================

LOG_LEVELS = {
    LogLevel.DEBUG: "debug",
    LogLevel.INFO: "info",
    LogLevel.WARNING: "warning",
    LogLevel.ERROR: "error",
    LogLevel.CRITICAL: "critical"
}
