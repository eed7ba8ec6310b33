"""
Cliffpoint Utility Functions
============================

Small pure helpers shared by the command line and the reports.

Function Categories:
- Parsing: parse_m_range, parse_limit, parse_widths
- Formatting: format_real, format_scientific, abbreviate_digits
- Serialization: to_json_safe, flatten_row

Usage:
    from cliffpoint.utils import parse_m_range, to_json_safe
"""

import re
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

from mpmath import mp, mpf
from pydantic import BaseModel

# ============================================================================
# PARSING
# ============================================================================

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_m_range(text: str) -> List[int]:
    """
    Parse "1..20", "2,5,9" or "100" into a list of m values.

    Args:
        text: Range expression

    Returns:
        Values in the order given, ranges inclusive
    """
    values: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        match = _RANGE.match(part)
        if match:
            lo, hi = int(match.group(1)), int(match.group(2))
            if lo > hi:
                raise ValueError(f"empty range {part!r}")
            values.extend(range(lo, hi + 1))
        elif part.isdigit():
            values.append(int(part))
        else:
            raise ValueError(f"cannot parse {part!r} as m or a range lo..hi")
    if not values:
        raise ValueError("no m values given")
    return values


def parse_limit(text: str) -> int:
    """
    Parse an integer limit written as "10000000", "1e7" or "10^7".

    Args:
        text: Limit expression

    Returns:
        The exact integer
    """
    text = text.strip().replace("_", "")
    if "^" in text or "**" in text:
        base, exp = re.split(r"\^|\*\*", text, maxsplit=1)
        return int(base) ** int(exp)
    value = Fraction(text)
    if value.denominator != 1:
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def parse_widths(text: str) -> List[Fraction]:
    """Comma-separated widths such as "1, 1/3, 0.2" as exact fractions."""
    widths = []
    for part in text.split(","):
        part = part.strip()
        if part:
            widths.append(Fraction(part))
    if not widths:
        raise ValueError("no widths given")
    return widths


# ============================================================================
# FORMATTING
# ============================================================================

def format_real(value: mpf, digits: int) -> str:
    """Deterministic decimal string of an mpf to `digits` significant digits."""
    return mp.nstr(value, digits, min_fixed=-6, max_fixed=digits)


def format_scientific(mantissa: mpf, exponent: int, places: int = 3) -> str:
    """mantissa * 10^exponent as "3.8e254255"."""
    return f"{mp.nstr(mantissa, places)}e{exponent}"


def abbreviate_digits(text: str, max_length: int = 60, keep: int = 20) -> str:
    """
    Shorten a long digit string for text output.

    Args:
        text: Digit string
        max_length: Length above which the middle is elided
        keep: Digits kept at each end

    Returns:
        The string, or its ends joined by "..." with the digit count
    """
    if len(text) <= max_length:
        return text
    return f"{text[:keep]}...{text[-keep:]} ({len(text)} digits)"


# ============================================================================
# SERIALIZATION
# ============================================================================

def to_json_safe(obj: Any, digits: int) -> Any:
    """
    Convert a report value into JSON-compatible data.

    mpf values become decimal strings with `digits` significant digits,
    Fractions become "p/q", enums their values, pydantic models dicts.
    Integers are kept, so callers pass big integers as strings.
    """
    if isinstance(obj, BaseModel):
        return {k: to_json_safe(getattr(obj, k), digits) for k in type(obj).model_fields}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, mpf):
        return format_real(obj, digits)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_json_safe(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json_safe(v, digits) for v in obj]
    if isinstance(obj, float):
        return format_real(mp.mpf(obj), digits)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def flatten_row(row: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Flatten nested dicts into dotted keys for CSV output."""
    flat: Dict[str, Any] = {}
    for key, value in row.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_row(value, prefix=f"{name}."))
        else:
            flat[name] = value
    return flat
