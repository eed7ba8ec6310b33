"""
Cliffpoint
==========

Where the sinc sum/integral identity stops holding: exact series crossings,
cutoffs for primes in arithmetic progressions, desk-scale evaluation of both
sides of the identity, and comparisons of the resulting huge numbers.
"""

__version__ = "0.1.0"
__author__ = "Cliffpoint"

from . import constants

__all__ = ['constants']
