"""Digit-restricted Waring machinery: centred radix digits, ellipsephic
k-th powers, Weyl sums and their moments, additive energy, box norms,
sumset density and rational approximation."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, DigitWaringError, HypothesisViolated, NotFound
from .rng import SplitMix64

__all__ = [
    "__version__", "BudgetExceeded", "DigitWaringError", "HypothesisViolated", "NotFound",
    "SplitMix64",
]
