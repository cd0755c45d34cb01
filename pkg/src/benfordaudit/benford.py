"""The first-digit law: probabilities, digit extraction, expected counts.

The law assigns the leading significant digit d of a positive amount the
probability log10(1 + 1/d). Digit 1 is expected in roughly 30.1% of
genuine monetary data, digit 9 in under 4.6%; the distribution is
invariant under rescaling by any power of ten.
"""
from __future__ import annotations

import math

import numpy as np

from ._backend import kernels
from .errors import DomainError

__all__ = [
    "DIGITS",
    "BL1_PROBABILITIES",
    "bl1_probability",
    "bl1_probabilities",
    "first_significant_digit",
    "first_significant_digits",
    "expected_counts",
]

DIGITS = tuple(range(1, 10))

# P(d) = log10(1 + 1/d) for d = 1..9, index 0 holding digit 1; built from
# scalar log10 so the vector is bit-identical to bl1_probability()
BL1_PROBABILITIES = np.array([math.log10(1.0 + 1.0 / d) for d in DIGITS])
BL1_PROBABILITIES.setflags(write=False)


def bl1_probability(d: int) -> float:
    """Probability that the first significant digit equals ``d``."""
    if d not in DIGITS:
        raise DomainError(f"first digit must be an integer in 1..9, got {d!r}")
    return math.log10(1.0 + 1.0 / d)


def bl1_probabilities() -> np.ndarray:
    """All nine first-digit probabilities as a read-only vector."""
    return BL1_PROBABILITIES


def first_significant_digit(x) -> int:
    """Leading nonzero decimal digit of a positive finite amount.

    Accepts anything float() accepts. Raises DomainError for zero,
    negative or non-finite input: such records carry no significant
    digit and must be excluded (and counted) upstream.
    """
    xf = float(x)
    if not math.isfinite(xf) or xf <= 0.0:
        raise DomainError(f"no first significant digit for {x!r}")
    return int(kernels().first_digits(np.array([xf], dtype=np.float64))[0])


def first_significant_digits(values) -> np.ndarray:
    """Vectorized digit extraction.

    Returns a uint8 array with digits 1..9, and 0 wherever the element
    has no significant digit (zero, negative, nan or infinite).
    """
    arr = np.ascontiguousarray(values, dtype=np.float64)
    return kernels().first_digits(arr)


def expected_counts(n: int) -> np.ndarray:
    """Law-implied real-valued counts for a sample of ``n`` digits."""
    if n < 1:
        raise DomainError(f"sample size must be at least 1, got {n}")
    return float(n) * BL1_PROBABILITIES
