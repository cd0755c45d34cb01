"""Vectorized numpy implementations of the hot kernels.

This module is the reference backend: the jitted backend in
``numba_impl`` must produce bit-identical digits, uniforms and generated
values, and sums that agree to the final ulp. Scaling goes through a
shared power-of-ten lookup table so both backends scale by exactly the
same constants.
"""
from __future__ import annotations

import math

import numpy as np

NAME = "numpy"

# decimal powers indexed by exponent + 308, built by decimal parsing so
# each entry is exactly the double a dataset literal like "1e-63" parses
# to (vectorized pow drifts one ulp off that for some thirty exponents)
POW10 = np.array([float(f"1e{k}") for k in range(-308, 309)], dtype=np.float64)
POW10.setflags(write=False)

# SplitMix64 constants
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
INV_2_53 = 2.0 ** -53

KIND_BENFORD = 0
KIND_UNIFORM_DIGIT = 1
KIND_ROUNDED_UP = 2
KIND_MIXTURE = 3


def first_digits(values: np.ndarray) -> np.ndarray:
    """Leading significant decimal digit per element.

    Returns uint8 digits 1..9, with 0 marking elements that have no
    significant digit (zero, negative, nan or infinite).
    """
    v = np.asarray(values, dtype=np.float64)
    out = np.zeros(v.shape[0], dtype=np.uint8)
    ok = np.isfinite(v) & (v > 0.0)
    x = v[ok]
    if x.size == 0:
        return out
    e = np.floor(np.log10(x)).astype(np.int64)
    # divide by the decade's own table entry: an exact power of ten then
    # lands on exactly 1.0 (x / x), which a reciprocal multiply misses.
    # The second divide covers the subnormal tail below the table range
    # and is an exact no-op (/ 1.0) everywhere else.
    e1 = np.maximum(e, -308)
    m = x / POW10[e1 + 308]
    m = m / POW10[e - e1 + 308]
    # floor(log10) can land one decade off at representation boundaries
    m = np.where(m >= 10.0, m / 10.0, m)
    m = np.where(m >= 10.0, m / 10.0, m)
    m = np.where(m < 1.0, m * 10.0, m)
    out[ok] = m.astype(np.uint8)
    return out


def digit_counts(values: np.ndarray):
    """Counts of first digits 1..9 plus the number of excluded elements."""
    d = first_digits(values)
    bins = np.bincount(d, minlength=10)
    return bins[1:10].astype(np.int64), int(bins[0])


def compensated_sum(values: np.ndarray) -> float:
    """Sum with error compensation (exactly rounded here via fsum)."""
    return math.fsum(np.asarray(values, dtype=np.float64))


def uniform_block(seed: np.uint64, start: np.uint64, count: int) -> np.ndarray:
    """Uniforms in [0, 1) at positions start..start+count-1 of the stream.

    Position k of the stream seeded with s is splitmix64 applied to
    s + (k + 1) * GOLDEN; every position is addressable independently,
    which is what makes the generators reproducible under any slicing.
    """
    k = np.arange(1, count + 1, dtype=np.uint64) + np.uint64(start)
    z = np.uint64(seed) + k * GOLDEN
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * INV_2_53


def _pow10(x: np.ndarray) -> np.ndarray:
    # scalar libm pow per element: correctly rounded, hence identical to
    # the jitted backend; numpy's vectorized pow can be one ulp off
    return np.array([10.0 ** float(v) for v in x], dtype=np.float64)


def _uniform_digit_values(u: np.ndarray, decades: float) -> np.ndarray:
    # equidistributed first digit, uniform mantissa offset, uniform decade
    digit = 1.0 + np.floor(9.0 * u[:, 1])
    mantissa = digit + u[:, 2]
    exponent = np.floor(decades * u[:, 3]).astype(np.int64)
    return mantissa * POW10[exponent + 308]


def generate_values(kind: int, n: int, decades: int, tamper_fraction: float,
                    seed: np.uint64, start_slot: np.uint64) -> np.ndarray:
    """Draw n synthetic amounts; each sample owns four stream slots."""
    dec = float(decades)
    u = uniform_block(seed, start_slot, 4 * n).reshape(n, 4)
    if kind == KIND_BENFORD:
        return _pow10(dec * u[:, 1])
    if kind == KIND_UNIFORM_DIGIT:
        return _uniform_digit_values(u, dec)
    if kind == KIND_ROUNDED_UP:
        t = dec * u[:, 1]
        e = np.floor(t)
        mantissa = _pow10(t - e)
        return np.ceil(mantissa) * POW10[e.astype(np.int64) + 308]
    if kind == KIND_MIXTURE:
        clean = _pow10(dec * u[:, 1])
        tampered = _uniform_digit_values(u, dec)
        return np.where(u[:, 0] < tamper_fraction, tampered, clean)
    raise ValueError(f"unknown generator kind code {kind}")
