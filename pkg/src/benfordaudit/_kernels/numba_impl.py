"""Numba-jitted implementations of the hot kernels.

Mirrors ``numpy_impl`` exactly: same SplitMix64 stream, same power-of-ten
table, same scaling order, so digits, uniforms and generated values are
bit-identical across backends. Compensation in the summation kernel
requires strict IEEE semantics, hence no fastmath anywhere.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .numpy_impl import (
    GOLDEN,
    INV_2_53,
    KIND_BENFORD,
    KIND_MIXTURE,
    KIND_ROUNDED_UP,
    KIND_UNIFORM_DIGIT,
    MIX1,
    MIX2,
    POW10,
)

NAME = "numba"

_U64_1 = np.uint64(1)
_U64_2 = np.uint64(2)
_U64_3 = np.uint64(3)


@njit(cache=True)
def _digit_of(x: float) -> int:
    if not math.isfinite(x) or x <= 0.0:
        return 0
    e = int(math.floor(math.log10(x)))
    e1 = e if e >= -308 else -308   # second divide handles the subnormal tail
    m = x / POW10[e1 + 308]
    m = m / POW10[e - e1 + 308]
    if m >= 10.0:
        m /= 10.0
    if m >= 10.0:
        m /= 10.0
    if m < 1.0:
        m *= 10.0
    return int(m)


@njit(cache=True)
def first_digits(values: np.ndarray) -> np.ndarray:
    out = np.zeros(values.shape[0], dtype=np.uint8)
    for i in range(values.shape[0]):
        out[i] = _digit_of(values[i])
    return out


@njit(cache=True)
def digit_counts(values: np.ndarray):
    counts = np.zeros(9, dtype=np.int64)
    excluded = 0
    for i in range(values.shape[0]):
        d = _digit_of(values[i])
        if d == 0:
            excluded += 1
        else:
            counts[d - 1] += 1
    return counts, excluded


@njit(cache=True)
def compensated_sum(values: np.ndarray) -> float:
    # Neumaier variant of Kahan summation
    s = 0.0
    c = 0.0
    for i in range(values.shape[0]):
        x = values[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


@njit(cache=True)
def _mix(z: np.uint64) -> np.uint64:
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _u_at(seed: np.uint64, pos: np.uint64) -> float:
    z = seed + (pos + _U64_1) * GOLDEN
    return (_mix(z) >> np.uint64(11)) * INV_2_53


@njit(cache=True)
def uniform_block(seed: np.uint64, start: np.uint64, count: int) -> np.ndarray:
    out = np.empty(count, dtype=np.float64)
    for i in range(count):
        out[i] = _u_at(seed, start + np.uint64(i))
    return out


@njit(cache=True)
def generate_values(kind: int, n: int, decades: int, tamper_fraction: float,
                    seed: np.uint64, start_slot: np.uint64) -> np.ndarray:
    out = np.empty(n, dtype=np.float64)
    dec = float(decades)
    for i in range(n):
        base = start_slot + np.uint64(4 * i)
        if kind == KIND_MIXTURE:
            tampered = _u_at(seed, base) < tamper_fraction
        elif kind == KIND_UNIFORM_DIGIT:
            tampered = True
        else:
            tampered = False
        u1 = _u_at(seed, base + _U64_1)
        if tampered:
            digit = 1.0 + math.floor(9.0 * u1)
            mantissa = digit + _u_at(seed, base + _U64_2)
            expo = int(math.floor(dec * _u_at(seed, base + _U64_3)))
            out[i] = mantissa * POW10[expo + 308]
        elif kind == KIND_ROUNDED_UP:
            t = dec * u1
            e = int(math.floor(t))
            mantissa = 10.0 ** (t - e)
            out[i] = math.ceil(mantissa) * POW10[e + 308]
        else:
            out[i] = 10.0 ** (dec * u1)
    return out


def warmup() -> None:
    """Force compilation of every jitted kernel."""
    tiny = np.array([1.0, 2.5, 0.0], dtype=np.float64)
    first_digits(tiny)
    digit_counts(tiny)
    compensated_sum(tiny)
    uniform_block(np.uint64(1), np.uint64(0), 2)
    for kind in (KIND_BENFORD, KIND_UNIFORM_DIGIT, KIND_ROUNDED_UP, KIND_MIXTURE):
        generate_values(kind, 2, 3, 0.5, np.uint64(1), np.uint64(0))
