"""Digit-frequency tabulation and chi-square conformity testing.

A group of amounts is reduced to counts of first digits 1..9, compared to
the law's expectations with Pearson's statistic on 8 degrees of freedom,
and classified against two critical values: conforming at or below the
lenient one, marginal between the two, nonconforming above the strict one.
Values exactly on a boundary take the lower (less anomalous) class.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from ._backend import kernels
from .benford import BL1_PROBABILITIES, expected_counts
from .errors import DomainError, EmptyInput

__all__ = [
    "CHI_SQUARE_DF",
    "CRITICAL_VALUES_DF8",
    "DEFAULT_THRESHOLDS",
    "Conformity",
    "Thresholds",
    "DigitFrequencyTable",
    "ConfidenceBand",
    "ConformityResult",
    "Chi2SetSummary",
    "count_first_digits",
    "chi_square_statistic",
    "classify",
    "confidence_band",
    "evaluate_table",
    "mean_chi2",
    "chi2_set_summary",
    "critical_value_df8",
]

logger = logging.getLogger(__name__)

CHI_SQUARE_DF = 8

# chi-square critical values at df = 8 for the significance levels the
# command line accepts (upper tail)
CRITICAL_VALUES_DF8 = {
    0.01: 20.090,
    0.025: 17.535,
    0.05: 15.507,
    0.10: 13.362,
    0.20: 11.030,
}


def critical_value_df8(alpha: float) -> float:
    """Upper-tail critical value at df = 8 for a supported alpha."""
    try:
        return CRITICAL_VALUES_DF8[alpha]
    except KeyError:
        supported = ", ".join(str(a) for a in sorted(CRITICAL_VALUES_DF8))
        raise DomainError(
            f"no critical value tabulated for alpha={alpha}; supported: {supported}"
        ) from None


class Conformity(IntEnum):
    """Ordered conformity classes; greater means more anomalous."""

    CONFORMING = 0
    MARGINAL = 1
    NONCONFORMING = 2

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class Thresholds:
    """Critical values (df = 8) splitting the three conformity classes.

    ``chi2_strict`` is the 5%-significance critical value and bounds the
    nonconforming class from below; ``chi2_lenient`` is the 10% one and
    bounds the conforming class from above.
    """

    chi2_strict: float = 15.507
    chi2_lenient: float = 13.362
    alpha_strict: float = 0.05
    alpha_lenient: float = 0.10

    def __post_init__(self):
        if not (0.0 < self.chi2_lenient < self.chi2_strict):
            raise DomainError(
                "lenient critical value must be positive and below the strict one"
            )

    @classmethod
    def from_alphas(cls, alpha_strict: float = 0.05, alpha_lenient: float = 0.10
                    ) -> "Thresholds":
        return cls(
            chi2_strict=critical_value_df8(alpha_strict),
            chi2_lenient=critical_value_df8(alpha_lenient),
            alpha_strict=alpha_strict,
            alpha_lenient=alpha_lenient,
        )


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class DigitFrequencyTable:
    """First-digit counts for one group of amounts.

    ``counts[i]`` is the number of amounts whose first digit is ``i + 1``;
    ``n`` is their total and ``excluded`` the number of amounts dropped
    for having no significant digit.
    """

    counts: np.ndarray
    n: int
    excluded: int = 0

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64).copy()
        if c.shape != (9,):
            raise DomainError(f"counts must have exactly nine entries, got shape {c.shape}")
        if (c < 0).any():
            raise DomainError("digit counts must be nonnegative")
        if int(c.sum()) != self.n:
            raise DomainError(f"counts sum to {int(c.sum())}, declared n is {self.n}")
        if self.excluded < 0:
            raise DomainError("excluded count must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def frequencies(self) -> np.ndarray:
        """Relative frequencies counts / n."""
        if self.n == 0:
            raise EmptyInput("frequency table holds no digits")
        return self.counts / self.n


@dataclass(frozen=True)
class ConfidenceBand:
    """Sampling band around the law's probabilities.

    Half-width ``sigma`` is multiplier / sqrt(n - 1); the lower edge may
    be negative for very small n and is reported as computed.
    """

    sigma: float
    lower: np.ndarray
    upper: np.ndarray


@dataclass(frozen=True)
class ConformityResult:
    """Outcome of testing one digit-frequency table against the law."""

    chi2: float
    df: int
    classification: Conformity
    per_digit_deviation: np.ndarray
    band: Optional[ConfidenceBand]

    @property
    def label(self) -> str:
        return self.classification.label


@dataclass(frozen=True)
class Chi2SetSummary:
    """Histogram plus flagged outliers for a collection of statistics."""

    bin_edges: np.ndarray
    bin_counts: np.ndarray
    outliers: tuple
    threshold: float


def count_first_digits(values) -> DigitFrequencyTable:
    """Tabulate first digits of a group of amounts.

    Amounts without a significant digit (zero, negative, non-finite) are
    excluded from the counts, tallied in ``excluded`` and reported via a
    warning. Raises EmptyInput when nothing at all survives.
    """
    arr = np.ascontiguousarray(values, dtype=np.float64)
    counts, excluded = kernels().digit_counts(arr)
    n = int(counts.sum())
    if excluded:
        logger.warning(
            "excluded %d amount(s) without a significant digit "
            "(zero, negative or non-finite)", excluded,
        )
    if n == 0:
        raise EmptyInput("no positive finite amounts to tabulate")
    return DigitFrequencyTable(counts=counts, n=n, excluded=int(excluded))


def _pearson_statistic(observed, expected) -> float:
    o = np.asarray(observed, dtype=np.float64)
    e = np.asarray(expected, dtype=np.float64)
    if o.shape != e.shape:
        raise DomainError("observed and expected must have equal shape")
    if (e <= 0).any():
        raise DomainError("expected counts must be positive")
    return float((((o - e) ** 2) / e).sum())


def chi_square_statistic(table: DigitFrequencyTable) -> float:
    """Pearson statistic of the table against law expectations (df = 8)."""
    if table.n == 0:
        raise EmptyInput("cannot test an empty frequency table")
    return _pearson_statistic(table.counts, expected_counts(table.n))


def classify(chi2: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Conformity:
    """Map a statistic to its conformity class; boundaries take the lower class."""
    if not math.isfinite(chi2) or chi2 < 0.0:
        raise DomainError(f"chi-square statistic must be finite and nonnegative, got {chi2}")
    if chi2 <= thresholds.chi2_lenient:
        return Conformity.CONFORMING
    if chi2 <= thresholds.chi2_strict:
        return Conformity.MARGINAL
    return Conformity.NONCONFORMING


def confidence_band(n: int, multiplier: float = 1.0) -> ConfidenceBand:
    """Band of half-width multiplier / sqrt(n - 1) around the law.

    Needs n >= 2; a single observation admits no sampling band.
    """
    if n < 2:
        raise DomainError(f"a confidence band needs at least two observations, got {n}")
    if not (math.isfinite(multiplier) and multiplier > 0.0):
        raise DomainError(f"band multiplier must be positive and finite, got {multiplier}")
    sigma = multiplier / math.sqrt(n - 1)
    return ConfidenceBand(
        sigma=sigma,
        lower=BL1_PROBABILITIES - sigma,
        upper=BL1_PROBABILITIES + sigma,
    )


def evaluate_table(table: DigitFrequencyTable,
                   thresholds: Thresholds = DEFAULT_THRESHOLDS,
                   band_multiplier: float = 1.0) -> ConformityResult:
    """Full conformity assessment of one digit-frequency table.

    The band is omitted (None) for single-observation tables, which are
    still tested and classified.
    """
    chi2 = chi_square_statistic(table)
    band = confidence_band(table.n, band_multiplier) if table.n >= 2 else None
    deviation = table.frequencies - BL1_PROBABILITIES
    deviation.setflags(write=False)
    return ConformityResult(
        chi2=chi2,
        df=CHI_SQUARE_DF,
        classification=classify(chi2, thresholds),
        per_digit_deviation=deviation,
        band=band,
    )


def mean_chi2(values: Sequence[float]) -> float:
    """Arithmetic mean of a sequence of statistics."""
    vals = [float(v) for v in values]
    if not vals:
        raise EmptyInput("mean of an empty statistic list")
    for v in vals:
        if not math.isfinite(v) or v < 0.0:
            raise DomainError(f"statistics must be finite and nonnegative, got {v}")
    return math.fsum(vals) / len(vals)


def chi2_set_summary(values, labels=None, *, bin_width: float = 2.0,
                     origin: float = 0.0, threshold: float | None = None
                     ) -> Chi2SetSummary:
    """Histogram a set of statistics and flag the ones above a threshold.

    Bins are half-open [edge, next_edge) starting at ``origin``; the last
    bin is chosen so the maximum falls inside it. Outliers are (label,
    value) pairs with value strictly above ``threshold`` (default: the
    strict critical value), ordered most anomalous first.
    """
    vals = np.asarray(list(values), dtype=np.float64)
    if vals.size == 0:
        raise EmptyInput("cannot summarize an empty statistic set")
    if not np.isfinite(vals).all():
        raise DomainError("statistics must be finite")
    if bin_width <= 0.0:
        raise DomainError(f"bin width must be positive, got {bin_width}")
    if float(vals.min()) < origin:
        raise DomainError("histogram origin lies above the smallest statistic")
    if threshold is None:
        threshold = DEFAULT_THRESHOLDS.chi2_strict
    if labels is None:
        labels = [str(i) for i in range(vals.size)]
    labels = [str(l) for l in labels]
    if len(labels) != vals.size:
        raise DomainError("need exactly one label per statistic")

    k = int((float(vals.max()) - origin) // bin_width) + 1
    edges = origin + bin_width * np.arange(k + 1, dtype=np.float64)
    counts, _ = np.histogram(vals, bins=edges)
    # np.histogram closes the last bin; that matches the half-open layout
    # here because the top edge lies strictly above the maximum
    flagged = [(labels[i], float(v)) for i, v in enumerate(vals) if v > threshold]
    flagged.sort(key=lambda item: (-item[1], item[0]))
    edges.setflags(write=False)
    counts = counts.astype(np.int64)
    counts.setflags(write=False)
    return Chi2SetSummary(
        bin_edges=edges,
        bin_counts=counts,
        outliers=tuple(flagged),
        threshold=float(threshold),
    )
