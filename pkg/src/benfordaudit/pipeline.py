"""The audit pipeline: per-group testing, time averaging, summaries.

Typical flow: parse a dataset, remap it onto a stable entity structure,
build a panel, then ``run_audit`` to obtain per-(region, year) conformity
reports, per-region multi-year summaries, regional and national totals,
and descriptive statistics of the totals.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from ._backend import kernels
from .conformance import (
    Chi2SetSummary,
    Conformity,
    ConformityResult,
    DEFAULT_THRESHOLDS,
    DigitFrequencyTable,
    Thresholds,
    chi2_set_summary,
    classify,
    count_first_digits,
    evaluate_table,
    mean_chi2,
)
from .datamodel import Panel
from .errors import DomainError, EmptyInput, MissingGroup

__all__ = [
    "DescriptiveStats",
    "RegionYearReport",
    "RegionSummary",
    "RegionalTotals",
    "AuditReport",
    "descriptive_stats",
    "analyze_region_year",
    "time_average_values",
    "summarize_region",
    "regional_totals",
    "run_audit",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DescriptiveStats:
    """Location, spread and shape of a batch of values.

    ``stddev`` uses the n-1 denominator, ``stderr`` is stddev / sqrt(n),
    ``rms`` is sqrt(mean of squares). ``skewness`` and ``kurtosis`` are the
    population moment ratios, kurtosis in excess form (normal data gives 0);
    both are NaN when the values are all equal.
    """

    n: int
    min: float
    max: float
    sum: float
    mean: float
    median: float
    rms: float
    stddev: float
    stderr: float
    skewness: float
    kurtosis: float


def descriptive_stats(values) -> DescriptiveStats:
    """Descriptive statistics of a batch of at least two finite values."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError("values must be one-dimensional")
    n = int(arr.shape[0])
    if n == 0:
        raise EmptyInput("no values to describe")
    if n < 2:
        raise DomainError("descriptive statistics need at least two values")
    if not np.isfinite(arr).all():
        raise DomainError("values must be finite")

    csum = kernels().compensated_sum
    total = csum(arr)
    mean = total / n
    rms = math.sqrt(csum(arr * arr) / n)
    centered = arr - mean
    m2 = csum(centered * centered) / n
    stddev = math.sqrt(m2 * n / (n - 1))
    if m2 > 0.0:
        # standardized residuals: m2**2 under/overflows for extreme scales
        z = centered / math.sqrt(m2)
        skewness = csum(z ** 3) / n
        kurtosis = csum(z ** 4) / n - 3.0
    else:
        skewness = math.nan
        kurtosis = math.nan
    return DescriptiveStats(
        n=n,
        min=float(arr.min()),
        max=float(arr.max()),
        sum=total,
        mean=mean,
        median=float(np.median(arr)),
        rms=rms,
        stddev=stddev,
        stderr=stddev / math.sqrt(n),
        skewness=skewness,
        kurtosis=kurtosis,
    )


@dataclass(frozen=True)
class RegionYearReport:
    """Conformity assessment of one (region, year) cell."""

    region_code: str
    year: int
    table: DigitFrequencyTable
    result: ConformityResult


@dataclass(frozen=True)
class RegionSummary:
    """Multi-year view of one region.

    ``mean_chi2`` averages the yearly statistics; ``time_avg_chi2`` tests
    the per-entity time-averaged amounts instead. The classification of
    the mean uses the same thresholds as the yearly tests.
    """

    region_code: str
    years: tuple
    n_by_year: tuple
    yearly_chi2: tuple
    mean_chi2: float
    mean_classification: Conformity
    time_avg_chi2: float
    time_avg_classification: Conformity


@dataclass(frozen=True)
class RegionalTotals:
    """Compensated totals by (region, year), national totals, and means."""

    by_group: Mapping
    national_by_year: Mapping
    region_means: Mapping
    national_mean: float


@dataclass(frozen=True)
class AuditReport:
    """Everything one audit run produces."""

    years: tuple
    thresholds: Thresholds
    band_multiplier: float
    reports: tuple
    summaries: tuple
    totals: RegionalTotals
    descriptive_by_year: Mapping
    descriptive_of_means: Optional[DescriptiveStats]
    yearly_chi2_summary: Chi2SetSummary
    mean_chi2_summary: Optional[Chi2SetSummary]

    @property
    def any_nonconforming(self) -> bool:
        return any(r.result.classification is Conformity.NONCONFORMING
                   for r in self.reports)


def analyze_region_year(panel: Panel, region: str, year: int,
                        thresholds: Thresholds = DEFAULT_THRESHOLDS,
                        band_multiplier: float = 1.0) -> RegionYearReport:
    """Tabulate and test one (region, year) group of the panel."""
    table = count_first_digits(panel.group(region, year))
    result = evaluate_table(table, thresholds, band_multiplier)
    return RegionYearReport(region_code=region, year=year, table=table, result=result)


def time_average_values(panel: Panel, region: str, years: Sequence[int]) -> np.ndarray:
    """Per-entity mean amount over a window of years.

    An entity missing some window years is averaged over the years it has;
    entities absent from the whole window are dropped (logged). Entities
    belong to the region of their latest record.
    """
    years = tuple(years)
    if not years:
        raise DomainError("the averaging window is empty")
    missing = [y for y in years if y not in panel.years]
    if missing:
        raise DomainError(f"panel has no data for year(s) {missing}")
    ids, rows = panel.entity_rows(region)
    cols = [panel.years.index(y) for y in years]
    window = rows[:, cols]
    present = ~np.isnan(window)
    counts = present.sum(axis=1)
    sums = np.where(present, window, 0.0).sum(axis=1)
    kept = counts > 0
    if not kept.all():
        logger.info("region %s: %d entit(ies) have no amounts in %s..%s",
                    region, int((~kept).sum()), years[0], years[-1])
    if not kept.any():
        raise EmptyInput(f"region {region!r} has no amounts in the window")
    return sums[kept] / counts[kept]


def summarize_region(panel: Panel, region: str, years: Sequence[int],
                     thresholds: Thresholds = DEFAULT_THRESHOLDS,
                     band_multiplier: float = 1.0) -> RegionSummary:
    """Yearly statistics, their mean, and the time-averaged test for one region."""
    years = tuple(years)
    if not years:
        raise DomainError("the summary window is empty")
    yearly = []
    sizes = []
    for year in years:
        report = analyze_region_year(panel, region, year, thresholds, band_multiplier)
        yearly.append(report.result.chi2)
        sizes.append(report.table.n)
    mean = mean_chi2(yearly)
    averaged = time_average_values(panel, region, years)
    avg_table = count_first_digits(averaged)
    avg_chi2 = evaluate_table(avg_table, thresholds, band_multiplier).chi2
    return RegionSummary(
        region_code=region,
        years=years,
        n_by_year=tuple(sizes),
        yearly_chi2=tuple(yearly),
        mean_chi2=mean,
        mean_classification=classify(mean, thresholds),
        time_avg_chi2=avg_chi2,
        time_avg_classification=classify(avg_chi2, thresholds),
    )


def regional_totals(panel: Panel, years: Sequence[int]) -> RegionalTotals:
    """Compensated amount totals per (region, year), per year, per region."""
    years = tuple(years)
    csum = kernels().compensated_sum
    by_group = {}
    for region in panel.regions:
        for year in years:
            if panel.has_group(region, year):
                by_group[(region, year)] = float(csum(panel.group(region, year)))
    national = {}
    for year in years:
        parts = np.asarray(
            [by_group[(r, year)] for r in panel.regions if (r, year) in by_group],
            dtype=np.float64,
        )
        if parts.size:
            national[year] = float(csum(parts))
    region_means = {}
    for region in panel.regions:
        vals = [by_group[(region, y)] for y in years if (region, y) in by_group]
        if vals:
            region_means[region] = math.fsum(vals) / len(vals)
    national_mean = (math.fsum(national.values()) / len(national)) if national else math.nan
    return RegionalTotals(
        by_group=by_group,
        national_by_year=national,
        region_means=region_means,
        national_mean=national_mean,
    )


def run_audit(panel: Panel, years: Optional[Sequence[int]] = None,
              thresholds: Thresholds = DEFAULT_THRESHOLDS,
              band_multiplier: float = 1.0) -> AuditReport:
    """Run the full audit over a panel.

    Regions missing a year are still tested for the years they have but
    get no multi-year summary; groups and years are processed in sorted
    order so the report layout is deterministic.
    """
    if years is None:
        years = panel.years
    years = tuple(int(y) for y in years)
    if not years:
        raise DomainError("no years to audit")
    missing = [y for y in years if y not in panel.years]
    if missing:
        raise DomainError(f"panel has no data for year(s) {missing}")

    reports = []
    for region in panel.regions:
        for year in years:
            if panel.has_group(region, year):
                reports.append(
                    analyze_region_year(panel, region, year, thresholds, band_multiplier))
            else:
                logger.info("region %s has no records in %d; cell skipped", region, year)

    summaries = []
    for region in panel.regions:
        if all(panel.has_group(region, y) for y in years):
            summaries.append(
                summarize_region(panel, region, years, thresholds, band_multiplier))
        else:
            logger.info("region %s misses part of the window; no summary", region)

    totals = regional_totals(panel, years)

    descriptive_by_year = {}
    for year in years:
        vals = [totals.by_group[(r, year)]
                for r in panel.regions if (r, year) in totals.by_group]
        if len(vals) >= 2:
            descriptive_by_year[year] = descriptive_stats(vals)
        else:
            logger.warning("year %d has %d regional total(s); descriptive "
                           "statistics skipped", year, len(vals))

    means = [totals.region_means[r] for r in panel.regions if r in totals.region_means]
    descriptive_of_means = descriptive_stats(means) if len(means) >= 2 else None

    yearly_summary = chi2_set_summary(
        [r.result.chi2 for r in reports],
        [f"{r.region_code} {r.year}" for r in reports],
        threshold=thresholds.chi2_strict,
    )
    mean_summary = None
    if summaries:
        mean_summary = chi2_set_summary(
            [s.mean_chi2 for s in summaries],
            [s.region_code for s in summaries],
            threshold=thresholds.chi2_strict,
        )

    return AuditReport(
        years=years,
        thresholds=thresholds,
        band_multiplier=band_multiplier,
        reports=tuple(reports),
        summaries=tuple(summaries),
        totals=totals,
        descriptive_by_year=descriptive_by_year,
        descriptive_of_means=descriptive_of_means,
        yearly_chi2_summary=yearly_summary,
        mean_chi2_summary=mean_summary,
    )
