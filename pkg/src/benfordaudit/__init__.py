"""First-digit (Benford) conformity auditing for grouped monetary panels.

The package tests grouped monetary amounts against the first-digit law:
parse a per-entity yearly dataset, remap it onto a stable entity
structure, group by region and year, tabulate leading digits, test each
group with Pearson's statistic, classify it, and report totals and
descriptive statistics alongside. Synthetic generators with reproducible
counter-based sampling support calibration and power checking.
"""
from .__about__ import VERSION as __version__
from ._backend import active_name, available_backends, select
from .benford import (
    BL1_PROBABILITIES,
    DIGITS,
    bl1_probabilities,
    bl1_probability,
    expected_counts,
    first_significant_digit,
    first_significant_digits,
)
from .conformance import (
    CHI_SQUARE_DF,
    CRITICAL_VALUES_DF8,
    DEFAULT_THRESHOLDS,
    Chi2SetSummary,
    ConfidenceBand,
    Conformity,
    ConformityResult,
    DigitFrequencyTable,
    Thresholds,
    chi2_set_summary,
    chi_square_statistic,
    classify,
    confidence_band,
    count_first_digits,
    critical_value_df8,
    evaluate_table,
    mean_chi2,
)
from .datamodel import (
    DATASET_COLUMNS,
    Absorption,
    FiscalRecord,
    Merger,
    Panel,
    RegionMove,
    RemapConfig,
    apply_remap,
    build_panel,
    load_remap_config,
    parse_dataset,
)
from .errors import (
    BenfordAuditError,
    DatasetError,
    DomainError,
    DuplicateKey,
    EmptyInput,
    InvalidSpec,
    MissingGroup,
    ParseError,
    RemapError,
    UnknownEntity,
)
from .pipeline import (
    AuditReport,
    DescriptiveStats,
    RegionSummary,
    RegionYearReport,
    RegionalTotals,
    analyze_region_year,
    descriptive_stats,
    regional_totals,
    run_audit,
    summarize_region,
    time_average_values,
)
from .reporting import FORMATS, build_json_report, render_text_report, write_outputs
from .synthesis import (
    GeneratorKind,
    GeneratorSpec,
    generate,
    generate_panel,
    write_dataset,
)

__all__ = [
    "__version__",
    # backends
    "active_name", "available_backends", "select",
    # first-digit law
    "BL1_PROBABILITIES", "DIGITS", "bl1_probabilities", "bl1_probability",
    "expected_counts", "first_significant_digit", "first_significant_digits",
    # conformance
    "CHI_SQUARE_DF", "CRITICAL_VALUES_DF8", "DEFAULT_THRESHOLDS",
    "Chi2SetSummary", "ConfidenceBand", "Conformity", "ConformityResult",
    "DigitFrequencyTable", "Thresholds", "chi2_set_summary",
    "chi_square_statistic", "classify", "confidence_band",
    "count_first_digits", "critical_value_df8", "evaluate_table", "mean_chi2",
    # data model
    "DATASET_COLUMNS", "Absorption", "FiscalRecord", "Merger", "Panel",
    "RegionMove", "RemapConfig", "apply_remap", "build_panel",
    "load_remap_config", "parse_dataset",
    # errors
    "BenfordAuditError", "DatasetError", "DomainError", "DuplicateKey",
    "EmptyInput", "InvalidSpec", "MissingGroup", "ParseError", "RemapError",
    "UnknownEntity",
    # pipeline
    "AuditReport", "DescriptiveStats", "RegionSummary", "RegionYearReport",
    "RegionalTotals", "analyze_region_year", "descriptive_stats",
    "regional_totals", "run_audit", "summarize_region", "time_average_values",
    # reporting
    "FORMATS", "build_json_report", "render_text_report", "write_outputs",
    # synthesis
    "GeneratorKind", "GeneratorSpec", "generate", "generate_panel",
    "write_dataset",
]
