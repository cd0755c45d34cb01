"""Report rendering: text, CSV tables, plot data and JSON.

The text format rounds to three decimals for reading; the machine formats
(CSV, JSON, plot data) carry full float precision so downstream tooling
can reproduce every statistic bit-for-bit.
"""
from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path

from . import __about__
from .benford import BL1_PROBABILITIES
from .pipeline import AuditReport

__all__ = ["FORMATS", "render_text_report", "build_json_report", "write_outputs"]

FORMATS = ("text", "csv", "json", "plotdata")

_SAFE = re.compile(r"[^A-Za-z0-9_-]+")


def _safe_name(text: str) -> str:
    cleaned = _SAFE.sub("_", str(text)).strip("_")
    return cleaned or "group"


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_text_report(audit: AuditReport, grouping: str = "region") -> str:
    """Human-readable report, statistics rounded to three decimals."""
    t = audit.thresholds
    lines = []
    out = lines.append
    out("First-digit conformity audit")
    out(f"window: {audit.years[0]}-{audit.years[-1]}   grouping: {grouping}")
    out(f"thresholds (df=8): conforming <= {_fmt(t.chi2_lenient)} < marginal "
        f"<= {_fmt(t.chi2_strict)} < nonconforming")
    out(f"band half-width: {audit.band_multiplier:g} / sqrt(n-1)")
    out("")

    out("groups")
    out(f"{'group':<10}{'year':>6}{'n':>8}{'excl':>6}{'chi2':>10}  class")
    for rep in audit.reports:
        r = rep.result
        out(f"{rep.region_code:<10}{rep.year:>6}{rep.table.n:>8}"
            f"{rep.table.excluded:>6}{_fmt(r.chi2):>10}  {r.label}")
    out("")

    if audit.summaries:
        out("multi-year summaries")
        head = f"{'group':<10}{'mean_chi2':>10}  {'class':<14}{'tavg_chi2':>10}  class"
        out(head)
        for s in audit.summaries:
            out(f"{s.region_code:<10}{_fmt(s.mean_chi2):>10}  "
                f"{s.mean_classification.label:<14}{_fmt(s.time_avg_chi2):>10}  "
                f"{s.time_avg_classification.label}")
        out("")

    flagged = audit.yearly_chi2_summary.outliers
    out(f"flagged groups (chi2 > {_fmt(audit.yearly_chi2_summary.threshold)})")
    if flagged:
        for label, value in flagged:
            out(f"  {label:<16}{_fmt(value):>10}")
    else:
        out("  none")
    out("")

    out("totals by year")
    out(f"{'group':<10}" + "".join(f"{y:>15}" for y in audit.years))
    regions = sorted({region for region, _ in audit.totals.by_group})
    for region in regions:
        cells = []
        for y in audit.years:
            v = audit.totals.by_group.get((region, y))
            cells.append(f"{v:>15.6e}" if v is not None else f"{'-':>15}")
        out(f"{region:<10}" + "".join(cells))
    out(f"{'ALL':<10}" + "".join(
        f"{audit.totals.national_by_year[y]:>15.6e}" if y in audit.totals.national_by_year
        else f"{'-':>15}" for y in audit.years))
    out("")

    if audit.descriptive_by_year or audit.descriptive_of_means:
        out("descriptive statistics of group totals")
        stats_years = [y for y in audit.years if y in audit.descriptive_by_year]
        header = f"{'stat':<10}" + "".join(f"{y:>15}" for y in stats_years)
        if audit.descriptive_of_means is not None:
            header += f"{'mean':>15}"
        out(header)
        for field in ("n", "min", "max", "sum", "mean", "median", "rms",
                      "stddev", "stderr", "skewness", "kurtosis"):
            row = [f"{field:<10}"]
            for y in stats_years:
                value = getattr(audit.descriptive_by_year[y], field)
                row.append(f"{value:>15}" if field == "n" else f"{value:>15.6e}")
            if audit.descriptive_of_means is not None:
                value = getattr(audit.descriptive_of_means, field)
                row.append(f"{value:>15}" if field == "n" else f"{value:>15.6e}")
            out("".join(row))
        out("")

    return "\n".join(lines) + "\n"


def build_json_report(audit: AuditReport, grouping: str = "region") -> dict:
    """Structured report with full-precision floats."""
    t = audit.thresholds
    cells = []
    for rep in audit.reports:
        r = rep.result
        cell = {
            "group": rep.region_code,
            "year": rep.year,
            "n": rep.table.n,
            "excluded": rep.table.excluded,
            "counts": [int(c) for c in rep.table.counts],
            "frequencies": [float(f) for f in rep.table.frequencies],
            "chi2": r.chi2,
            "df": r.df,
            "classification": r.label,
            "deviation": [float(d) for d in r.per_digit_deviation],
        }
        if r.band is not None:
            cell["band"] = {
                "sigma": r.band.sigma,
                "lower": [float(v) for v in r.band.lower],
                "upper": [float(v) for v in r.band.upper],
            }
        cells.append(cell)

    summaries = [
        {
            "group": s.region_code,
            "years": list(s.years),
            "n_by_year": list(s.n_by_year),
            "yearly_chi2": list(s.yearly_chi2),
            "mean_chi2": s.mean_chi2,
            "mean_classification": s.mean_classification.label,
            "time_avg_chi2": s.time_avg_chi2,
            "time_avg_classification": s.time_avg_classification.label,
        }
        for s in audit.summaries
    ]

    def stats_dict(st):
        return None if st is None else {
            "n": st.n, "min": st.min, "max": st.max, "sum": st.sum,
            "mean": st.mean, "median": st.median, "rms": st.rms,
            "stddev": st.stddev, "stderr": st.stderr,
            "skewness": st.skewness, "kurtosis": st.kurtosis,
        }

    def hist_dict(summary):
        return None if summary is None else {
            "bin_edges": [float(e) for e in summary.bin_edges],
            "bin_counts": [int(c) for c in summary.bin_counts],
            "threshold": summary.threshold,
            "outliers": [{"group": label, "chi2": value}
                         for label, value in summary.outliers],
        }

    totals_by_region = {}
    for (region, year), value in sorted(audit.totals.by_group.items()):
        totals_by_region.setdefault(region, {})[str(year)] = value

    return {
        "tool": {"name": __about__.NAME, "version": __about__.VERSION},
        "grouping": grouping,
        "window": list(audit.years),
        "thresholds": {
            "chi2_strict": t.chi2_strict,
            "chi2_lenient": t.chi2_lenient,
            "alpha_strict": t.alpha_strict,
            "alpha_lenient": t.alpha_lenient,
            "df": 8,
        },
        "band_multiplier": audit.band_multiplier,
        "expected_probabilities": [float(p) for p in BL1_PROBABILITIES],
        "cells": cells,
        "summaries": summaries,
        "totals": {
            "by_group": totals_by_region,
            "national_by_year": {str(y): v
                                 for y, v in sorted(audit.totals.national_by_year.items())},
            "group_means": dict(sorted(audit.totals.region_means.items())),
            "national_mean": audit.totals.national_mean,
        },
        "descriptive": {
            **{str(y): stats_dict(audit.descriptive_by_year[y])
               for y in audit.years if y in audit.descriptive_by_year},
            "window_means": stats_dict(audit.descriptive_of_means),
        },
        "yearly_chi2_histogram": hist_dict(audit.yearly_chi2_summary),
        "mean_chi2_histogram": hist_dict(audit.mean_chi2_summary),
        "any_nonconforming": audit.any_nonconforming,
    }


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _r(x: float) -> str:
    # full-precision float text (round-trips via float())
    return repr(float(x))


def _write_freq_tables(audit: AuditReport, outdir: Path, written: list) -> None:
    for rep in audit.reports:
        r = rep.result
        freqs = rep.table.frequencies
        path = outdir / f"freq_{_safe_name(rep.region_code)}_{rep.year}.csv"
        written.append(path)
        rows = []
        for i in range(9):
            row = [
                i + 1,
                int(rep.table.counts[i]),
                _r(freqs[i]),
                _r(BL1_PROBABILITIES[i]),
                _r(r.per_digit_deviation[i]),
            ]
            if r.band is not None:
                row += [_r(r.band.lower[i]), _r(r.band.upper[i])]
            else:
                row += ["", ""]
            rows.append(row)
        _write_rows(path, ["digit", "count", "frequency", "expected",
                           "deviation", "band_lower", "band_upper"], rows)


def _write_hist(summary, path: Path) -> None:
    rows = [
        [_r(summary.bin_edges[i]), _r(summary.bin_edges[i + 1]), int(c)]
        for i, c in enumerate(summary.bin_counts)
    ]
    _write_rows(path, ["bin_lower", "bin_upper", "count"], rows)


def _write_core_csvs(audit: AuditReport, outdir: Path, written: list) -> None:
    path = outdir / "chi2_by_year.csv"
    written.append(path)
    _write_rows(path,
                ["group", "year", "n", "excluded", "chi2", "classification"],
                [[rep.region_code, rep.year, rep.table.n, rep.table.excluded,
                  _r(rep.result.chi2), rep.result.label] for rep in audit.reports])

    path = outdir / "region_summary.csv"
    written.append(path)
    header = (["group"] + [f"chi2_{y}" for y in audit.years]
              + ["mean_chi2", "mean_classification",
                 "time_avg_chi2", "time_avg_classification"])
    rows = []
    for s in audit.summaries:
        rows.append([s.region_code] + [_r(v) for v in s.yearly_chi2]
                    + [_r(s.mean_chi2), s.mean_classification.label,
                       _r(s.time_avg_chi2), s.time_avg_classification.label])
    _write_rows(path, header, rows)

    path = outdir / "totals.csv"
    written.append(path)
    rows = [[region, year, _r(value)]
            for (region, year), value in sorted(audit.totals.by_group.items())]
    rows += [["ALL", year, _r(value)]
             for year, value in sorted(audit.totals.national_by_year.items())]
    _write_rows(path, ["group", "year", "total"], rows)

    path = outdir / "descriptive.csv"
    written.append(path)
    fields = ("n", "min", "max", "sum", "mean", "median", "rms",
              "stddev", "stderr", "skewness", "kurtosis")
    rows = []
    for year in audit.years:
        stats = audit.descriptive_by_year.get(year)
        if stats is not None:
            rows.append([str(year)] + [stats.n] + [_r(getattr(stats, f))
                                                   for f in fields[1:]])
    if audit.descriptive_of_means is not None:
        stats = audit.descriptive_of_means
        rows.append(["window_means"] + [stats.n] + [_r(getattr(stats, f))
                                                    for f in fields[1:]])
    _write_rows(path, ["batch"] + list(fields), rows)


def _drop_nonfinite(node):
    # JSON has no NaN/inf literal; emit null instead
    if isinstance(node, float):
        return node if math.isfinite(node) else None
    if isinstance(node, dict):
        return {k: _drop_nonfinite(v) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [_drop_nonfinite(v) for v in node]
    return node


def write_outputs(audit: AuditReport, outdir, formats, grouping: str = "region") -> list:
    """Write the selected formats into ``outdir``; returns written paths.

    text -> report.txt; csv -> chi2_by_year.csv, region_summary.csv,
    totals.csv, descriptive.csv; json -> report.json; plotdata -> one
    freq_<group>_<year>.csv per cell plus the two histogram tables.
    Nothing written by a failed call is left behind.
    """
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise ValueError(f"unknown output format(s): {sorted(unknown)}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    # every path is registered before its file is opened, so the cleanup
    # below also catches files a failure left half-written
    try:
        if "text" in formats:
            text = render_text_report(audit, grouping)
            path = outdir / "report.txt"
            written.append(path)
            path.write_text(text, encoding="utf-8")
        if "csv" in formats:
            _write_core_csvs(audit, outdir, written)
        if "json" in formats:
            doc = _drop_nonfinite(build_json_report(audit, grouping))
            path = outdir / "report.json"
            written.append(path)
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(doc, handle, indent=2, allow_nan=False)
                handle.write("\n")
        if "plotdata" in formats:
            _write_freq_tables(audit, outdir, written)
            path = outdir / "chi2_hist_yearly.csv"
            written.append(path)
            _write_hist(audit.yearly_chi2_summary, path)
            if audit.mean_chi2_summary is not None:
                path = outdir / "chi2_hist_means.csv"
                written.append(path)
                _write_hist(audit.mean_chi2_summary, path)
    except Exception:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise
    return written
