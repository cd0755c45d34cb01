"""Records, dataset parsing, entity remapping and panel grouping.

A dataset is a CSV of per-entity yearly amounts with the header

    entity_id,entity_name,region_code,year,amount

Administrative structure changes over a multi-year window (municipal
mergers, absorptions, regions gaining or losing towns) are undone by a
remap configuration: amounts of merged entities are summed per year as if
the merged entity had existed throughout, and region moves are applied to
every year so each entity sits in exactly one region across the window.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import os
from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DatasetError,
    DomainError,
    DuplicateKey,
    MissingGroup,
    ParseError,
    RemapError,
    UnknownEntity,
)

__all__ = [
    "DATASET_COLUMNS",
    "FiscalRecord",
    "Merger",
    "Absorption",
    "RegionMove",
    "RemapConfig",
    "Panel",
    "parse_dataset",
    "load_remap_config",
    "apply_remap",
    "build_panel",
]

logger = logging.getLogger(__name__)

DATASET_COLUMNS = ("entity_id", "entity_name", "region_code", "year", "amount")


@dataclass(frozen=True)
class FiscalRecord:
    """One entity's amount for one year."""

    entity_id: str
    entity_name: str
    region_code: str
    year: int
    amount: float


# ---------------------------------------------------------------------------
# parsing

def _parse_amount(text: str, decimal_sep: str, thousands_sep: Optional[str]) -> float:
    t = text.strip()
    if not t:
        raise ValueError("empty amount")
    if thousands_sep:
        t = t.replace(thousands_sep, "")
    if decimal_sep != ".":
        t = t.replace(decimal_sep, ".")
    value = float(t)
    if not math.isfinite(value):
        raise ValueError(f"amount must be finite, got {text!r}")
    return value


def parse_dataset(source, *, delimiter: str = ",", decimal_sep: str = ".",
                  thousands_sep: Optional[str] = None,
                  columns: Optional[Mapping[str, str]] = None) -> list:
    """Read a dataset from a path or text stream into FiscalRecords.

    The whole file is scanned before reporting problems: a DatasetError
    carries every malformed row and duplicate (entity_id, year) key with
    its row number, so one run surfaces all defects at once.

    ``columns`` optionally maps the canonical column names to the header
    names actually used by the file. ``decimal_sep`` / ``thousands_sep``
    accommodate locale formats such as "1.234,56".
    """
    if thousands_sep is not None and thousands_sep == decimal_sep:
        raise DomainError("decimal and thousands separators must differ")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", newline="", encoding="utf-8") as handle:
            return _parse_stream(handle, delimiter, decimal_sep, thousands_sep, columns)
    return _parse_stream(source, delimiter, decimal_sep, thousands_sep, columns)


def _parse_stream(stream, delimiter, decimal_sep, thousands_sep, columns) -> list:
    reader = csv.reader(stream, delimiter=delimiter)
    header = next(reader, None)
    if header is None:
        raise DatasetError([ParseError(1, None, "empty file, header row missing")])
    header = [h.strip() for h in header]
    rename = dict(columns or {})
    unknown = set(rename) - set(DATASET_COLUMNS)
    if unknown:
        raise DomainError(f"column mapping names unknown fields: {sorted(unknown)}")

    indices = {}
    errors = []
    for field in DATASET_COLUMNS:
        name = rename.get(field, field)
        try:
            indices[field] = header.index(name)
        except ValueError:
            errors.append(ParseError(1, name, "column missing from header"))
    if errors:
        raise DatasetError(errors)

    width = len(header)
    records = []
    seen = {}
    for rownum, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        if len(row) != width:
            errors.append(ParseError(rownum, None,
                                     f"expected {width} fields, got {len(row)}"))
            continue
        entity_id = row[indices["entity_id"]].strip()
        entity_name = row[indices["entity_name"]].strip()
        region_code = row[indices["region_code"]].strip()
        year_text = row[indices["year"]].strip()
        amount_text = row[indices["amount"]]

        bad = False
        if not entity_id:
            errors.append(ParseError(rownum, "entity_id", "must be nonempty"))
            bad = True
        if not region_code:
            errors.append(ParseError(rownum, "region_code", "must be nonempty"))
            bad = True
        try:
            year = int(year_text)
        except ValueError:
            errors.append(ParseError(rownum, "year",
                                     f"not an integer year: {year_text!r}"))
            bad = True
        try:
            amount = _parse_amount(amount_text, decimal_sep, thousands_sep)
        except ValueError as exc:
            errors.append(ParseError(rownum, "amount", str(exc)))
            bad = True
        if bad:
            continue

        key = (entity_id, year)
        if key in seen:
            errors.append(DuplicateKey(entity_id, year, rownum))
            continue
        seen[key] = rownum
        records.append(FiscalRecord(entity_id, entity_name, region_code, year, amount))

    if errors:
        raise DatasetError(errors)
    return records


# ---------------------------------------------------------------------------
# remapping

@dataclass(frozen=True)
class Merger:
    """Several source entities replaced by one new entity."""

    source_ids: tuple
    target_id: str
    target_name: str


@dataclass(frozen=True)
class Absorption:
    """One entity folded into an existing neighbour."""

    source_id: str
    absorbing_id: str


@dataclass(frozen=True)
class RegionMove:
    """An entity reassigned from one region to another.

    The move applies to every year of the window, so the grouped panel has
    a stable structure; ``effective_year`` records when the change legally
    happened and is kept for reporting only.
    """

    entity_id: str
    from_region: str
    to_region: str
    effective_year: Optional[int] = None


@dataclass(frozen=True)
class RemapConfig:
    """A validated set of structure-change rules.

    Rules are applied in order: mergers, then absorptions, then region
    moves. Applying the same configuration twice is a no-op.
    """

    mergers: tuple = ()
    absorptions: tuple = ()
    region_moves: tuple = ()

    def __post_init__(self):
        sources = []
        for m in self.mergers:
            if not m.source_ids:
                raise RemapError(f"merger into {m.target_id!r} lists no sources")
            if not m.target_id or not m.target_name:
                raise RemapError("merger target id and name must be nonempty")
            if m.target_id in m.source_ids:
                raise RemapError(
                    f"merger target {m.target_id!r} is among its own sources; "
                    "use an absorption to fold entities into an existing one"
                )
            sources.extend(m.source_ids)
        for a in self.absorptions:
            if a.source_id == a.absorbing_id:
                raise RemapError(f"entity {a.source_id!r} cannot absorb itself")
            sources.append(a.source_id)
        dupes = {s for s in sources if sources.count(s) > 1}
        if dupes:
            raise RemapError(
                f"entity appears as a source in more than one rule: {sorted(dupes)}"
            )
        source_set = set(sources)
        targets = [m.target_id for m in self.mergers]
        if len(set(targets)) != len(targets):
            raise RemapError("two mergers share a target id")
        for m in self.mergers:
            others = source_set - set(m.source_ids)
            if m.target_id in others:
                raise RemapError(
                    f"merger target {m.target_id!r} is consumed by another rule"
                )
        for a in self.absorptions:
            if a.absorbing_id in source_set:
                raise RemapError(
                    f"absorbing entity {a.absorbing_id!r} is consumed by another rule"
                )
        moved = [mv.entity_id for mv in self.region_moves]
        if len(set(moved)) != len(moved):
            raise RemapError("an entity is moved by more than one rule")
        for mv in self.region_moves:
            if mv.from_region == mv.to_region:
                raise RemapError(
                    f"move of {mv.entity_id!r} has identical source and target region"
                )
            if mv.entity_id in source_set:
                raise RemapError(
                    f"moved entity {mv.entity_id!r} is consumed by a merger/absorption"
                )

    @classmethod
    def from_mapping(cls, data: Mapping) -> "RemapConfig":
        """Build a config from parsed JSON."""
        known = {"mergers", "absorptions", "region_moves"}
        unknown = set(data) - known
        if unknown:
            raise RemapError(f"unknown remap sections: {sorted(unknown)}")
        try:
            mergers = tuple(
                Merger(tuple(str(s) for s in item["source_ids"]),
                       str(item["target_id"]), str(item["target_name"]))
                for item in data.get("mergers", ())
            )
            absorptions = tuple(
                Absorption(str(item["source_id"]), str(item["absorbing_id"]))
                for item in data.get("absorptions", ())
            )
            moves = tuple(
                RegionMove(str(item["entity_id"]), str(item["from_region"]),
                           str(item["to_region"]),
                           int(item["effective_year"]) if "effective_year" in item else None)
                for item in data.get("region_moves", ())
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RemapError(f"malformed remap entry: {exc}") from exc
        return cls(mergers=mergers, absorptions=absorptions, region_moves=moves)


def load_remap_config(path) -> RemapConfig:
    """Read a remap configuration from a JSON file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise RemapError(f"remap file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise RemapError("remap file must hold a JSON object")
    return RemapConfig.from_mapping(data)


def _records_by_year(records: Iterable[FiscalRecord]):
    by_year = {}
    for rec in records:
        table = by_year.setdefault(rec.year, {})
        if rec.entity_id in table:
            raise DuplicateKey(rec.entity_id, rec.year)
        table[rec.entity_id] = rec
    return by_year


def apply_remap(records: Sequence[FiscalRecord], config: RemapConfig) -> list:
    """Rewrite records onto the stable post-change entity structure.

    Merged entities are replaced, per year, by one record whose amount is
    the sum of theirs; absorbed entities fold into their absorber; moved
    entities change region in every year. Rules already reflected in the
    data are skipped, so reapplying a configuration changes nothing.
    Per-year totals are preserved up to float rounding of the few merged
    additions.
    """
    by_year = _records_by_year(records)
    all_ids = {rec.entity_id for table in by_year.values() for rec in table.values()}

    def canonical_name(entity_id):
        for year in sorted(by_year, reverse=True):
            rec = by_year[year].get(entity_id)
            if rec is not None:
                return rec.entity_name
        return entity_id

    for m in config.mergers:
        sources = set(m.source_ids)
        present = sources & all_ids
        if not present:
            if m.target_id in all_ids:
                continue  # already applied
            raise UnknownEntity(sorted(sources)[0])
        if present != sources:
            raise UnknownEntity(sorted(sources - present)[0])
        if m.target_id in all_ids:
            raise RemapError(f"merger target {m.target_id!r} already exists in the data")
        for year in sorted(by_year):
            table = by_year[year]
            merged = [table.pop(s) for s in sorted(sources) if s in table]
            if not merged:
                continue
            regions = {rec.region_code for rec in merged}
            if len(regions) > 1:
                raise RemapError(
                    f"merger sources sit in different regions in {year}: {sorted(regions)}"
                )
            amount = math.fsum(rec.amount for rec in merged)
            table[m.target_id] = FiscalRecord(
                m.target_id, m.target_name, merged[0].region_code, year, amount)
        all_ids -= sources
        all_ids.add(m.target_id)

    for a in config.absorptions:
        if a.source_id not in all_ids:
            if a.absorbing_id in all_ids:
                continue  # already applied
            raise UnknownEntity(a.source_id)
        if a.absorbing_id not in all_ids:
            raise UnknownEntity(a.absorbing_id)
        absorber_name = canonical_name(a.absorbing_id)
        for year in sorted(by_year):
            table = by_year[year]
            src = table.pop(a.source_id, None)
            if src is None:
                continue
            tgt = table.get(a.absorbing_id)
            if tgt is None:
                # the absorber has no record this year; it inherits the
                # source's amount under its own identity
                table[a.absorbing_id] = FiscalRecord(
                    a.absorbing_id, absorber_name, src.region_code, year, src.amount)
            else:
                if tgt.region_code != src.region_code:
                    raise RemapError(
                        f"absorption of {a.source_id!r} crosses regions in {year}"
                    )
                table[a.absorbing_id] = replace(tgt, amount=tgt.amount + src.amount)
        all_ids.discard(a.source_id)

    for mv in config.region_moves:
        if mv.entity_id not in all_ids:
            raise UnknownEntity(mv.entity_id)
        for year in sorted(by_year):
            rec = by_year[year].get(mv.entity_id)
            if rec is None:
                continue
            if rec.region_code == mv.to_region:
                continue  # already applied
            if rec.region_code != mv.from_region:
                raise RemapError(
                    f"entity {mv.entity_id!r} sits in {rec.region_code!r} in {year}, "
                    f"move expected {mv.from_region!r}"
                )
            by_year[year][mv.entity_id] = replace(rec, region_code=mv.to_region)

    return [by_year[year][eid]
            for year in sorted(by_year)
            for eid in sorted(by_year[year])]


# ---------------------------------------------------------------------------
# panel

class Panel:
    """Amounts grouped by (region, year), with a per-entity year matrix.

    Group arrays are assembled in entity-id order regardless of the input
    record order, so every downstream statistic is invariant under input
    permutation. The matrix backs per-entity time averaging; missing
    (entity, year) cells hold NaN.
    """

    def __init__(self, records: Sequence[FiscalRecord]):
        recs = sorted(records, key=lambda r: (r.entity_id, r.year))
        for prev, cur in zip(recs, recs[1:]):
            if prev.entity_id == cur.entity_id and prev.year == cur.year:
                raise DuplicateKey(cur.entity_id, cur.year)

        self._years = tuple(sorted({r.year for r in recs}))
        self._entities = tuple(sorted({r.entity_id for r in recs}))
        eidx = {e: i for i, e in enumerate(self._entities)}
        yidx = {y: j for j, y in enumerate(self._years)}

        matrix = np.full((len(self._entities), len(self._years)), np.nan)
        groups = {}
        region_of = {}
        latest_year = {}
        names = {}
        unstable = set()
        for r in recs:
            matrix[eidx[r.entity_id], yidx[r.year]] = r.amount
            groups.setdefault((r.region_code, r.year), []).append(r.amount)
            known = region_of.get(r.entity_id)
            if known is not None and known != r.region_code:
                unstable.add(r.entity_id)
            if r.year >= latest_year.get(r.entity_id, r.year):
                latest_year[r.entity_id] = r.year
                region_of[r.entity_id] = r.region_code
                names[r.entity_id] = r.entity_name
        if unstable:
            logger.info(
                "%d entit(ies) change region across years; grouping follows each "
                "record's own region, time averages follow the latest one",
                len(unstable),
            )

        matrix.setflags(write=False)
        self._matrix = matrix
        self._eidx = eidx
        self._groups = {}
        for key, amounts in groups.items():
            arr = np.asarray(amounts, dtype=np.float64)
            arr.setflags(write=False)
            self._groups[key] = arr
        self._region_of = region_of
        self._names = names
        self._n_records = len(recs)

    # --- axes ---------------------------------------------------------

    @property
    def years(self) -> tuple:
        return self._years

    @property
    def entities(self) -> tuple:
        return self._entities

    @property
    def regions(self) -> tuple:
        return tuple(sorted({region for region, _ in self._groups}))

    @property
    def entity_index(self) -> Mapping[str, str]:
        """Read-only mapping entity id -> region (latest year's)."""
        return MappingProxyType(self._region_of)

    @property
    def entity_names(self) -> Mapping[str, str]:
        return MappingProxyType(self._names)

    @property
    def n_records(self) -> int:
        return self._n_records

    # --- groups -------------------------------------------------------

    def has_group(self, region: str, year: int) -> bool:
        return (region, year) in self._groups

    def group(self, region: str, year: int) -> np.ndarray:
        """Amounts of one (region, year) cell, in entity-id order."""
        try:
            return self._groups[(region, year)]
        except KeyError:
            raise MissingGroup(region, year) from None

    def group_size(self, region: str, year: int) -> int:
        return int(self.group(region, year).shape[0])

    def group_keys(self) -> tuple:
        return tuple(sorted(self._groups))

    # --- per-entity time series ----------------------------------------

    def entity_rows(self, region: str):
        """(entity ids, amount matrix rows) of a region's entities.

        Entities belong to the region their latest record assigns them.
        Rows align with ``years``; missing cells are NaN.
        """
        ids = tuple(e for e in self._entities if self._region_of[e] == region)
        if not ids:
            raise MissingGroup(region, self._years[0] if self._years else 0)
        rows = self._matrix[[self._eidx[e] for e in ids], :]
        return ids, rows


def build_panel(records: Sequence[FiscalRecord]) -> Panel:
    """Group records into a Panel (see Panel for ordering guarantees)."""
    return Panel(records)
