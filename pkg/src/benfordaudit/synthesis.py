"""Reproducible synthetic amount generators for calibration and testing.

Four families:

* ``benford``: 10 ** (decades * U), log-uniform over the decade span, so
  first digits follow the first-digit law exactly in distribution.
* ``uniform``: equidistributed first digit 1..9 with uniform mantissa
  offset and decade; maximally nonconforming while still looking like
  plausible amounts.
* ``rounded``: log-uniform amounts with the mantissa rounded up to the
  next integer, mimicking data manipulated toward round figures.
* ``mixture``: each sample is uniform-digit with probability
  ``tamper_fraction`` and law-conforming otherwise.

Sampling is counter-based: sample i reads the four stream slots
4i..4i+3 of a SplitMix64 sequence (slot 0 the tamper decision, slot 1
the primary draw, slots 2 and 3 mantissa and decade), so a mixture with
tamper_fraction 0 equals the benford stream sample-for-sample and with
1 equals the uniform-digit stream. Results are identical across kernel
backends, platforms and runs.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import kernels
from ._kernels.numpy_impl import (
    KIND_BENFORD,
    KIND_MIXTURE,
    KIND_ROUNDED_UP,
    KIND_UNIFORM_DIGIT,
)
from .datamodel import FiscalRecord
from .errors import InvalidSpec

__all__ = ["GeneratorKind", "GeneratorSpec", "generate", "generate_panel",
           "write_dataset"]

_MASK64 = (1 << 64) - 1
_SLOTS_PER_SAMPLE = 4
# decade spans beyond this lose exactness of the power-of-ten scaling
_MAX_DECADES = 18


class GeneratorKind(str, Enum):
    BENFORD_LOG_UNIFORM = "benford"
    UNIFORM_FIRST_DIGIT = "uniform"
    ROUNDED_UP = "rounded"
    MIXTURE = "mixture"


_KIND_CODES = {
    GeneratorKind.BENFORD_LOG_UNIFORM: KIND_BENFORD,
    GeneratorKind.UNIFORM_FIRST_DIGIT: KIND_UNIFORM_DIGIT,
    GeneratorKind.ROUNDED_UP: KIND_ROUNDED_UP,
    GeneratorKind.MIXTURE: KIND_MIXTURE,
}


@dataclass(frozen=True)
class GeneratorSpec:
    """Validated description of one synthetic sample."""

    kind: GeneratorKind
    n: int
    decades: int = 6
    tamper_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        kind = GeneratorKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidSpec(f"sample size must be a positive integer, got {self.n!r}")
        if not isinstance(self.decades, int) or not 1 <= self.decades <= _MAX_DECADES:
            raise InvalidSpec(
                f"decades must be an integer in 1..{_MAX_DECADES}, got {self.decades!r}")
        if not 0.0 <= float(self.tamper_fraction) <= 1.0:
            raise InvalidSpec(
                f"tamper fraction must lie in [0, 1], got {self.tamper_fraction!r}")
        if self.tamper_fraction != 0.0 and kind is not GeneratorKind.MIXTURE:
            raise InvalidSpec("only the mixture kind takes a tamper fraction")
        if not isinstance(self.seed, int):
            raise InvalidSpec(f"seed must be an integer, got {self.seed!r}")


def generate(spec: GeneratorSpec, year_index: int = 0) -> np.ndarray:
    """Draw the spec's sample; ``year_index`` selects a disjoint stream block."""
    if year_index < 0:
        raise InvalidSpec(f"year index must be nonnegative, got {year_index}")
    start = _SLOTS_PER_SAMPLE * spec.n * year_index
    return kernels().generate_values(
        _KIND_CODES[GeneratorKind(spec.kind)],
        spec.n,
        spec.decades,
        float(spec.tamper_fraction),
        np.uint64(spec.seed & _MASK64),
        np.uint64(start & _MASK64),
    )


def generate_panel(spec: GeneratorSpec, years, region_code: str = "SYN",
                   entity_prefix: str = "SYN") -> list:
    """Synthetic records for several years, one entity set, one region.

    Year j draws from stream block j, so any window of the same spec is
    reproducible independently of which other years were generated.
    """
    years = [int(y) for y in years]
    if not years:
        raise InvalidSpec("need at least one year")
    if len(set(years)) != len(years):
        raise InvalidSpec("years must be distinct")
    width = max(6, len(str(spec.n)))
    records = []
    for j, year in enumerate(sorted(years)):
        values = generate(spec, year_index=j)
        for i, amount in enumerate(values, start=1):
            eid = f"{entity_prefix}-{i:0{width}d}"
            records.append(FiscalRecord(eid, eid, region_code, year, float(amount)))
    return records


def write_dataset(records, path) -> None:
    """Write records as a dataset CSV in the canonical column order."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["entity_id", "entity_name", "region_code", "year", "amount"])
        for rec in records:
            writer.writerow([rec.entity_id, rec.entity_name, rec.region_code,
                             rec.year, repr(rec.amount)])
