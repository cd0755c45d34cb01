import csv
import importlib
from pathlib import Path

import pytest

import benfordaudit as ba

DATA = Path(__file__).parent / "data"


def load_yearly_chi2():
    """(region, year) -> reference statistic, from the committed table."""
    out = {}
    with open(DATA / "yearly_chi2_reference.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            out[(row["region_code"], int(row["year"]))] = float(row["chi2"])
    return out


def load_mean_chi2():
    out = {}
    with open(DATA / "region_mean_chi2_reference.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            out[row["region_code"]] = float(row["mean_chi2"])
    return out


def load_freq_reference():
    """Rows of (region, year, n, frequencies 1..9, chi2)."""
    rows = []
    with open(DATA / "digit_freq_large_regions.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            freqs = [float(row[f"f{d}"]) for d in range(1, 10)]
            rows.append((row["region_code"], int(row["year"]), int(row["n"]),
                         freqs, float(row["chi2"])))
    return rows


def load_power_seeds():
    text = (DATA / "power_check_seeds.txt").read_text()
    return [int(line) for line in text.split()]


@pytest.fixture(scope="session")
def regional_records():
    return ba.parse_dataset(DATA / "regional_totals_2007_2011.csv")


@pytest.fixture(scope="session")
def regional_panel(regional_records):
    return ba.build_panel(regional_records)


@pytest.fixture(scope="session")
def mini_records():
    return ba.parse_dataset(DATA / "mini_panel.csv")


@pytest.fixture(scope="session")
def mini_remap():
    return ba.load_remap_config(DATA / "mini_remap.json")


def _backend_modules():
    mods = [importlib.import_module("benfordaudit._kernels.numpy_impl")]
    try:
        mods.append(importlib.import_module("benfordaudit._kernels.numba_impl"))
    except ImportError:
        pass
    return mods


@pytest.fixture(params=_backend_modules(), ids=lambda m: m.NAME)
def kernel_backend(request):
    return request.param


@pytest.fixture(scope="session")
def numba_kernels():
    mod = pytest.importorskip("benfordaudit._kernels.numba_impl")
    mod.warmup()
    return mod
