"""Canonical Italian region codes, names, sizes and macro-area clusters.

The region table is ordinary administrative reference data: twenty regions,
their municipality counts under the 2011 administrative structure, and the
conventional North / Centre / South grouping used when results are pooled
by macro-area.
"""
from __future__ import annotations

from .errors import DomainError

REGIONS = {
    "ABR": "Abruzzo",
    "BAS": "Basilicata",
    "CAL": "Calabria",
    "CAM": "Campania",
    "EMR": "Emilia-Romagna",
    "FVG": "Friuli-Venezia Giulia",
    "LAZ": "Lazio",
    "LIG": "Liguria",
    "LOM": "Lombardia",
    "MAR": "Marche",
    "MOL": "Molise",
    "PIE": "Piemonte",
    "PUG": "Puglia",
    "SAR": "Sardegna",
    "SIC": "Sicilia",
    "TOS": "Toscana",
    "TAA": "Trentino-Alto Adige",
    "UMB": "Umbria",
    "VDA": "Valle d'Aosta",
    "VEN": "Veneto",
}

# municipalities per region in the 2011 administrative structure
CITY_COUNTS_2011 = {
    "ABR": 305,
    "BAS": 131,
    "CAL": 409,
    "CAM": 551,
    "EMR": 348,
    "FVG": 218,
    "LAZ": 378,
    "LIG": 235,
    "LOM": 1544,
    "MAR": 239,
    "MOL": 136,
    "PIE": 1206,
    "PUG": 258,
    "SAR": 377,
    "SIC": 390,
    "TOS": 287,
    "TAA": 333,
    "UMB": 92,
    "VDA": 74,
    "VEN": 581,
}

# macro-area clusters: North, Centre, South-and-islands
CLUSTERS = {
    "N": ("EMR", "FVG", "LIG", "LOM", "PIE", "TAA", "VDA", "VEN"),
    "C": ("ABR", "LAZ", "MAR", "TOS", "UMB"),
    "S": ("BAS", "CAL", "CAM", "MOL", "PUG", "SAR", "SIC"),
}

_CLUSTER_OF = {code: area for area, codes in CLUSTERS.items() for code in codes}

_CODE_OF_NAME = {name.casefold(): code for code, name in REGIONS.items()}


def is_region_code(code: str) -> bool:
    return code in REGIONS


def region_name(code: str) -> str:
    """Full name for a region code."""
    try:
        return REGIONS[code]
    except KeyError:
        raise DomainError(f"unknown region code {code!r}") from None


def cluster_of(code: str) -> str:
    """Macro-area ("N", "C" or "S") a region belongs to."""
    try:
        return _CLUSTER_OF[code]
    except KeyError:
        raise DomainError(f"unknown region code {code!r}") from None


def code_for(name_or_code: str) -> str:
    """Normalize a region name or code to the three-letter code."""
    text = name_or_code.strip()
    if text in REGIONS:
        return text
    code = _CODE_OF_NAME.get(text.casefold())
    if code is None:
        raise DomainError(f"unknown region {name_or_code!r}")
    return code
