"""Kernel backend selection.

The hot loops ship in two interchangeable implementations: jitted kernels
(``numba``) and a plain vectorized fallback (``numpy``). Resolution order:

1. an explicit ``select(name)`` call,
2. the ``BENFORDAUDIT_BACKEND`` environment variable,
3. default: numba when importable, numpy otherwise.

Both backends expose the same functions and produce identical digits,
uniforms and generated values; compensated sums may differ in the last ulp
(the fallback uses exactly rounded ``math.fsum``, the jitted path Neumaier
summation).
"""
from __future__ import annotations

import importlib
import os

ENV_VAR = "BENFORDAUDIT_BACKEND"
BACKEND_NAMES = ("numba", "numpy")

_active = None
_active_name = None


def available_backends() -> tuple:
    """Backend names usable in this interpreter, preferred first."""
    names = []
    try:
        import numba  # noqa: F401
        names.append("numba")
    except ImportError:
        pass
    names.append("numpy")
    return tuple(names)


def select(name: str | None = None):
    """Resolve, cache and return the kernel module.

    With ``name=None`` the environment variable and then the default
    preference decide. Raises ValueError for unknown names and
    ImportError when the requested backend cannot be loaded.
    """
    global _active, _active_name
    requested = name or os.environ.get(ENV_VAR, "").strip().lower() or None
    if requested is not None and requested not in BACKEND_NAMES:
        raise ValueError(
            f"unknown kernel backend {requested!r}; expected one of {BACKEND_NAMES}"
        )
    if requested is None:
        requested = available_backends()[0]
    if _active_name != requested:
        _active = importlib.import_module(f"benfordaudit._kernels.{requested}_impl")
        _active_name = requested
    return _active


def kernels():
    """The active kernel module, resolving it on first use."""
    return _active if _active is not None else select()


def active_name() -> str:
    kernels()
    return _active_name
