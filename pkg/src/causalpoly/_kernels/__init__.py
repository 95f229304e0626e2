"""Hot kernels: compiled Cython modules when built, pure Python otherwise.

Set CAUSALPOLY_PURE=1 to force the Python fallbacks.  ``BACKEND`` records
which one was picked at import.
"""
import importlib
import os

from . import pydd, pyenum, pysimplex

ENUM_MAX_N = 4   # compiled enumeration packs responses into 64 bits

def _load(name):
    if os.environ.get("CAUSALPOLY_PURE", "") not in ("", "0"):
        return None
    try:
        return importlib.import_module(f"{__name__}.{name}")
    except ImportError:
        return None


_enum = _load("_enum")
_dd = _load("_dd")
_simplex = _load("_simplex")

BACKEND = "compiled" if None not in (_enum, _dd, _simplex) else (
    "python" if (_enum, _dd, _simplex) == (None, None, None) else "mixed")


def enum_kernel(n):
    """Enumeration module to use for n parties."""
    if _enum is not None and n <= ENUM_MAX_N:
        return _enum
    return pyenum


def dd_kernel():
    return _dd if _dd is not None else pydd


def simplex_kernel():
    return _simplex if _simplex is not None else pysimplex
