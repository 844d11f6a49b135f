"""Kernel selection.

The compiled extension is used when it imports; ``PAGEN_PURE_PYTHON=1``
forces the pure-Python kernels (both produce identical output).
"""
import os

from . import _pykernels

if os.environ.get("PAGEN_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pykernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        kernels = _pykernels

BACKEND = kernels.NAME


def available():
    """All importable kernel modules keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
