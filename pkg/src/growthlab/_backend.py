"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is picked up
automatically when the extension is missing. GROWTHLAB_PURE_PYTHON=1 forces
the fallback (used by the benchmark and the backend-agreement tests).
"""

from __future__ import annotations

import os

if os.environ.get("GROWTHLAB_PURE_PYTHON"):
    from growthlab import _kernels_py as kernels
else:
    try:
        from growthlab import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from growthlab import _kernels_py as kernels

HAVE_COMPILED = kernels.IS_COMPILED


def get_kernels(pure_python: bool = False):
    """Return the kernel module; pure_python=True forces the fallback."""
    if pure_python:
        from growthlab import _kernels_py

        return _kernels_py
    return kernels
