"""Kernel backend selection.

The hot loops (periodic bicubic Hermite evaluation over point batches) exist
twice: a Cython extension ``vlamap._kernels`` and a pure-NumPy module
``vlamap._kernels_py`` with identical call surfaces.  The compiled one is
used when importable; set ``VLAMAP_PURE_PYTHON=1`` to force the fallback
(used by the parity tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("VLAMAP_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND: str = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
