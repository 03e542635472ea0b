"""Kernel backend selection.

The compiled extension is used when it imports; set ``SQSO_PURE_PYTHON=1``
to force the pure-Python twin.
"""
import os

if os.environ.get("SQSO_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        from . import _fallback as kernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
