"""Backend selection for the verification kernels.

The compiled Cython module is preferred; set ``HSDP_CACHING_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("HSDP_CACHING_PURE_PYTHON"):
    _backend = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _backend
        BACKEND = "cython"
    except ImportError:
        _backend = _pykernels
        BACKEND = "python"

halfsum_counts = _backend.halfsum_counts
c4_row_counts = _backend.c4_row_counts

__all__ = ["BACKEND", "halfsum_counts", "c4_row_counts"]
