"""Hot loops for sampling: sparse |f| evaluation over blocks of points.

The compiled module ``_kernels`` is used when it was built; otherwise the
numpy implementation in :mod:`._kernels_py` is selected.  Setting
``ARCHZETA_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("ARCHZETA_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"
abs_poly = _impl.abs_poly

__all__ = ["abs_poly", "BACKEND", "_kernels_py"]
