"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting the environment
variable ``WALL_LIMITS_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("WALL_LIMITS_PURE_PYTHON", "") != "1":
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py
    else:
        BACKEND = "compiled"
else:
    _impl = _kernels_py

kummer_series = _impl.kummer_series
numerov_march = _impl.numerov_march

__all__ = ["BACKEND", "kummer_series", "numerov_march"]
