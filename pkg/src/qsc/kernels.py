"""Kernel dispatch.

The compiled extension is used when it imports; otherwise the numpy
fallback is used.  Setting ``QSC_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("QSC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "numpy"

wht_inplace = _impl.wht_inplace
triple_agree_count = _impl.triple_agree_count
manipulation_min_span = _impl.manipulation_min_span
majority_step = _impl.majority_step


def implementations():
    """Both backends keyed by name (the compiled one only if built)."""
    out = {"numpy": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]
        out["cython"] = _kernels
    except ImportError:
        pass
    return out


def default_threads():
    """Thread count from ``QSC_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("QSC_THREADS", "1")))
    except ValueError:
        return 1
