"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

Set RBC_KERNELS=python to force the fallback (used by the benchmark and to
exercise both code paths in tests).
"""
import os

from . import fallback

if os.environ.get("RBC_KERNELS", "auto").lower() == "python":
    _impl = fallback
    BACKEND = "python"
else:
    try:
        from . import _typicality as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = fallback
        BACKEND = "python"

joint_counts = _impl.joint_counts
typical_mask = _impl.typical_mask

__all__ = ["BACKEND", "joint_counts", "typical_mask", "fallback"]
