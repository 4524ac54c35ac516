"""Kernel selection.

The compiled extension ``weylalg._kernels`` is used when it was built;
otherwise the pure-Python implementation is used.  Setting the environment
variable ``WEYLALG_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("WEYLALG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

mono_mul = _impl.mono_mul
mul_dicts = _impl.mul_dicts
addmul_term = _impl.addmul_term
reduce_terms = _impl.reduce_terms
clear_cache = _impl.clear_cache

__all__ = ["BACKEND", "mono_mul", "mul_dicts", "addmul_term", "reduce_terms", "clear_cache"]
