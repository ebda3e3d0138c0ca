"""Backend selection for the multiplication kernel.

SIEGELKM_BACKEND=numba|numpy|python picks the implementation.  Default is
numba when it imports, numpy otherwise.  "python" disables the int64 fast
path entirely and runs every block through the arbitrary-precision route;
results are bit-identical across all three (the fast path only runs on
blocks certified free of int64 overflow).
"""

import os

_cache = {}


def backend_name():
    name = os.environ.get("SIEGELKM_BACKEND", "").strip().lower()
    if name in ("numba", "numpy", "python"):
        return name
    if name:
        raise ValueError("SIEGELKM_BACKEND must be numba, numpy or python, got %r" % name)
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"


def get_accumulator():
    """Return the int64 block-accumulation kernel, or None for python mode."""
    name = backend_name()
    if name in _cache:
        return _cache[name]
    if name == "python":
        kern = None
    elif name == "numba":
        from . import _kernels_numba as mod
        mod.warmup()
        kern = mod.accum_block
    else:
        from . import _kernels_numpy as mod
        kern = mod.accum_block
    _cache[name] = kern
    return kern
