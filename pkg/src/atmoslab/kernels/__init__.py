"""Kernel backend selection.

The compiled extension is used when available; set ``ATMOSLAB_KERNELS`` to
``python`` to force the numpy fallback or to ``compiled`` to make a missing
extension an error.  See ``benchmarks/bench_kernels.py`` for a speed
comparison of the two.
"""

import os

from . import pure
from .pure import LIM_MC, LIM_MINMOD, LIM_NONE, LIM_VANLEER, LIMITER_IDS, limited_slope

_choice = os.environ.get("ATMOSLAB_KERNELS", "auto").lower()
if _choice not in ("auto", "python", "compiled"):
    raise ValueError(f"ATMOSLAB_KERNELS must be auto|python|compiled, got {_choice!r}")

_impl = None
if _choice in ("auto", "compiled"):
    try:
        from . import _core as _impl
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = None
if _impl is None:
    _impl = pure

BACKEND = "compiled" if _impl is not pure else "python"

muscl_sweep_x = _impl.muscl_sweep_x
muscl_sweep_z = _impl.muscl_sweep_z
helmholtz_apply = _impl.helmholtz_apply
