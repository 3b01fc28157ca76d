"""Kernel backend selection.

The compiled extension is preferred when importable; the NumPy fallback is
bit-identical, so switching backends never changes results.  Set
``ARC_SZEGO_BACKEND=python`` to force the fallback (used by the benchmark
and the backend-equivalence tests).
"""

import os

from . import _pykernels

_impl = _pykernels
if os.environ.get("ARC_SZEGO_BACKEND", "").strip().lower() != "python":
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

pairwise_sum = _impl.pairwise_sum
wdot = _impl.wdot
eval_power_series = _impl.eval_power_series
eval_orthopolys = _impl.eval_orthopolys
