"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

Set DCSF_PURE_PYTHON=1 to force the numpy implementation (used by the
benchmark command and by CI environments without a compiler).
"""

from __future__ import annotations

import os

if os.environ.get("DCSF_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

IMPLEMENTATION: str = _impl.IMPLEMENTATION
sum_user_rate_kernel = _impl.sum_user_rate_kernel
pairwise_sinc_sum = _impl.pairwise_sinc_sum
