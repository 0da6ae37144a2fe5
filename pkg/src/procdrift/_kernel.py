"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set PROCDRIFT_PURE=1 to force the fallback (used by the benchmark and the
parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("PROCDRIFT_PURE") == "1":
    from ._kernel_py import log_tensors

    BACKEND = "python"
else:
    try:
        from ._speedups import log_tensors  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from ._kernel_py import log_tensors

        BACKEND = "python"

__all__ = ["log_tensors", "BACKEND"]
