"""Select the kernel implementation at import time.

The compiled extension is used when it was built; setting the environment
variable ``AIRY2COV_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

if os.environ.get("AIRY2COV_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"

__all__ = ["BACKEND", "kernels"]
