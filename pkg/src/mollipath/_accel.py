"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when it imports; otherwise the numpy
implementation in ``_fallback``.  Set ``MOLLIPATH_PURE_PYTHON=1`` to force
the fallback.
"""

import os

from . import _fallback

if os.environ.get("MOLLIPATH_PURE_PYTHON", "") not in ("", "0"):
    backend = _fallback
else:
    try:
        from . import _core as backend
    except ImportError:
        backend = _fallback

BACKEND = "compiled" if backend is not _fallback else "python"

__all__ = ["backend", "BACKEND"]
