"""Tridiagonal solve kernels: compiled extension when available, pure-Python
fallback otherwise.  ``IMPLEMENTATION`` reports which one is active; set
``KWCFLOW_FORCE_PYTHON_KERNELS=1`` to force the fallback (used by the
benchmark and the twin tests)."""

import os

if os.environ.get("KWCFLOW_FORCE_PYTHON_KERNELS") == "1":
    from ._fallback import IMPLEMENTATION, thomas_solve
else:
    try:
        from ._ext import IMPLEMENTATION, thomas_solve  # type: ignore
    except ImportError:
        from ._fallback import IMPLEMENTATION, thomas_solve

__all__ = ["IMPLEMENTATION", "thomas_solve"]
