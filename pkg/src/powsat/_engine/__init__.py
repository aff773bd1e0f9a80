"""Evaluation engine with a compiled core and a pure-Python fallback.

The compiled ``_speedups`` extension is preferred; ``POWSAT_PURE=1`` in the
environment forces the pure backend.  Both expose the same four entry
points over :class:`powsat._engine.program.CompiledQuery`:
``eval_component``, ``eval_power``, ``scan_component``, ``scan_power``.
"""

import os

if os.environ.get("POWSAT_PURE"):
    from . import pure as kernel

    BACKEND = "pure"
else:
    try:
        from . import _speedups as kernel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import pure as kernel  # type: ignore[no-redef]

        BACKEND = "pure"

__all__ = ["kernel", "BACKEND"]
