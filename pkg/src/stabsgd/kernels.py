"""Backend selection for the hot burst kernel.

The numba JIT kernel is used when importable; set STABSGD_NO_NUMBA=1 to
force the pure-NumPy fallback. Both backends implement the same contract
(see _kernels_np.run_burst) and the active one is reported in BACKEND.
"""

from __future__ import annotations

import os


def _numba_disabled() -> bool:
    return os.environ.get("STABSGD_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


if _numba_disabled():
    from ._kernels_np import run_burst  # noqa: F401
    BACKEND = "numpy"
else:
    try:
        from ._kernels_nb import run_burst  # noqa: F401
        BACKEND = "numba"
    except ImportError:
        from ._kernels_np import run_burst  # noqa: F401
        BACKEND = "numpy"
