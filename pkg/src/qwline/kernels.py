"""Select the walk kernel: compiled extension when available, numpy otherwise.

Set ``QWLINE_DISABLE_EXT=1`` in the environment to force the pure-numpy
fallback (used by the kernel benchmark and for debugging build issues).
Both implementations share one contract; see ``_kernels_py.run_map``.
"""

import os

if os.environ.get("QWLINE_DISABLE_EXT"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built on this platform
        from . import _kernels_py as _impl

COMPILED: bool = bool(getattr(_impl, "COMPILED", False))
run_map = _impl.run_map


def kernel_name() -> str:
    """Identifier recorded in result files for provenance."""
    return "compiled" if COMPILED else "python"
