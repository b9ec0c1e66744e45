"""Backend selection for the numeric kernels.

Numba is used when it imports cleanly, unless ``SOLIDHULL_NO_JIT`` is set to
a truthy value, in which case the pure-numpy kernels are used. Both backends
expose ``solve_gaps``, ``segmented_log_norm`` and ``log_series``.
"""
import logging
import os

from . import _kernels_np

logger = logging.getLogger(__name__)

_FALSY = {"", "0", "false", "no", "off"}


def _jit_disabled():
    return os.environ.get("SOLIDHULL_NO_JIT", "").strip().lower() not in _FALSY


if _jit_disabled():
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_nb as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        logger.warning("numba unavailable, falling back to numpy kernels")
        _impl = _kernels_np
        BACKEND = "numpy"

solve_gaps = _impl.solve_gaps
segmented_log_norm = _impl.segmented_log_norm
log_series = _impl.log_series


def set_threads(n):
    """Size the numba worker pool; a no-op on the numpy backend."""
    if BACKEND != "numba" or n is None:
        return
    import numba

    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
