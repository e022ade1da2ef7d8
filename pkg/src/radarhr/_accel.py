"""Kernel path selection.

The hot numeric kernels (VMD sweep, SampEn counting) exist twice: a numba
@njit build and a pure-numpy build. Setting the environment variable
RADARHR_DISABLE_NUMBA=1 (or "true"/"yes") before import selects the numpy
path; so does an unavailable numba install. Both paths compute identical
results; see benchmarks/bench_kernels.py for the speed gap.
"""
import os

ENV_FLAG = "RADARHR_DISABLE_NUMBA"


def _numba_wanted() -> bool:
    if os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_wanted()
