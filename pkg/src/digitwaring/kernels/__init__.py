"""Hot numeric kernels.

Each kernel exists twice with identical signatures: a numba ``@njit`` build
in ``_numba`` and a pure-numpy build in ``_numpy``. The module-level names
resolve to numba unless ``DIGITWARING_DISABLE_NUMBA=1`` is set or numba
fails to import. Both builds stay importable for cross-checks and the
benchmark.
"""
from ..config import numba_requested
from . import _numpy as numpy_impl

try:
    if not numba_requested():
        raise ImportError("numba disabled by DIGITWARING_DISABLE_NUMBA")
    from . import _numba as numba_impl
    HAS_NUMBA = True
except ImportError:
    numba_impl = None
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"
_impl = numba_impl if HAS_NUMBA else numpy_impl

grid_magnitudes = _impl.grid_magnitudes
# numpy slice-OR already runs at memory speed and beat the compiled loop
sumset_bits = numpy_impl.sumset_bits
sparse_convolve = _impl.sparse_convolve
longest_step_run = _impl.longest_step_run
pair_sumset_sizes = _impl.pair_sumset_sizes
realvar_grid_min = _impl.realvar_grid_min
psi_batch = _impl.psi_batch

# vectorised helper with no compiled twin
realvar_values = numpy_impl.realvar_values

__all__ = [
    "BACKEND", "HAS_NUMBA", "numpy_impl", "numba_impl",
    "grid_magnitudes", "sumset_bits", "sparse_convolve", "longest_step_run",
    "pair_sumset_sizes", "realvar_grid_min", "realvar_values", "psi_batch",
]
