"""Backend selection for the hot kernels.

numba is used when importable unless ``HMCF_DISABLE_NUMBA`` is set to a
truthy value, in which case the vectorized numpy path is used.  Both
backends are importable side by side for comparison (see
``benchmarks/bench_kernels.py``).
"""

import os

from . import _kernels_numpy as numpy_impl

try:
    from . import _kernels_numba as numba_impl
except ImportError:  # numba missing or broken
    numba_impl = None


def _disabled():
    return os.environ.get("HMCF_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


if numba_impl is not None and not _disabled():
    BACKEND = "numba"
    _impl = numba_impl
else:
    BACKEND = "numpy"
    _impl = numpy_impl

deriv1 = _impl.deriv1
deriv2 = _impl.deriv2
radius_of_curvature = _impl.radius_of_curvature
support_rhs = _impl.support_rhs
rk4_support_step = _impl.rk4_support_step
interp_forcing = _impl.interp_forcing
radial_integrate = _impl.radial_integrate
radial_fixed_steps = _impl.radial_fixed_steps
