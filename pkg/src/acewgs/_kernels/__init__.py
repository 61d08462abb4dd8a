"""Kernel backend selection.

The equilibrium-conversion bisection comes from the compiled Cython
module when it is available: its branchy scalar loop gains ~50x over
Python (see benchmarks/bench_kernels.py). The dense forward pass stays on
the numpy implementation regardless: numpy delegates matrix products to
BLAS, which beats a hand-rolled compiled loop at every batch size we use
(the compiled variant remains in _cy for the benchmark comparison).

Set ACEWGS_PURE_PYTHON=1 to force the pure-Python fallback everywhere.
"""

import os

from acewgs._kernels import _py

_cy = None
if not os.environ.get("ACEWGS_PURE_PYTHON"):
    try:
        import acewgs._kernels._cy as _cy  # type: ignore[no-redef]
    except ImportError:
        _cy = None

BACKEND = _cy.BACKEND if _cy is not None else _py.BACKEND
wgs_xeq_batch = _cy.wgs_xeq_batch if _cy is not None else _py.wgs_xeq_batch
mlp_forward = _py.mlp_forward

__all__ = ["BACKEND", "wgs_xeq_batch", "mlp_forward"]
