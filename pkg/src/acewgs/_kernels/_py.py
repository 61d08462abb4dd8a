"""Pure-Python kernel implementations.

These are the reference semantics for the compiled kernels in ``_cy.pyx``;
the compiled module implements the same algorithms step for step. Selection
happens in ``acewgs._kernels.__init__``.
"""

import math

import numpy as np

BACKEND = "python"


def _wgs_residual(k_eq, x, y_co, y_h2o, y_co2, y_h2):
    """K - Q(x) for the water-gas-shift quotient; +inf past a singularity."""
    num = (y_co2 + x * y_co) * (y_h2 + x * y_co)
    den = (y_co * (1.0 - x)) * (y_h2o - x * y_co)
    if den <= 0.0:
        return math.inf
    return k_eq - num / den

def _xeq_scalar(k_eq, y_co, y_h2o, y_co2, y_h2):
    if y_h2o <= 0.0:
        return 0.0
    x_hi = y_h2o / y_co
    if x_hi > 1.0:
        x_hi = 1.0
    # Feed already at or past equilibrium: no forward conversion.
    if y_co2 * y_h2 >= k_eq * (y_co * y_h2o):
        return 0.0
    lo = 0.0
    hi = x_hi
    # Bisect on sign(Q - K) without dividing, so the singular end of the
    # bracket never overflows. Runs to float exhaustion (far below the
    # 1e-12 step contract), then keeps the endpoint with the smaller
    # residual.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        num = (y_co2 + mid * y_co) * (y_h2 + mid * y_co)
        den = (y_co * (1.0 - mid)) * (y_h2o - mid * y_co)
        if den <= 0.0 or num >= k_eq * den:
            hi = mid
        else:
            lo = mid
    r_lo = abs(_wgs_residual(k_eq, lo, y_co, y_h2o, y_co2, y_h2))
    r_hi = abs(_wgs_residual(k_eq, hi, y_co, y_h2o, y_co2, y_h2))
    return lo if r_lo <= r_hi else hi


def wgs_xeq_batch(k_eq, y_co, y_h2o, y_co2, y_h2):
    """Equilibrium CO conversion for each feed, as fractions in [0, 1].

    All arguments are equal-length float64 arrays; ``y_co`` must be
    strictly positive (the caller guards that precondition).
    """
    k_eq = np.ascontiguousarray(k_eq, dtype=np.float64)
    y_co = np.ascontiguousarray(y_co, dtype=np.float64)
    y_h2o = np.ascontiguousarray(y_h2o, dtype=np.float64)
    y_co2 = np.ascontiguousarray(y_co2, dtype=np.float64)
    y_h2 = np.ascontiguousarray(y_h2, dtype=np.float64)
    out = np.empty(k_eq.shape[0], dtype=np.float64)
    for i in range(k_eq.shape[0]):
        out[i] = _xeq_scalar(k_eq[i], y_co[i], y_h2o[i], y_co2[i], y_h2[i])
    return out


def mlp_forward(x, weights, biases, relu_flags):
    """Forward pass of one dense network over a batch.

    x: (n, f) float64; weights[i]: (out, in) row-major; biases[i]: (out,);
    relu_flags[i]: 1 applies ReLU after layer i, 0 leaves it linear.
    Returns the (n, last_out) activation matrix.
    """
    h = np.ascontiguousarray(x, dtype=np.float64)
    for w, b, relu in zip(weights, biases, relu_flags):
        h = h @ w.T + b
        if relu:
            np.maximum(h, 0.0, out=h)
    return h
