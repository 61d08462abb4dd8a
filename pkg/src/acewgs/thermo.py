"""Water-gas-shift equilibrium: constant K(T) and equilibrium CO conversion.

The reaction CO + H2O <=> CO2 + H2 is equimolar, so mole fractions
transform without a total-moles correction and K is pressure-independent
at the ideal-gas level. The equilibrium constant uses the engineering
correlation K(T) = exp(4577.8 / T - 4.33) with T in kelvin; it is the one
swappable piece of theory behind this module's interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from acewgs import _kernels
from acewgs.errors import NonConvergence, OutOfRange

T_MIN_K = 300.0
T_MAX_K = 1500.0

# |K - Q(x_eq)| bound the solver guarantees for well-conditioned feeds
# (all species present at >= 1% and K(T) below ~500, i.e. T above ~165 C).
RESIDUAL_BOUND = 1e-9


def celsius_to_kelvin(t_c: float) -> float:
    return t_c + 273.15


def equilibrium_constant(t_kelvin: float) -> float:
    """K(T) = exp(4577.8 / T - 4.33); strictly decreasing in T."""
    if not T_MIN_K <= t_kelvin <= T_MAX_K:
        raise OutOfRange(
            f"temperature {t_kelvin} K outside validity window "
            f"[{T_MIN_K}, {T_MAX_K}] K"
        )
    return math.exp(4577.8 / t_kelvin - 4.33)


@dataclass(frozen=True)
class FeedComposition:
    """Inlet mole fractions; must sum to 1 within 1e-6."""

    y_co: float
    y_h2o: float
    y_co2: float
    y_h2: float
    y_n2: float

    def __post_init__(self):
        for name in ("y_co", "y_h2o", "y_co2", "y_h2", "y_n2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        total = self.y_co + self.y_h2o + self.y_co2 + self.y_h2 + self.y_n2
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"mole fractions sum to {total}, expected 1")


@dataclass(frozen=True)
class EquilibriumResult:
    k_eq: float
    x_eq: float
    residual: float
    dry_feed: bool = False   # y_h2o == 0, conversion pinned at 0
    clamped: bool = False    # feed already at/past equilibrium, pinned at 0


def reaction_quotient(x: float, feed: FeedComposition) -> float:
    """Q(x) for conversion fraction x of the inlet CO."""
    num = (feed.y_co2 + x * feed.y_co) * (feed.y_h2 + x * feed.y_co)
    den = (feed.y_co * (1.0 - x)) * (feed.y_h2o - x * feed.y_co)
    if den <= 0.0:
        return math.inf
    return num / den


def equilibrium_conversion(feed: FeedComposition, t_kelvin: float) -> EquilibriumResult:
    """Solve K(T) = Q(x) for x on (0, min(1, y_h2o/y_co)) by bisection.

    Requires y_co > 0. A dry feed (y_h2o == 0) returns x_eq = 0 with the
    dry_feed flag rather than raising: the inverse model legitimately
    explores that corner.
    """
    if feed.y_co <= 0.0:
        raise NonConvergence("y_co must be positive to define CO conversion")
    k_eq = equilibrium_constant(t_kelvin)
    if feed.y_h2o <= 0.0:
        # Q is undefined without water; conversion is pinned at zero.
        return EquilibriumResult(k_eq=k_eq, x_eq=0.0, residual=0.0, dry_feed=True)
    if feed.y_co2 * feed.y_h2 >= k_eq * (feed.y_co * feed.y_h2o):
        return EquilibriumResult(k_eq=k_eq, x_eq=0.0,
                                 residual=k_eq - reaction_quotient(0.0, feed),
                                 clamped=True)
    x = float(_kernels.wgs_xeq_batch(
        np.array([k_eq]), np.array([feed.y_co]), np.array([feed.y_h2o]),
        np.array([feed.y_co2]), np.array([feed.y_h2]))[0])
    if not math.isfinite(x):
        raise NonConvergence("bisection bracket failure")
    return EquilibriumResult(k_eq=k_eq, x_eq=x,
                             residual=k_eq - reaction_quotient(x, feed))


def equilibrium_conversion_batch(t_kelvin: np.ndarray, y_co: np.ndarray,
                                 y_h2o: np.ndarray, y_co2: np.ndarray,
                                 y_h2: np.ndarray) -> np.ndarray:
    """Vectorized x_eq for the optimizer hot path (fractions in [0, 1]).

    Same per-element algorithm as equilibrium_conversion, minus the
    per-call validation; callers guarantee y_co > 0 and in-range T.
    """
    t = np.asarray(t_kelvin, dtype=np.float64)
    if np.any(t < T_MIN_K) or np.any(t > T_MAX_K):
        raise OutOfRange("temperature outside validity window")
    k_eq = np.exp(4577.8 / t - 4.33)
    return _kernels.wgs_xeq_batch(k_eq, y_co, y_h2o, y_co2, y_h2)


def product_mole_fractions(feed: FeedComposition, x: float) -> dict:
    """Outlet composition after converting fraction x of the inlet CO."""
    d = feed.y_co * x
    return {
        "y_co": feed.y_co - d,
        "y_h2o": feed.y_h2o - d,
        "y_co2": feed.y_co2 + d,
        "y_h2": feed.y_h2 + d,
        "y_n2": feed.y_n2,
    }
