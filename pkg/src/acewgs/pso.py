"""Particle swarm optimization over the continuous catalyst-design variables.

Canonical update: v <- w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x);
x <- x + v, with positions clamped to bounds (velocity zeroed on the
clamped components), then composition repair. Global-best reduction runs
in particle-index order, so a run is bit-reproducible from its seed
regardless of how objective evaluations are batched.

The categorical choices (metal, support, promoter, preparation) are fixed
by the researcher's settings; the swarm moves in the nine continuous
dimensions listed in DIMS.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from acewgs import thermo
from acewgs.errors import AcewgsError, InfeasibleSpace
from acewgs.surrogate import CatalystDesign, Prediction
from acewgs.thermo import FeedComposition

logger = logging.getLogger(__name__)

DIMS = ("base_wt_pct", "promoter_wt_pct", "temperature_c", "y_co", "y_h2o",
        "y_co2", "y_h2", "time_on_stream_h", "w_f_ratio")

DEFAULT_BOUNDS = {
    "base_wt_pct": (0.1, 30.0),
    "promoter_wt_pct": (0.0, 30.0),
    "temperature_c": (150.0, 400.0),
    "y_co": (0.001, 0.3),
    "y_h2o": (0.01, 0.6),
    "y_co2": (0.0, 0.3),
    "y_h2": (0.0, 0.5),
    "time_on_stream_h": (0.5, 100.0),
    "w_f_ratio": (0.1, 500.0),
}

# Constriction-equivalent standard coefficients.
DEFAULT_INERTIA = 0.729
DEFAULT_COGNITIVE = 1.49445
DEFAULT_SOCIAL = 1.49445

IMPROVEMENT_EPS = 1e-9


@dataclass
class PsoConfig:
    swarm_size: int = 40
    max_iters: int = 300
    inertia: float = DEFAULT_INERTIA
    cognitive: float = DEFAULT_COGNITIVE
    social: float = DEFAULT_SOCIAL
    seed: int = 0
    stagnation_window: int = 50

    def __post_init__(self):
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if min(self.inertia, self.cognitive, self.social) <= 0:
            raise ValueError("inertia, cognitive and social must be > 0")


@dataclass(frozen=True)
class DesignSpace:
    """Fixed categorical assignments plus per-dimension continuous bounds."""

    base_metal: str
    support: str
    prep_method: str
    promoter: str | None = None
    bounds: dict = field(default_factory=lambda: dict(DEFAULT_BOUNDS))

    def __post_init__(self):
        merged = dict(DEFAULT_BOUNDS)
        merged.update(self.bounds)
        if self.promoter is None:
            merged["promoter_wt_pct"] = (0.0, 0.0)
        object.__setattr__(self, "bounds", merged)
        self.validate()

    def validate(self):
        for dim in DIMS:
            lo, hi = self.bounds[dim]
            if lo > hi:
                raise InfeasibleSpace(f"{dim}: lower bound {lo} exceeds upper {hi}")
        for dim in ("base_wt_pct", "promoter_wt_pct"):
            lo, hi = self.bounds[dim]
            if lo < 0 or hi > 100:
                raise InfeasibleSpace(f"{dim}: bounds must lie in [0, 100]")
        if self.bounds["base_wt_pct"][0] + self.bounds["promoter_wt_pct"][0] > 100:
            raise InfeasibleSpace("minimum base + promoter wt% exceeds 100")
        feed_lo = sum(self.bounds[d][0] for d in ("y_co", "y_h2o", "y_co2", "y_h2"))
        if feed_lo > 1:
            raise InfeasibleSpace("minimum feed fractions sum past 1")
        t_lo, t_hi = self.bounds["temperature_c"]
        if thermo.celsius_to_kelvin(t_lo) < thermo.T_MIN_K or \
                thermo.celsius_to_kelvin(t_hi) > thermo.T_MAX_K:
            raise InfeasibleSpace(
                f"temperature bounds ({t_lo}, {t_hi}) C leave the model's "
                f"validity window")

    def bounds_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([self.bounds[d][0] for d in DIMS])
        hi = np.array([self.bounds[d][1] for d in DIMS])
        return lo, hi

    def repair(self, positions: np.ndarray) -> np.ndarray:
        """Project clamped positions onto the composition constraints.

        base + promoter wt% above 100 are scaled back onto the simplex;
        reactive feed fractions summing past 1 are rescaled so nitrogen
        (the balance) stays non-negative.
        """
        x = np.atleast_2d(np.asarray(positions, dtype=np.float64)).copy()
        comp = x[:, 0] + x[:, 1]
        over = comp > 100.0
        if np.any(over):
            x[over, 0] *= 100.0 / comp[over]
            x[over, 1] *= 100.0 / comp[over]
        feed = x[:, 3:7].sum(axis=1)
        overf = feed > 1.0
        if np.any(overf):
            x[overf, 3:7] /= feed[overf, None]
        return x if positions.ndim > 1 else x[0]

    def to_design(self, position: np.ndarray) -> CatalystDesign:
        """Materialize one position vector as a catalyst design."""
        p = dict(zip(DIMS, np.asarray(position, dtype=np.float64)))
        y_n2 = 1.0 - (p["y_co"] + p["y_h2o"] + p["y_co2"] + p["y_h2"])
        feed = FeedComposition(y_co=p["y_co"], y_h2o=p["y_h2o"], y_co2=p["y_co2"],
                               y_h2=p["y_h2"], y_n2=max(0.0, y_n2))
        return CatalystDesign(
            base_metal=self.base_metal,
            base_wt_pct=p["base_wt_pct"],
            support=self.support,
            prep_method=self.prep_method,
            promoter=self.promoter,
            promoter_wt_pct=p["promoter_wt_pct"] if self.promoter else 0.0,
            temperature_c=p["temperature_c"],
            feed=feed,
            time_on_stream_h=p["time_on_stream_h"],
            w_f_ratio=p["w_f_ratio"],
        )


@dataclass(frozen=True)
class PsoRun:
    best_x: np.ndarray
    best_f: float
    trace: np.ndarray          # global-best objective after each iteration
    iterations_used: int
    evaluations: int


@dataclass(frozen=True)
class Solution:
    design: CatalystDesign
    prediction: Prediction
    iterations_used: int
    trace: np.ndarray


def pso_search(lo, hi, objective_batch, cfg: PsoConfig,
               repair_fn=None, progress=None) -> PsoRun:
    """Maximize over the box [lo, hi] (generic vector-level core).

    objective_batch maps an (S, D) position matrix to (S,) objective
    values; non-finite values count as failed evaluations (-inf fitness).
    """
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if lo.shape != hi.shape or np.any(lo > hi):
        raise InfeasibleSpace("bounds must satisfy lo <= hi per dimension")
    rng = np.random.default_rng(cfg.seed)
    s, d = cfg.swarm_size, lo.size
    vmax = 0.5 * (hi - lo)

    x = lo + rng.random((s, d)) * (hi - lo)
    v = np.zeros((s, d))
    if repair_fn is not None:
        x = repair_fn(x)
    f = _sanitize(objective_batch(x), s)

    pbest_x = x.copy()
    pbest_f = f.copy()
    gbest_x = x[0].copy()
    gbest_f = f[0]
    for i in range(1, s):
        if f[i] > gbest_f:
            gbest_f = f[i]
            gbest_x = x[i].copy()

    trace = [gbest_f]
    iterations = 1
    stall = 0
    while iterations < cfg.max_iters and stall < cfg.stagnation_window:
        r1 = rng.random((s, d))
        r2 = rng.random((s, d))
        v = cfg.inertia * v + cfg.cognitive * r1 * (pbest_x - x) \
            + cfg.social * r2 * (gbest_x - x)
        np.clip(v, -vmax, vmax, out=v)
        x = x + v
        out_of_bounds = (x < lo) | (x > hi)
        np.clip(x, lo, hi, out=x)
        v[out_of_bounds] = 0.0
        if repair_fn is not None:
            x = repair_fn(x)
        f = _sanitize(objective_batch(x), s)
        iterations += 1
        prev_best = gbest_f
        for i in range(s):
            if f[i] > pbest_f[i]:
                pbest_f[i] = f[i]
                pbest_x[i] = x[i]
            if f[i] > gbest_f:
                gbest_f = f[i]
                gbest_x = x[i].copy()
        trace.append(gbest_f)
        stall = 0 if gbest_f > prev_best + IMPROVEMENT_EPS else stall + 1
        if progress is not None:
            progress(iterations, cfg.max_iters)
    return PsoRun(best_x=gbest_x, best_f=float(gbest_f),
                  trace=np.array(trace), iterations_used=iterations,
                  evaluations=s * iterations)


def _sanitize(values, expected: int) -> np.ndarray:
    f = np.asarray(values, dtype=np.float64)
    if f.shape != (expected,):
        raise ValueError(f"objective returned shape {f.shape}, expected ({expected},)")
    return np.where(np.isfinite(f), f, -math.inf)


def optimize(space: DesignSpace, objective, cfg: PsoConfig, *,
             predictor, objective_batch=None, progress=None) -> Solution:
    """Maximize a per-design objective over the design space.

    ``objective`` maps one CatalystDesign to a real; ``objective_batch``
    (optional) evaluates a whole list at once for speed. A design whose
    evaluation raises scores -inf and the run continues. ``predictor``
    fills the Solution's Prediction from the winning design.
    """
    lo, hi = space.bounds_arrays()

    def eval_positions(xmat):
        designs = []
        for row in xmat:
            try:
                designs.append(space.to_design(row))
            except (AcewgsError, ValueError) as exc:
                logger.debug("position rejected: %s", exc)
                designs.append(None)
        values = np.full(len(designs), -math.inf)
        live = [i for i, dsn in enumerate(designs) if dsn is not None]
        if objective_batch is not None:
            try:
                batch = objective_batch([designs[i] for i in live])
                for j, i in enumerate(live):
                    values[i] = batch[j]
                return values
            except (AcewgsError, ValueError) as exc:
                logger.debug("batch objective failed, falling back: %s", exc)
        for i in live:
            try:
                values[i] = objective(designs[i])
            except (AcewgsError, ValueError) as exc:
                logger.debug("objective failed for a particle: %s", exc)
        return values

    run = pso_search(lo, hi, eval_positions, cfg,
                     repair_fn=space.repair, progress=progress)
    best_design = space.to_design(run.best_x)
    return Solution(design=best_design, prediction=predictor(best_design),
                    iterations_used=run.iterations_used, trace=run.trace)
