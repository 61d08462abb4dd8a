"""Equilibrium constant and conversion solver tests."""

import math

import numpy as np
import pytest

from acewgs import thermo
from acewgs.errors import NonConvergence, OutOfRange
from acewgs.thermo import FeedComposition, equilibrium_constant, equilibrium_conversion

from oracles import grid_scan_xeq, sample_operating_point

# Frozen from an arbitrary-precision (mpmath, 50 digits) evaluation of
# exp(4577.8/T - 4.33).
K_ORACLE = {
    473.15: 209.59055098063266687,
    573.15: 38.748377916533492363,
    300.0: 55789.074590701969092,
    1500.0: 0.27855678811835042348,
}

# CO 0.1%, H2O 6.18%, CO2 5%, H2 0.15%, N2 88.57% (case-study feed).
CASE_FEED = FeedComposition(y_co=0.001, y_h2o=0.0618, y_co2=0.05,
                            y_h2=0.0015, y_n2=0.8857)


def random_feed(rng) -> FeedComposition:
    """Well-conditioned WGS feed: every species present at >= 1-3%."""
    y_co = rng.uniform(0.03, 0.3)
    y_h2o = rng.uniform(0.05, 0.6)
    y_co2 = rng.uniform(0.02, 0.3)
    y_h2 = rng.uniform(0.02, 0.5)
    total = y_co + y_h2o + y_co2 + y_h2
    if total > 0.98:
        scale = 0.98 / total
        y_co, y_h2o, y_co2, y_h2 = (v * scale for v in (y_co, y_h2o, y_co2, y_h2))
    return FeedComposition(y_co=y_co, y_h2o=y_h2o, y_co2=y_co2, y_h2=y_h2,
                           y_n2=1.0 - (y_co + y_h2o + y_co2 + y_h2))


class TestEquilibriumConstant:
    def test_matches_high_precision_oracle(self):
        for t, expected in K_ORACLE.items():
            assert equilibrium_constant(t) == pytest.approx(expected, rel=1e-14)

    def test_unity_at_zero_exponent(self):
        t = 4577.8 / 4.33
        assert equilibrium_constant(t) == pytest.approx(1.0, rel=1e-12)

    def test_strictly_decreasing(self):
        ts = np.linspace(300, 1500, 200)
        ks = [equilibrium_constant(t) for t in ts]
        assert all(a > b for a, b in zip(ks, ks[1:]))

    @pytest.mark.parametrize("t", [299.9, 1500.1, 0.0, -5.0])
    def test_out_of_range(self, t):
        with pytest.raises(OutOfRange):
            equilibrium_constant(t)


class TestEquilibriumConversion:
    def test_case_study_feed_matches_grid_oracle(self):
        t = 473.15
        res = equilibrium_conversion(CASE_FEED, t)
        expected = grid_scan_xeq(res.k_eq, CASE_FEED.y_co, CASE_FEED.y_h2o,
                                 CASE_FEED.y_co2, CASE_FEED.y_h2, points=10**6)
        assert res.x_eq == pytest.approx(expected, abs=1e-9)
        assert abs(res.residual) <= thermo.RESIDUAL_BOUND

    def test_dry_feed_returns_zero_with_flag(self):
        feed = FeedComposition(y_co=0.2, y_h2o=0.0, y_co2=0.1, y_h2=0.1, y_n2=0.6)
        res = equilibrium_conversion(feed, 500.0)
        assert res.x_eq == 0.0
        assert res.dry_feed

    def test_irreversible_limit_reaches_full_conversion(self):
        # Huge K (low T), excess water, no products: x_eq -> 1.
        feed = FeedComposition(y_co=0.001, y_h2o=0.5, y_co2=0.0, y_h2=0.0,
                               y_n2=0.499)
        res = equilibrium_conversion(feed, 300.0)
        assert res.x_eq == pytest.approx(1.0, abs=1e-6)

    def test_no_co_raises(self):
        feed = FeedComposition(y_co=0.0, y_h2o=0.5, y_co2=0.1, y_h2=0.1, y_n2=0.3)
        with pytest.raises(NonConvergence):
            equilibrium_conversion(feed, 500.0)

    def test_x_eq_below_water_limit(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            feed = random_feed(rng)
            res = equilibrium_conversion(feed, rng.uniform(450, 900))
            assert 0.0 <= res.x_eq <= min(1.0, feed.y_h2o / feed.y_co) + 1e-15

    def test_residual_within_bound_on_operating_envelope(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            feed, t = sample_operating_point(rng)
            res = equilibrium_conversion(feed, t)
            assert not res.clamped
            assert abs(res.residual) <= thermo.RESIDUAL_BOUND

    def test_past_equilibrium_feed_clamps_to_zero(self):
        # Product-heavy inlet at high temperature: no forward conversion.
        feed = FeedComposition(y_co=0.04, y_h2o=0.07, y_co2=0.15, y_h2=0.44,
                               y_n2=0.3)
        res = equilibrium_conversion(feed, 653.6)
        assert res.clamped and res.x_eq == 0.0

    def test_monotone_nonincreasing_in_temperature(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            feed = random_feed(rng)
            xs = [equilibrium_conversion(feed, t).x_eq
                  for t in np.linspace(423.15, 900.0, 50)]
            assert all(a >= b - 1e-12 for a, b in zip(xs, xs[1:]))

    def test_quotient_strictly_increasing(self):
        # The bisection bracket is valid because Q is monotone on (0, x_max).
        rng = np.random.default_rng(5)
        for _ in range(20):
            feed = random_feed(rng)
            x_max = min(1.0, feed.y_h2o / feed.y_co)
            xs = np.linspace(1e-6, x_max * (1 - 1e-6), 500)
            qs = [thermo.reaction_quotient(x, feed) for x in xs]
            assert all(a < b for a, b in zip(qs, qs[1:]))

    def test_product_fractions_sane(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            feed = random_feed(rng)
            res = equilibrium_conversion(feed, rng.uniform(450, 900))
            out = thermo.product_mole_fractions(feed, res.x_eq)
            values = list(out.values())
            assert all(-1e-12 <= v <= 1.0 + 1e-12 for v in values)
            assert math.fsum(values) == pytest.approx(1.0, abs=1e-9)

    def test_batch_agrees_with_scalar(self):
        rng = np.random.default_rng(13)
        feeds = [random_feed(rng) for _ in range(64)]
        ts = rng.uniform(443.15, 900.0, size=64)
        batch = thermo.equilibrium_conversion_batch(
            ts,
            np.array([f.y_co for f in feeds]),
            np.array([f.y_h2o for f in feeds]),
            np.array([f.y_co2 for f in feeds]),
            np.array([f.y_h2 for f in feeds]),
        )
        for i, feed in enumerate(feeds):
            assert batch[i] == equilibrium_conversion(feed, ts[i]).x_eq


class TestFeedComposition:
    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            FeedComposition(y_co=0.5, y_h2o=0.5, y_co2=0.5, y_h2=0.0, y_n2=0.0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            FeedComposition(y_co=-0.1, y_h2o=0.6, y_co2=0.2, y_h2=0.2, y_n2=0.1)
