import math

import numpy as np
import pytest

from dpr_bounds.bsa import (
    asymptotic_optimum,
    chi_bsa_cow,
    chi_bsa_dps,
    gamma_eve,
    optimize_bsa,
    r0_bsa_limit,
    rate_bsa,
)
from dpr_bounds.channel import ChannelModel, transmission


class TestChi:
    def test_unit_transmission_gives_eve_nothing(self):
        assert chi_bsa_cow(0.7, 1.0) == 0.0
        assert chi_bsa_dps(0.7, 1.0) == 0.0

    def test_cow_long_distance_value(self):
        # frozen from h((1 - e^-mu)/2) at mu = 0.4583
        assert chi_bsa_cow(0.4583, 0.0) == pytest.approx(0.68837, abs=1e-4)

    def test_dps_long_distance_value(self):
        # frozen from 2h((1-g^2)/2) - h((1-g^4)/2) at mu = 0.2808, g = e^-mu
        assert chi_bsa_dps(0.2808, 0.0) == pytest.approx(0.57902, abs=1e-4)

    def test_large_mu_saturates(self):
        assert chi_bsa_cow(50.0, 0.5) == pytest.approx(1.0, abs=1e-9)
        assert chi_bsa_dps(50.0, 0.5) == pytest.approx(1.0, abs=1e-9)

    def test_bounded(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            mu, t = rng.uniform(0.01, 3.0), rng.uniform(0.0, 1.0)
            assert 0.0 <= chi_bsa_dps(mu, t) <= 1.0 + 1e-12


class TestRate:
    def test_no_attack_at_unit_transmission(self):
        mu, eta = 0.6, 0.25
        assert rate_bsa("cow", mu, 1.0, eta) == pytest.approx(
            0.5 * (1 - math.exp(-mu * eta)))
        assert rate_bsa("dps", mu, 1.0, eta) == pytest.approx(
            1 - math.exp(-mu * eta))

    def test_nonnegative_everywhere(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            mu, t = rng.uniform(0.01, 4.0), rng.uniform(1e-4, 1.0)
            assert rate_bsa("cow", mu, t, 0.1) >= 0.0
            assert rate_bsa("dps", mu, t, 0.1) >= 0.0

    def test_asymptotic_prefactors(self):
        assert rate_bsa("cow", 0.4583, 1e-4, 0.1) / 1e-5 == pytest.approx(
            0.0714, abs=3e-4)
        assert rate_bsa("dps", 0.2808, 1e-4, 0.1) / 1e-5 == pytest.approx(
            0.1182, abs=3e-4)


class TestOptimize:
    def test_asymptotic_constants(self):
        mu_cow, r0_cow = asymptotic_optimum("cow")
        assert mu_cow == pytest.approx(0.4583, abs=1e-3)
        assert r0_cow == pytest.approx(0.0714, abs=5e-4)
        mu_dps, r0_dps = asymptotic_optimum("dps")
        assert mu_dps == pytest.approx(0.2808, abs=1e-3)
        assert r0_dps == pytest.approx(0.1182, abs=5e-4)

    def test_small_t_matches_asymptote(self):
        pt = optimize_bsa("cow", 1e-3, 0.1)
        assert pt.mu == pytest.approx(0.4583, abs=2e-3)
        assert pt.rate / (1e-3 * 0.1) == pytest.approx(0.0714, abs=7e-4)

    def test_linearity_onset_with_distance(self):
        # frozen from the exact finite-t optimization: ~5.8% above the
        # limiting prefactor at 50 km, inside 1% only from ~100 km on
        t50 = transmission(50.0, ChannelModel())
        pt = optimize_bsa("cow", t50, 0.1)
        assert pt.rate / (t50 * 0.1) == pytest.approx(0.075563, abs=1e-5)
        t100 = transmission(100.0, ChannelModel())
        pt = optimize_bsa("cow", t100, 0.1)
        assert pt.rate / (t100 * 0.1) == pytest.approx(0.0714, rel=0.01)

    def test_saturation_at_unit_transmission(self):
        pt = optimize_bsa("cow", 1.0, 0.1)
        assert pt.saturated
        assert pt.mu == pytest.approx(5.0, abs=1e-4)

    def test_unimodal_golden_equals_dense_grid(self):
        for proto, t in (("cow", 0.05), ("dps", 0.02), ("cow", 0.5)):
            pt = optimize_bsa(proto, t, 0.1)
            grid = np.geomspace(1e-4, 5.0, 20000)
            vals = [rate_bsa(proto, m, t, 0.1) for m in grid]
            assert pt.mu == pytest.approx(grid[int(np.argmax(vals))], abs=1e-4)

    def test_mu_opt_converges_with_distance(self):
        model = ChannelModel()
        mu_inf, _ = asymptotic_optimum("dps")
        errs = []
        for d in (50.0, 100.0, 150.0):
            pt = optimize_bsa("dps", transmission(d, model), model.eta)
            errs.append(abs(pt.mu - mu_inf))
        assert errs[0] >= errs[1] >= errs[2] - 1e-9
        assert errs[-1] < 1e-3

    def test_gamma_eve_bounds(self):
        assert gamma_eve(0.3, 1.0) == 1.0
        assert 0.0 < gamma_eve(0.3, 0.2) < 1.0


class TestLimitPrefactor:
    def test_limit_consistent_with_small_t(self):
        for proto in ("cow", "dps"):
            for mu in (0.2, 0.45, 0.9):
                full = rate_bsa(proto, mu, 1e-6, 0.1) / 1e-7
                assert r0_bsa_limit(proto, mu) == pytest.approx(full, rel=1e-3)
