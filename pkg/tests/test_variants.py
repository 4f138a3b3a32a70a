import math

import pytest

from dpr_bounds.variants import (
    BOB_CHOOSES,
    COWM1_STYLE,
    ORIGINAL_COW,
    RANDOM_TRAIN_A_POSTERIORI,
    VariantSpec,
    Z_CHANNEL,
    variant_sifting_rate,
    z_channel_optimal_q,
    z_channel_rate,
)


class TestZChannel:
    def test_no_information_at_degenerate_bias(self):
        i1, _ = z_channel_rate(1e-9, 0.3, 0.1, 0.1)
        i2, _ = z_channel_rate(1.0 - 1e-9, 0.3, 0.1, 0.1)
        assert i1 == pytest.approx(0.0, abs=1e-6)
        assert i2 == pytest.approx(0.0, abs=1e-6)

    def test_asymptotic_prefactor(self):
        # r ~ (1/e)/ln2 * mu t eta ~ 0.5307 mu t eta at q = 1/e
        x = 1e-4
        _, r = z_channel_rate(math.exp(-1), 1.0, x, 1.0)
        assert r / x == pytest.approx(math.exp(-1) / math.log(2), abs=0.01)

    def test_asymptotic_form(self):
        x = 1e-5
        for q in (0.2, 0.5, 0.7):
            i_ab, _ = z_channel_rate(q, 1.0, x, 1.0)
            assert i_ab == pytest.approx(-q * math.log2(q) * x, rel=2e-3)

    def test_optimal_q_near_inverse_e(self):
        q_opt, _ = z_channel_optimal_q(1.0, 1e-4, 1.0)
        assert q_opt == pytest.approx(math.exp(-1), abs=1e-3)

    def test_rejects_bad_q(self):
        with pytest.raises(ValueError):
            z_channel_rate(0.0, 0.3, 0.1, 0.1)


class TestSiftingRates:
    def test_quoted_small_mu_t_values(self):
        mu, t, eta = 0.3, 0.01, 0.1
        x = mu * t * eta
        assert variant_sifting_rate(VariantSpec(ORIGINAL_COW), mu, t, eta) == 0.5 * x
        assert variant_sifting_rate(VariantSpec(COWM1_STYLE), mu, t, eta) == 0.5 * x
        assert variant_sifting_rate(
            VariantSpec(RANDOM_TRAIN_A_POSTERIORI), mu, t, eta) == 0.25 * x
        assert variant_sifting_rate(VariantSpec(BOB_CHOOSES), mu, t, eta) == 0.25 * x
        assert variant_sifting_rate(
            VariantSpec(Z_CHANNEL, q=0.4), mu, t, eta) == 1.0

    def test_f0_sifted_z_channel(self):
        spec = VariantSpec(Z_CHANNEL, q=0.4, f0=0.02)
        assert variant_sifting_rate(spec, 0.3, 0.01, 0.1) == pytest.approx(
            0.4 * 0.3 * 0.01 * 0.1 + 0.02)

    def test_ordering(self):
        mu, t, eta = 0.5, 0.5, 1.0  # mu t eta < 1
        rates = [variant_sifting_rate(VariantSpec(v, q=0.4), mu, t, eta)
                 for v in (Z_CHANNEL, ORIGINAL_COW, RANDOM_TRAIN_A_POSTERIORI)]
        assert rates[0] >= rates[1] >= rates[2]

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            VariantSpec("TIME_BIN")
        with pytest.raises(ValueError):
            VariantSpec(Z_CHANNEL)  # missing q
