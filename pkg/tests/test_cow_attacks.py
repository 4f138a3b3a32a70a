import math

import numpy as np
import pytest

from dpr_bounds import bsa
from dpr_bounds.cow_attacks import (
    CowM2Attack,
    CowTwoPulseAttack,
    cow2pa_build_states,
    cow2pa_chi,
    cow2pa_decoy_completion,
    cow2pa_feasible,
    cow2pa_full_information_angles,
    cow2pa_min_overlap,
    cow2pa_mu_optimized,
    cow2pa_overlap,
    cow2pa_rate0,
    cowm1_build_states,
    cowm1_case2_mixtures,
    cowm1_chi,
    cowm1_optimize,
    cowm2_build_states,
    cowm2_chi,
    cowm2_feasible,
    cowm2_full_information_angles,
    cowm2_min_overlap,
    cowm2_mu_optimized,
    cowm2_overlap,
    cowm2_rate0,
    _cowm1_info_core,
)
from dpr_bounds.optimize import OptConfig
from dpr_bounds.quantum import binary_entropy


class TestCow2paClosedForm:
    def test_perfect_visibility_reduces_to_vacuum_overlap(self):
        for mu in (0.1, 0.4583, 1.0):
            assert cow2pa_min_overlap(mu, 1.0) == pytest.approx(math.exp(-mu))

    def test_half_visibility_gives_full_information(self):
        for mu in (0.05, 0.5, 2.0):
            assert cow2pa_min_overlap(mu, 0.5) == 0.0

    def test_frozen_value(self):
        # 0.8 e^-0.2 - 0.6 sqrt(1 - e^-0.4), direct evaluation
        assert cow2pa_min_overlap(0.2, 0.9) == pytest.approx(0.310478, abs=1e-5)

    def test_chi_composition(self):
        ov = cow2pa_min_overlap(0.2, 0.9)
        assert cow2pa_chi(0.2, 0.0, 0.9) == pytest.approx(
            binary_entropy((1 + ov) / 2), abs=1e-12)
        assert cow2pa_chi(0.2, 0.0, 0.9) == pytest.approx(0.92930, abs=1e-4)

    def test_chi_matches_bsa_limit_at_v1(self):
        for mu in (0.2, 0.4583, 0.9):
            assert cow2pa_chi(mu, 0.0, 1.0) == pytest.approx(
                bsa.chi_bsa_cow(mu, 0.0), abs=1e-12)

    def test_full_error_leaks_everything(self):
        assert cow2pa_chi(0.3, 1.0, 0.9) == 1.0

    def test_rate0_composition(self):
        assert cow2pa_rate0(0.2, 0.0, 0.9) == pytest.approx(0.0070698, abs=1e-6)
        # chi >= 1 - h(Q) means no key
        assert cow2pa_rate0(2.0, 0.2, 0.6) <= 0.0

    def test_boundary_continuity(self):
        V = 0.9
        gamma_b = 2 * math.sqrt(V * (1 - V))
        mu_b = -math.log(gamma_b)
        assert cow2pa_min_overlap(mu_b, V) == 0.0
        assert cow2pa_min_overlap(mu_b - 1e-9, V) == pytest.approx(0.0, abs=1e-7)

    def test_monotonicity_in_q_and_v(self):
        mu = 0.3
        vs = np.linspace(0.75, 1.0, 12)
        chis = [cow2pa_chi(mu, 0.02, v) for v in vs]
        assert all(a >= b - 1e-12 for a, b in zip(chis, chis[1:]))
        qs = np.linspace(0.0, 0.2, 12)
        chis = [cow2pa_chi(mu, q, 0.95) for q in qs]
        assert all(b >= a - 1e-12 for a, b in zip(chis, chis[1:]))

    def test_mu_optimized_at_v1_matches_bsa(self):
        mu_opt, r0, _, _ = cow2pa_mu_optimized(0.0, 1.0)
        assert mu_opt == pytest.approx(0.4583, abs=1e-3)
        assert r0 == pytest.approx(0.0714, abs=5e-4)


class TestCow2paStates:
    def test_optimal_states_reach_closed_form(self):
        for mu, V in ((0.2, 0.9), (0.4, 0.95), (0.1, 0.8)):
            ov = cow2pa_overlap(mu, V, 1.0, 0.0, 0.0)
            assert abs(ov) == pytest.approx(cow2pa_min_overlap(mu, V), abs=1e-12)

    def test_build_validates_constraints(self):
        states = cow2pa_build_states(0.3, 0.9, 1.02, 0.3, -0.2, 0.1, 0.4)
        v0m, vm0 = states["v_0mu"], states["v_mu0"]
        assert v0m.inner(vm0).real == pytest.approx(math.exp(-0.3), abs=1e-12)

    def test_rejects_bad_lambda(self):
        with pytest.raises(ValueError, match="split factor"):
            cow2pa_build_states(0.3, 0.9, 2.0)

    def test_full_information_angles_null_overlap(self):
        for mu, V in ((1.5, 0.8), (0.5, 0.55), (3.0, 0.9), (0.2, 0.4)):
            assert not cow2pa_feasible(mu, V)
            lam, th0, th1, ph0, ph1 = cow2pa_full_information_angles(mu, V)
            assert abs(cow2pa_overlap(mu, V, lam, th0, th1, ph0, ph1)) < 1e-9

    def test_full_information_rejected_when_feasible(self):
        with pytest.raises(ValueError):
            cow2pa_full_information_angles(0.2, 0.9)

    def test_attack_container(self):
        atk = CowTwoPulseAttack.optimal(0.2, 0.9)
        assert atk.feasible and atk.lam == 1.0
        assert 0.0 <= atk.min_overlap <= atk.gamma
        atk2 = CowTwoPulseAttack.optimal(1.5, 0.8)
        assert not atk2.feasible and atk2.min_overlap == 0.0


class TestDecoyCompletion:
    def test_all_visibility_expressions_equal_v(self):
        # the construction is re-verified to 1e-10 internally
        v_mm, p10, p01 = cow2pa_decoy_completion(0.2, 0.9)
        assert p01.inner(p10).real == pytest.approx(0.9, abs=1e-10)

    def test_perfect_visibility_collapses_pair(self):
        v_mm, p10, p01 = cow2pa_decoy_completion(0.25, 1.0)
        assert np.allclose(p10.amplitudes, p01.amplitudes, atol=1e-12)

    def test_unitarity_overlaps(self):
        v_mm, _, _ = cow2pa_decoy_completion(0.3, 0.92)
        states = cow2pa_build_states(0.3, 0.92)
        for key in ("v_mu0", "v_0mu"):
            assert v_mm.inner(states[key]).real == pytest.approx(
                math.exp(-0.15), abs=1e-10)

    def test_infeasible_rejected(self):
        with pytest.raises(ValueError):
            cow2pa_decoy_completion(1.5, 0.8)


class TestCowm1:
    def test_build_constraints_hold(self):
        atk = cowm1_build_states(0.35, 0.9, 0.4, 1.1, -0.6)
        s = atk.states
        g = math.exp(-0.35)
        assert s["v_0mu"].inner(s["v_mu0"]).real == pytest.approx(g, abs=1e-12)
        assert s["v_00"].inner(s["v_mumu"]).real == pytest.approx(g, abs=1e-12)
        for a, b in (("v_00", "v_mu0"), ("v_00", "v_0mu"),
                     ("v_mumu", "v_mu0"), ("v_mumu", "v_0mu")):
            assert s[a].inner(s[b]).real == pytest.approx(
                math.exp(-0.175), abs=1e-12)

    def test_strengthened_visibilities(self):
        V = 0.88
        atk = cowm1_build_states(0.3, V, 1.2, -0.4, 2.2)
        s = atk.states
        for v_name, p_name in (("v_0mu", "p01_0mu"), ("v_mu0", "p10_mu0"),
                               ("v_mumu", "p01_mumu"), ("v_mumu", "p10_mumu")):
            assert s[v_name].inner(s[p_name]).real == pytest.approx(
                math.sqrt(V), abs=1e-10)
        assert s["p01_mumu"].inner(s["p10_mumu"]).real == pytest.approx(V, abs=1e-10)

    def test_v1_p_states_equal_v_states(self):
        atk = cowm1_build_states(0.3, 1.0, 0.7, 0.2, 1.4)
        s = atk.states
        assert np.allclose(s["p10_mu0"].amplitudes, s["v_mu0"].amplitudes, atol=1e-12)
        assert np.allclose(s["p01_mumu"].amplitudes, s["v_mumu"].amplitudes, atol=1e-12)

    def test_case2_mixtures_are_unit_trace_states(self):
        rng = np.random.default_rng(6)
        for _ in range(5):
            params = rng.uniform(0, 2 * np.pi, 3)
            atk = cowm1_build_states(0.4, 0.93, *params)
            rho0, rho1 = cowm1_case2_mixtures(atk)
            assert rho0.weight == pytest.approx(1.0, abs=1e-12)
            assert rho1.weight == pytest.approx(1.0, abs=1e-12)
            assert rho0.dim == 16

    def test_chi_v1_equals_original_cow(self):
        for params in ((0.0, 0.0, 0.0), (0.4, 1.0, -0.7)):
            assert cowm1_chi(0.4583, 0.0, 1.0, params) == pytest.approx(
                cow2pa_chi(0.4583, 0.0, 1.0), abs=1e-10)

    def test_chi_full_error(self):
        assert cowm1_chi(0.3, 1.0, 0.9, (0.1, 0.2, 0.3)) == pytest.approx(1.0)

    def test_fast_core_matches_validated_path(self):
        rng = np.random.default_rng(8)
        for _ in range(5):
            params = tuple(rng.uniform(0, 2 * np.pi, 3))
            q = rng.uniform(0, 0.1)
            fast = q + (1 - q) * _cowm1_info_core(0.3, 0.9, *params)
            assert cowm1_chi(0.3, q, 0.9, params) == pytest.approx(fast, abs=1e-11)

    def test_optimize_reproducible_across_seeds(self):
        vals = []
        for seed in (1, 2, 3, 4, 5):
            res = cowm1_optimize(0.3, 0.0, 0.95, OptConfig(n_starts=8, seed=seed))
            vals.append(res.chi)
        assert max(vals) - min(vals) < 1e-6

    def test_optimum_no_stronger_than_original_cow(self):
        # the a-posteriori pairing can only hurt Eve
        for mu, V in ((0.3, 0.95), (0.45, 0.9)):
            res = cowm1_optimize(mu, 0.0, V, OptConfig(n_starts=8))
            assert res.chi <= cow2pa_chi(mu, 0.0, V) + 1e-9
            assert res.r0 >= cow2pa_rate0(mu, 0.0, V) - 1e-9


class TestCowm2:
    def test_frozen_value(self):
        assert cowm2_min_overlap(0.2, 0.98) == pytest.approx(0.835532, abs=1e-5)

    def test_perfect_visibility(self):
        for mu in (0.1, 0.5):
            assert cowm2_min_overlap(mu, 1.0) == pytest.approx(math.exp(-mu / 2))

    def test_boundary_continuity(self):
        mu = 0.4
        V = 1.0 - math.exp(-mu)
        assert cowm2_min_overlap(mu, V) == pytest.approx(0.0, abs=1e-12)
        assert cowm2_min_overlap(mu, V + 1e-9) == pytest.approx(0.0, abs=1e-4)

    def test_chi_uses_squared_overlap(self):
        ov = cowm2_min_overlap(0.2, 0.98)
        assert cowm2_chi(0.2, 0.0, 0.98) == pytest.approx(
            binary_entropy((1 + ov * ov) / 2), abs=1e-12)
        assert cowm2_chi(0.2, 0.0, 0.98) == pytest.approx(0.6123, abs=2e-4)
        assert cowm2_rate0(0.2, 0.0, 0.98) == pytest.approx(0.0388, abs=2e-5)

    def test_v1_matches_original_cow_and_bsa(self):
        for mu in (0.2, 0.4583):
            assert cowm2_chi(mu, 0.0, 1.0) == pytest.approx(
                cow2pa_chi(mu, 0.0, 1.0), abs=1e-12)

    def test_full_information_angles(self):
        for mu, V in ((1.5, 0.7), (0.7, 0.4), (2.5, 0.9)):
            assert not cowm2_feasible(mu, V)
            th, ph = cowm2_full_information_angles(mu, V)
            assert abs(cowm2_overlap(mu, V, th, ph)) < 1e-9

    def test_build_states_checked(self):
        states = cowm2_build_states(0.3, 0.95, 0.4, 1.0)
        assert states["v_0"].inner(states["v_mu"]).real == pytest.approx(
            math.exp(-0.15), abs=1e-12)

    def test_attack_container(self):
        atk = CowM2Attack.optimal(0.2, 0.98)
        assert atk.feasible and atk.theta == 0.0
        atk2 = CowM2Attack.optimal(1.5, 0.7)
        assert not atk2.feasible and atk2.min_overlap == 0.0

    def test_mu_optimized_at_v1_matches_bsa(self):
        mu_opt, r0, _, _ = cowm2_mu_optimized(0.0, 1.0)
        assert mu_opt == pytest.approx(0.4583, abs=1e-3)
        assert r0 == pytest.approx(0.0714, abs=5e-4)
