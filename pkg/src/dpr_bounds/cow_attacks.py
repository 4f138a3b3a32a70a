"""Long-distance-limit collective attacks on the COW protocol family.

Three attack analyses share this module:

* two-pulse attack on the original pairing (closed-form optimum),
* two-pulse attack on the a-posteriori consecutive pairing (three-angle
  family, optimized numerically),
* one-pulse attack on the arbitrary pairing (closed-form optimum).

States that enter no constraint are never materialized: Eve takes them
orthogonal to everything else, which contributes the additive error term
already folded into the chi formulas.  Everything is evaluated in the
long-distance limit, where the key rate is r0 * t * eta.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .optimize import OptConfig, OptResult, maximize, maximize_scalar
from .quantum import (
    DensityMatrix,
    StateVector,
    binary_entropy,
    holevo_binary,
    mixture_entropy,
    pure_pair_chi,
)

MU_SEARCH_MIN = 1e-3
MU_SEARCH_MAX = 5.0
CONSTRAINT_TOL = 1e-10


# ---------------------------------------------------------------------------
# Two-pulse attack, original pairing
# ---------------------------------------------------------------------------

def cow2pa_feasible(mu: float, V: float) -> bool:
    """Key distribution is possible only for gamma > 2 sqrt(V(1-V)), V > 1/2."""
    gamma = math.exp(-mu)
    return V > 0.5 and gamma > 2.0 * math.sqrt(V * (1.0 - V))


def cow2pa_min_overlap(mu: float, V: float) -> float:
    """Smallest overlap Eve can reach between her two bit-encoding states.

    Inside the feasible region the minimum is
    (2V-1) gamma - 2 sqrt(V(1-V)) sqrt(1-gamma^2) with gamma = exp(-mu);
    outside she reaches orthogonal states and learns everything.
    """
    if not 0.0 <= V <= 1.0:
        raise ValueError("V must lie in [0, 1]")
    if mu <= 0:
        raise ValueError("mu must be positive")
    gamma = math.exp(-mu)
    if not cow2pa_feasible(mu, V):
        return 0.0
    return (2.0 * V - 1.0) * gamma \
        - 2.0 * math.sqrt(V * (1.0 - V)) * math.sqrt(1.0 - gamma * gamma)


def cow2pa_chi(mu: float, Q: float, V: float) -> float:
    """Eve's information per bit: every error leaks fully, the rest leaks
    through the optimal state pair."""
    return Q + (1.0 - Q) * pure_pair_chi(cow2pa_min_overlap(mu, V))


def cow2pa_rate0(mu: float, Q: float, V: float) -> float:
    """Long-distance rate prefactor: r = r0 * t * eta."""
    return 0.5 * mu * (1.0 - binary_entropy(Q) - cow2pa_chi(mu, Q, V))


def _cow2pa_basis(mu: float):
    gamma = math.exp(-mu)
    a = math.sqrt((1.0 + gamma) / 2.0)
    b = math.sqrt((1.0 - gamma) / 2.0)
    v_m0 = np.array([a, b, 0.0], dtype=complex)
    v_0m = np.array([a, -b, 0.0], dtype=complex)
    v_m0_perp = np.array([b, -a, 0.0], dtype=complex)
    v_0m_perp = np.array([b, a, 0.0], dtype=complex)
    w = np.array([0.0, 0.0, 1.0], dtype=complex)
    return gamma, v_m0, v_0m, v_m0_perp, v_0m_perp, w


def _cow2pa_p_arrays(mu: float, V: float, lam: float, theta0: float,
                     theta1: float, phi0: float, phi1: float):
    if not (V - 1e-12 <= lam <= 1.0 / V + 1e-12):
        raise ValueError(f"intensity split factor {lam} outside [V, 1/V]")
    _, v_m0, v_0m, v_m0_perp, v_0m_perp, w = _cow2pa_basis(mu)
    lam = min(max(lam, V), 1.0 / V)
    s_a = math.sqrt(max(1.0 - lam * V, 0.0))
    s_b = math.sqrt(max(1.0 - V / lam, 0.0))
    p10 = (math.sqrt(lam * V) * v_m0
           - s_a * math.cos(theta0) * np.exp(1j * phi0) * v_m0_perp
           + s_a * math.sin(theta0) * w)
    p01 = (math.sqrt(V / lam) * v_0m
           - s_b * math.cos(theta1) * np.exp(1j * phi1) * v_0m_perp
           + s_b * math.sin(theta1) * w)
    return p10, p01


def cow2pa_overlap(mu: float, V: float, lam: float, theta0: float,
                   theta1: float, phi0: float = 0.0, phi1: float = 0.0) -> complex:
    """<p01|p10> for one member of the five-parameter attack family."""
    p10, p01 = _cow2pa_p_arrays(mu, V, lam, theta0, theta1, phi0, phi1)
    return complex(np.vdot(p01, p10))


def cow2pa_build_states(mu: float, V: float, lam: float = 1.0,
                        theta0: float = 0.0, theta1: float = 0.0,
                        phi0: float = 0.0, phi1: float = 0.0) -> dict:
    """Explicit vacuum and one-photon states of the attack family.

    Raises if the construction violates its defining inner-product
    constraints beyond 1e-10 (unit norms, <v0m|vm0> = gamma and the
    visibility product equal to V).
    """
    gamma, v_m0, v_0m, _, _, _ = _cow2pa_basis(mu)
    p10, p01 = _cow2pa_p_arrays(mu, V, lam, theta0, theta1, phi0, phi1)
    states = {
        "v_mu0": StateVector(v_m0),
        "v_0mu": StateVector(v_0m),
        "p10_mu0": StateVector(p10),
        "p01_0mu": StateVector(p01),
    }
    if abs(np.vdot(v_0m, v_m0) - gamma) > CONSTRAINT_TOL:
        raise ValueError("vacuum-state overlap violated")
    visibility = np.vdot(v_0m, p01) * np.vdot(p10, v_m0)
    if abs(visibility.real - V) > CONSTRAINT_TOL:
        raise ValueError("visibility constraint violated")
    return states


def cow2pa_full_information_angles(mu: float, V: float) -> tuple:
    """(lam, theta0, theta1, phi0, phi1) driving the overlap to zero.

    Only exists outside the feasible region.  Solving <p01|p10> = 0 at
    lam = 1, theta1 = phi0 = phi1 = 0 gives
    cos(theta0) = (V g - S) / ((1-V) g + S), S = sqrt(V(1-V)(1-g^2)).
    """
    if cow2pa_feasible(mu, V):
        raise ValueError("full information is unreachable in the feasible region")
    gamma = math.exp(-mu)
    s = math.sqrt(V * (1.0 - V)) * math.sqrt(1.0 - gamma * gamma)
    c = (V * gamma - s) / ((1.0 - V) * gamma + s)
    return 1.0, math.acos(min(max(c, -1.0), 1.0)), 0.0, 0.0, 0.0


@dataclass(frozen=True)
class CowTwoPulseAttack:
    """Optimal member of the two-pulse attack family at one (mu, V)."""

    gamma: float
    lam: float
    theta0: float
    theta1: float
    phi0: float
    phi1: float
    min_overlap: float
    feasible: bool

    def __post_init__(self):
        if not 0.0 <= self.min_overlap <= self.gamma + 1e-12:
            raise ValueError("overlap must lie in [0, gamma]")

    @classmethod
    def optimal(cls, mu: float, V: float) -> "CowTwoPulseAttack":
        feasible = cow2pa_feasible(mu, V)
        if feasible:
            lam, th0, th1, ph0, ph1 = 1.0, 0.0, 0.0, 0.0, 0.0
        else:
            lam, th0, th1, ph0, ph1 = cow2pa_full_information_angles(mu, V)
        return cls(gamma=math.exp(-mu), lam=lam, theta0=th0, theta1=th1,
                   phi0=ph0, phi1=ph1, min_overlap=cow2pa_min_overlap(mu, V),
                   feasible=feasible)


def cow2pa_decoy_completion(mu: float, V: float) -> tuple:
    """Eve's states for the double-non-empty sequence, completing the attack.

    The optimal bit-state pair ignores every constraint involving this
    sequence, and the returned explicit three-dimensional vectors show the
    remaining constraints can always be met: decoy sequences add nothing
    to the security against this attack.  All five visibility expressions
    and the vacuum overlaps are re-verified to 1e-10.
    """
    if not cow2pa_feasible(mu, V):
        raise ValueError("completion defined on the feasible region only")
    gamma, v_m0, v_0m, _, _, _ = _cow2pa_basis(mu)
    b1 = 2.0 * gamma / (1.0 + gamma)
    b2 = (1.0 - gamma) / (1.0 + gamma)
    a1 = 2.0 * V / (1.0 + V)
    a2 = (1.0 - V) / (1.0 + V)
    c = math.sqrt(a1 * b1) + math.sqrt(a2 * b2)
    s = math.sqrt(a1 * b2) - math.sqrt(a2 * b1)
    hi = math.sqrt((1.0 + V) / 2.0)
    lo = math.sqrt((1.0 - V) / 2.0)
    v_mm = np.array([math.sqrt(b1), 0.0, math.sqrt(b2)], dtype=complex)
    p10_mm = np.array([hi * c, lo, hi * s], dtype=complex)
    p01_mm = np.array([hi * c, -lo, hi * s], dtype=complex)

    p10, p01 = _cow2pa_p_arrays(mu, V, 1.0, 0.0, 0.0, 0.0, 0.0)
    sqrt_gamma = math.sqrt(gamma)
    checks = [
        (np.vdot(v_0m, v_m0), gamma),
        (np.vdot(v_mm, v_m0), sqrt_gamma),
        (np.vdot(v_mm, v_0m), sqrt_gamma),
        (np.vdot(v_mm, v_mm), 1.0),
        (np.vdot(p10_mm, p10_mm), 1.0),
        (np.vdot(p01_mm, p01_mm), 1.0),
        # the five visibility expressions, all required to equal V
        (np.vdot(p01_mm, p10_mm), V),
        (np.vdot(v_0m, p01) * np.vdot(p10, v_m0), V),
        (np.vdot(v_mm, p01_mm) * np.vdot(p10, v_m0), V),
        (np.vdot(v_0m, p01) * np.vdot(p10_mm, v_mm), V),
        (np.vdot(v_mm, p01_mm) * np.vdot(p10_mm, v_mm), V),
    ]
    for got, want in checks:
        if abs(got - want) > CONSTRAINT_TOL:
            raise ValueError(f"completion constraint violated: {got} != {want}")
    return StateVector(v_mm), StateVector(p10_mm), StateVector(p01_mm)


def cow2pa_mu_optimized(Q: float, V: float, *, tol: float = 1e-5,
                        grid_points: int = 128) -> tuple:
    """(mu_opt, r0, chi, n_evals) after the intensity optimization."""
    res = maximize_scalar(lambda mu: cow2pa_rate0(mu, Q, V),
                          MU_SEARCH_MIN, MU_SEARCH_MAX, tol,
                          grid_points=grid_points, log_grid=True)
    return res.x, res.f, cow2pa_chi(res.x, Q, V), res.n_evals


# ---------------------------------------------------------------------------
# Two-pulse attack, a-posteriori consecutive pairing
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=256)
def _cowm1_basis(mu: float):
    """Fixed four-dimensional frame for the vacuum states and their
    orthogonal complements (all real)."""
    g = math.exp(-mu)
    a = math.sqrt((1.0 + g) / 2.0)
    b = math.sqrt((1.0 - g) / 2.0)
    r1 = math.sqrt(2.0 * g / (1.0 + g))
    r2 = math.sqrt((1.0 - g) / (1.0 + g))
    basis = {
        "v_mu0": np.array([a, b, 0.0, 0.0]),
        "v_0mu": np.array([a, -b, 0.0, 0.0]),
        "v_00": np.array([r1, 0.0, r2, 0.0]),
        "v_mumu": np.array([r1, 0.0, -g * r2, 1.0 - g]),
        "v_mu0_perp": np.array([b, -a, 0.0, 0.0]),
        "v_0mu_perp": np.array([b, a, 0.0, 0.0]),
        "v_mumu_perp1": np.array([0.0, 0.0, math.sqrt(1.0 - g * g), g]),
        "v_mumu_perp2": np.array([r2, 0.0, g * r1, -math.sqrt(2.0 * g) * math.sqrt(1.0 - g)]),
        "w2": np.array([0.0, 1.0, 0.0, 0.0]),
        "w3": np.array([0.0, 0.0, 1.0, 0.0]),
        "w4": np.array([0.0, 0.0, 0.0, 1.0]),
    }
    for arr in basis.values():
        arr.setflags(write=False)
    return g, basis


def _cowm1_arrays(mu: float, V: float, theta0: float, theta1: float, phi: float):
    """All eight constrained states as raw arrays (vacuum + one-photon)."""
    _, bs = _cowm1_basis(mu)
    sv = math.sqrt(V)
    sw = math.sqrt(1.0 - V)
    c0, s0 = math.cos(theta0), math.sin(theta0)
    c1, s1 = math.cos(theta1), math.sin(theta1)
    cp, sp = math.cos(phi), math.sin(phi)
    w_mu0 = c0 * bs["v_mu0_perp"] + s0 * c1 * bs["w3"] + s0 * s1 * bs["w4"]
    w_0mu = c0 * bs["v_0mu_perp"] + s0 * c1 * bs["w3"] + s0 * s1 * bs["w4"]
    mid = (cp * bs["v_mumu_perp1"] + sp * bs["v_mumu_perp2"]) / math.sqrt(2.0)
    w_mm10 = mid - bs["w2"] / math.sqrt(2.0)
    w_mm01 = mid + bs["w2"] / math.sqrt(2.0)
    return {
        "v_mu0": bs["v_mu0"],
        "v_0mu": bs["v_0mu"],
        "v_00": bs["v_00"],
        "v_mumu": bs["v_mumu"],
        "p10_mu0": sv * bs["v_mu0"] - sw * w_mu0,
        "p01_0mu": sv * bs["v_0mu"] - sw * w_0mu,
        "p10_mumu": sv * bs["v_mumu"] - sw * w_mm10,
        "p01_mumu": sv * bs["v_mumu"] - sw * w_mm01,
    }


def _cowm1_verify(arrays: dict, mu: float, V: float) -> None:
    g = math.exp(-mu)
    sg = math.sqrt(g)
    sv = math.sqrt(V)
    d = lambda x, y: float(np.dot(arrays[x], arrays[y]))
    checks = [
        (d("v_0mu", "v_mu0"), g),
        (d("v_mumu", "v_mu0"), sg),
        (d("v_mumu", "v_0mu"), sg),
        (d("v_00", "v_mumu"), g),
        (d("v_00", "v_mu0"), sg),
        (d("v_00", "v_0mu"), sg),
        # strengthened visibility relations
        (d("v_0mu", "p01_0mu"), sv),
        (d("v_mu0", "p10_mu0"), sv),
        (d("v_mumu", "p01_mumu"), sv),
        (d("v_mumu", "p10_mumu"), sv),
        (d("p01_mumu", "p10_mumu"), V),
    ]
    checks.extend((d(name, name), 1.0) for name in arrays)
    for got, want in checks:
        if abs(got - want) > CONSTRAINT_TOL:
            raise ValueError(f"state construction violated a constraint: {got} != {want}")


@dataclass(frozen=True)
class CowM1Attack:
    """Three-angle attack family for the a-posteriori consecutive pairing."""

    mu: float
    V: float
    theta0: float
    theta1: float
    phi: float
    states: dict

    @property
    def two_pulse_overlap(self) -> float:
        return float(np.dot(self.states["p10_mu0"].amplitudes.real,
                            self.states["p01_0mu"].amplitudes.real))


def cowm1_build_states(mu: float, V: float, theta0: float, theta1: float,
                       phi: float) -> CowM1Attack:
    """Construct and verify the twelve-constraint state family."""
    arrays = _cowm1_arrays(mu, V, theta0, theta1, phi)
    _cowm1_verify(arrays, mu, V)
    states = {name: StateVector(arr.astype(complex)) for name, arr in arrays.items()}
    return CowM1Attack(mu=mu, V=V, theta0=theta0, theta1=theta1, phi=phi,
                       states=states)


def _cowm1_case2_vectors(arrays: dict):
    """Sixteen-dimensional product states of the straddled-pairing case."""
    bit0 = [np.kron(arrays[x], arrays[y])
            for x in ("p01_0mu", "p01_mumu") for y in ("v_00", "v_0mu")]
    bit1 = [np.kron(arrays[x], arrays[y])
            for x in ("v_00", "v_mu0") for y in ("p10_mu0", "p10_mumu")]
    return np.array(bit0), np.array(bit1)


def cowm1_case2_mixtures(attack: CowM1Attack) -> tuple:
    """Eve's conditioned four-pulse mixtures as validated density matrices."""
    arrays = {name: sv.amplitudes.real for name, sv in attack.states.items()}
    bit0, bit1 = _cowm1_case2_vectors(arrays)
    rho0 = DensityMatrix.mixture([(0.25, v) for v in bit0.astype(complex)])
    rho1 = DensityMatrix.mixture([(0.25, v) for v in bit1.astype(complex)])
    return rho0, rho1


def _cowm1_info_core(mu: float, V: float, theta0: float, theta1: float,
                     phi: float) -> float:
    """Error-free part of Eve's information: two-pulse term plus the
    four-pulse Holevo term (the halved combination, before the Q mixing)."""
    arrays = _cowm1_arrays(mu, V, theta0, theta1, phi)
    ov = abs(float(np.dot(arrays["p10_mu0"], arrays["p01_0mu"])))
    term2 = binary_entropy((1.0 + ov) / 2.0)
    bit0, bit1 = _cowm1_case2_vectors(arrays)
    w4 = np.full(4, 0.25)
    s0 = mixture_entropy(bit0, w4)
    s1 = mixture_entropy(bit1, w4)
    s_mix = mixture_entropy(np.vstack([bit0, bit1]), np.full(8, 0.125))
    term4 = max(s_mix - 0.5 * (s0 + s1), 0.0)
    return 0.5 * (term2 + term4)


def cowm1_chi(mu: float, Q: float, V: float, params) -> float:
    """Eve's information for one parameter point of the three-angle family.

    Built from validated density matrices; the faster Gram-based path
    used inside the optimizer (`_cowm1_info_core`) is cross-checked
    against this in the tests.
    """
    theta0, theta1, phi = params
    attack = cowm1_build_states(mu, V, theta0, theta1, phi)
    ov = abs(attack.two_pulse_overlap)
    rho0, rho1 = cowm1_case2_mixtures(attack)
    term4 = holevo_binary(rho0, rho1)
    term2 = binary_entropy((1.0 + ov) / 2.0)
    return Q + (1.0 - Q) / 2.0 * (term2 + term4)


@dataclass(frozen=True)
class Cowm1OptResult:
    chi: float
    r0: float
    theta0: float
    theta1: float
    phi: float
    opt: OptResult


def cowm1_optimize(mu: float, Q: float, V: float,
                   config: OptConfig | None = None, *,
                   extra_starts=()) -> Cowm1OptResult:
    """Maximize Eve's information over the three free angles.

    The error-free core is independent of Q, so one search serves every
    error rate.  Default budget: 24 starts (uniform angles plus the
    all-zero start).
    """
    config = config or OptConfig(n_starts=24)

    def objective(x):
        return _cowm1_info_core(mu, V, x[0], x[1], x[2])

    res = maximize(objective, 3, config, extra_starts=extra_starts)
    chi = Q + (1.0 - Q) * res.best_f
    r0 = 0.5 * mu * (1.0 - binary_entropy(Q) - chi)
    th0, th1, ph = (float(v) for v in res.best_x)
    return Cowm1OptResult(chi=chi, r0=r0, theta0=th0, theta1=th1, phi=ph, opt=res)


def cowm1_mu_optimized(Q: float, V: float, config: OptConfig | None = None, *,
                       scalar_tol: float = 1e-4, grid_points: int = 32,
                       sweep_config: OptConfig | None = None) -> tuple:
    """Double optimization: Eve's angles inside, intensity outside.

    Consecutive intensity evaluations warm-start the angle search from
    the previous optimum, which keeps the sweep deterministic and cheap.
    Returns (mu_opt, Cowm1OptResult at the optimum).
    """
    if sweep_config is None:
        sweep_config = config or OptConfig(n_starts=4)
    warm: list = []
    cache: dict = {}

    def r0_of_mu(mu: float) -> float:
        extra = tuple(warm)
        res = cowm1_optimize(mu, Q, V, sweep_config, extra_starts=extra)
        warm[:] = [np.array([res.theta0, res.theta1, res.phi])]
        cache[mu] = res
        return res.r0

    scan = maximize_scalar(r0_of_mu, MU_SEARCH_MIN, MU_SEARCH_MAX,
                           scalar_tol, grid_points=grid_points, log_grid=True)
    return scan.x, cache[scan.x]


# ---------------------------------------------------------------------------
# One-pulse attack, arbitrary pairing
# ---------------------------------------------------------------------------

def cowm2_feasible(mu: float, V: float) -> bool:
    """Secret bits require exp(-mu) > 1 - V."""
    return math.exp(-mu) > 1.0 - V


def cowm2_min_overlap(mu: float, V: float) -> float:
    """Minimum of |<v0|p_mu>| over the one-pulse attack family.

    exp(-mu/2) sqrt(V) - sqrt(1-exp(-mu)) sqrt(1-V) when feasible,
    otherwise zero (Eve reaches orthogonal states).
    """
    if not 0.0 <= V <= 1.0:
        raise ValueError("V must lie in [0, 1]")
    if mu <= 0:
        raise ValueError("mu must be positive")
    if not cowm2_feasible(mu, V):
        return 0.0
    em = math.exp(-mu)
    return math.sqrt(em * V) - math.sqrt((1.0 - em) * (1.0 - V))


def cowm2_chi(mu: float, Q: float, V: float) -> float:
    """Eve's information; the overlap enters squared because a bit spans
    two pulses and her state is the product of both single-pulse states."""
    ov = cowm2_min_overlap(mu, V)
    return Q + (1.0 - Q) * binary_entropy((1.0 + ov * ov) / 2.0)


def cowm2_rate0(mu: float, Q: float, V: float) -> float:
    return 0.5 * mu * (1.0 - binary_entropy(Q) - cowm2_chi(mu, Q, V))


def _cowm2_arrays(mu: float, V: float, theta: float, phi: float):
    em = math.exp(-mu)
    v_mu = np.array([1.0, 0.0, 0.0], dtype=complex)
    v_0 = np.array([math.sqrt(em), math.sqrt(1.0 - em), 0.0], dtype=complex)
    p_mu = np.array([
        math.sqrt(V),
        -math.sqrt(1.0 - V) * math.cos(theta) * np.exp(1j * phi),
        math.sqrt(1.0 - V) * math.sin(theta),
    ])
    return v_mu, v_0, p_mu


def cowm2_overlap(mu: float, V: float, theta: float, phi: float) -> complex:
    """<v0|p_mu> for one member of the two-angle family."""
    _, v_0, p_mu = _cowm2_arrays(mu, V, theta, phi)
    return complex(np.vdot(v_0, p_mu))


def cowm2_build_states(mu: float, V: float, theta: float = 0.0,
                       phi: float = 0.0) -> dict:
    """Explicit vectors; the parametrization meets the constraints by
    construction, re-verified here to 1e-10."""
    v_mu, v_0, p_mu = _cowm2_arrays(mu, V, theta, phi)
    if abs(np.vdot(v_0, v_mu) - math.exp(-mu / 2.0)) > CONSTRAINT_TOL:
        raise ValueError("vacuum overlap constraint violated")
    if abs(abs(np.vdot(v_mu, p_mu)) ** 2 - V) > CONSTRAINT_TOL:
        raise ValueError("visibility constraint violated")
    return {"v_mu": StateVector(v_mu), "v_0": StateVector(v_0),
            "p_mu": StateVector(p_mu)}


def cowm2_full_information_angles(mu: float, V: float) -> tuple:
    """(theta, phi) nulling the overlap outside the feasible region:
    cos(theta) = sqrt(exp(-mu)/(1-exp(-mu)) * V/(1-V)), phi = 0."""
    if cowm2_feasible(mu, V):
        raise ValueError("full information is unreachable in the feasible region")
    em = math.exp(-mu)
    c = math.sqrt(em / (1.0 - em) * V / (1.0 - V))
    return math.acos(min(c, 1.0)), 0.0


@dataclass(frozen=True)
class CowM2Attack:
    """Optimal member of the one-pulse attack family at one (mu, V)."""

    theta: float
    phi: float
    min_overlap: float
    feasible: bool

    @classmethod
    def optimal(cls, mu: float, V: float) -> "CowM2Attack":
        feasible = cowm2_feasible(mu, V)
        theta, phi = (0.0, 0.0) if feasible else cowm2_full_information_angles(mu, V)
        return cls(theta=theta, phi=phi, min_overlap=cowm2_min_overlap(mu, V),
                   feasible=feasible)


def cowm2_mu_optimized(Q: float, V: float, *, tol: float = 1e-5,
                       grid_points: int = 128) -> tuple:
    """(mu_opt, r0, chi, n_evals) after the intensity optimization."""
    res = maximize_scalar(lambda mu: cowm2_rate0(mu, Q, V),
                          MU_SEARCH_MIN, MU_SEARCH_MAX, tol,
                          grid_points=grid_points, log_grid=True)
    return res.x, res.f, cowm2_chi(res.x, Q, V), res.n_evals
