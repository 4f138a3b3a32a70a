"""Collective beam-splitting attack: exact Holevo quantities and key rates.

Eve replaces the lossy fiber by a beam splitter and a lossless line, so
she holds coherent states of intensity mu*(1-t) while Bob sees exactly
the expected statistics (no errors: Q = 0, V = 1).  Her information is a
function of the overlap gamma_E = exp(-mu*(1-t)) alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import COW, DPS, detection_probability
from .optimize import ScalarResult, maximize_scalar
from .quantum import binary_entropy

MU_SEARCH_MAX = 5.0  # safely above every optimal intensity encountered
MU_SEARCH_MIN = 1e-4


@dataclass(frozen=True)
class BsaPoint:
    """One evaluated or optimized beam-splitting-attack point."""

    mu: float
    t: float
    gamma_E: float
    chi: float
    rate: float
    saturated: bool = False


def gamma_eve(mu: float, t: float) -> float:
    """Overlap gamma_E = exp(-mu (1 - t)) of Eve's beam-split states."""
    return math.exp(-mu * (1.0 - t))


def chi_bsa_cow(mu: float, t: float) -> float:
    """Eve's information on a COW bit: h((1 - gamma_E)/2)."""
    return binary_entropy((1.0 - gamma_eve(mu, t)) / 2.0)


def chi_bsa_dps(mu: float, t: float) -> float:
    """Eve's information on a DPS bit: 2 h((1-g^2)/2) - h((1-g^4)/2)."""
    g = gamma_eve(mu, t)
    return 2.0 * binary_entropy((1.0 - g * g) / 2.0) \
        - binary_entropy((1.0 - g ** 4) / 2.0)


def chi_bsa(protocol: str, mu: float, t: float) -> float:
    if protocol == DPS:
        return chi_bsa_dps(mu, t)
    # the attack acts pulse by pulse, so all COW variants coincide
    return chi_bsa_cow(mu, t)


def rate_bsa(protocol: str, mu: float, t: float, eta: float) -> float:
    """Secret key rate per time slot under the beam-splitting attack."""
    click = detection_probability(mu, t, eta)
    if protocol == DPS:
        return click * (1.0 - chi_bsa_dps(mu, t))
    return 0.5 * click * (1.0 - chi_bsa_cow(mu, t))


def optimize_bsa(protocol: str, t: float, eta: float, *,
                 mu_max: float = MU_SEARCH_MAX, tol: float = 1e-5) -> BsaPoint:
    """Intensity maximizing the key rate at fixed transmission.

    At t = 1 Eve receives nothing and the rate grows monotonically with
    mu; the boundary is then reported with ``saturated=True``.
    """
    res: ScalarResult = maximize_scalar(
        lambda mu: rate_bsa(protocol, mu, t, eta),
        MU_SEARCH_MIN, mu_max, tol, grid_points=200, log_grid=True)
    mu = res.x
    return BsaPoint(mu=mu, t=t, gamma_E=gamma_eve(mu, t),
                    chi=chi_bsa(protocol, mu, t), rate=res.f,
                    saturated=res.saturated)


def chi_bsa_limit(protocol: str, mu: float) -> float:
    """Holevo quantity in the long-distance limit t -> 0."""
    return chi_bsa(protocol, mu, 0.0)


def r0_bsa_limit(protocol: str, mu: float) -> float:
    """Long-distance rate prefactor: rate -> r0 * t * eta as t -> 0."""
    if protocol == DPS:
        return mu * (1.0 - chi_bsa_dps(mu, 0.0))
    return 0.5 * mu * (1.0 - chi_bsa_cow(mu, 0.0))


def asymptotic_optimum(protocol: str, *, tol: float = 1e-6) -> tuple[float, float]:
    """(mu_opt, r0) of the long-distance limit; approx (0.4583, 0.0714)
    for COW and (0.2808, 0.1182) for DPS."""
    res = maximize_scalar(lambda mu: r0_bsa_limit(protocol, mu),
                          MU_SEARCH_MIN, MU_SEARCH_MAX, tol,
                          grid_points=200, log_grid=True)
    return res.x, res.f
