"""Fiber channel model, protocol metadata and the secret-key-rate assembly.

Rates are reported per time slot and never multiplied by a repetition
rate.  The untrusted-device scenario is handled by the substitution
eta -> 1 followed by t -> t * eta, applied through
:func:`effective_channel` before any rate formula is evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantum import binary_entropy

COW = "cow"
COWM1 = "cowm1"
COWM2 = "cowm2"
DPS = "dps"
PROTOCOLS = (COW, COWM1, COWM2, DPS)

PAIRING_ALICE = "alice"
PAIRING_BOB = "bob"


@dataclass(frozen=True)
class ChannelModel:
    """Fiber loss, detector efficiency and the device-trust scenario."""

    loss_db_per_km: float = 0.25
    eta: float = 0.1
    trusted_device: bool = True

    def __post_init__(self):
        if self.loss_db_per_km < 0:
            raise ValueError("loss must be nonnegative")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")


@dataclass(frozen=True)
class ProtocolConfig:
    """Protocol identity plus source and parameter-estimation settings.

    For DPS the error rate is tied to the visibility, Q = (1 - V)/2, and
    the constructor enforces it; for the COW variants Q and V are
    independent.  The decoy fraction is stored but all rate formulas
    evaluate at a negligible decoy fraction.
    """

    protocol: str
    mu: float
    Q: float | None = None
    V: float = 1.0
    decoy_fraction: float = 0.0
    pairing_by: str = PAIRING_ALICE

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if not 0.0 <= self.V <= 1.0:
            raise ValueError("V must lie in [0, 1]")
        if not 0.0 <= self.decoy_fraction < 1.0:
            raise ValueError("decoy fraction must lie in [0, 1)")
        if self.pairing_by not in (PAIRING_ALICE, PAIRING_BOB):
            raise ValueError(f"unknown pairing {self.pairing_by!r}")
        if self.protocol == DPS:
            coupled = (1.0 - self.V) / 2.0
            if self.Q is None:
                object.__setattr__(self, "Q", coupled)
            elif abs(self.Q - coupled) > 1e-12:
                raise ValueError(
                    f"DPS requires Q = (1-V)/2 = {coupled}, got {self.Q}")
        else:
            if self.Q is None:
                object.__setattr__(self, "Q", 0.0)
            if not 0.0 <= self.Q < 0.5:
                raise ValueError("Q must lie in [0, 1/2)")


def transmission(distance_km: float, model: ChannelModel) -> float:
    """Channel transmission t = 10^(-loss * d / 10) of a fiber span."""
    if distance_km < 0:
        raise ValueError("distance must be nonnegative")
    return 10.0 ** (-model.loss_db_per_km * distance_km / 10.0)


def effective_channel(t: float, model: ChannelModel) -> tuple[float, float]:
    """(t, eta) pair to feed the rate formulas for the trust scenario."""
    if model.trusted_device:
        return t, model.eta
    return t * model.eta, 1.0


def detection_probability(mu: float, t: float, eta: float) -> float:
    """Probability 1 - exp(-mu t eta) that a non-empty pulse fires a detector."""
    return -math.expm1(-mu * t * eta)


def devetak_winter_rate(r_sift: float, Q: float, chi: float) -> float:
    """Secret key rate r_sift * [1 - h(Q) - chi]; negative means no key.

    ``chi`` is min(chi_AE, chi_BE), already minimized by the caller.
    """
    return r_sift * (1.0 - binary_entropy(Q) - chi)


def sifting_rate(config: ProtocolConfig, t: float, eta: float) -> float:
    """Probability per time slot that a slot yields an accepted raw bit.

    COW variants use every second slot for a bit; an extra factor 1/2
    applies when Bob announces the pairings (COWm1/COWm2 only).
    """
    click = detection_probability(config.mu, t, eta)
    if config.protocol == DPS:
        return click
    rate = 0.5 * click
    if config.pairing_by == PAIRING_BOB and config.protocol in (COWM1, COWM2):
        rate *= 0.5
    return rate


def asymptotic_sifting_rate(config: ProtocolConfig, t: float, eta: float) -> float:
    """Small-mu*t limit of :func:`sifting_rate` (mu t eta in first order)."""
    x = config.mu * t * eta
    if config.protocol == DPS:
        return x
    rate = 0.5 * x
    if config.pairing_by == PAIRING_BOB and config.protocol in (COWM1, COWM2):
        rate *= 0.5
    return rate
