"""Idealized sifting rates and mutual information for COW coding variants.

These are eavesdropper-free, dark-count-free estimates only: they rank
coding choices (bit-per-pulse Z-channel coding, predefined or announced
pairings, Bob-chosen pairing) by sifting rate and ideal key rate in the
small mu*t limit.  No attack analysis is attached to them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .optimize import maximize_scalar
from .quantum import binary_entropy

Z_CHANNEL = "Z_CHANNEL"
ORIGINAL_COW = "ORIGINAL_COW"
COWM1_STYLE = "COWM1_STYLE"
RANDOM_TRAIN_A_POSTERIORI = "RANDOM_TRAIN_A_POSTERIORI"
BOB_CHOOSES = "BOB_CHOOSES"
VARIANT_IDS = (Z_CHANNEL, ORIGINAL_COW, COWM1_STYLE,
               RANDOM_TRAIN_A_POSTERIORI, BOB_CHOOSES)


@dataclass(frozen=True)
class VariantSpec:
    """A coding variant; ``q`` is the non-empty-pulse fraction (Z-channel
    coding only) and ``f0`` an optional extra announced no-click fraction."""

    id: str
    q: float | None = None
    f0: float | None = None

    def __post_init__(self):
        if self.id not in VARIANT_IDS:
            raise ValueError(f"unknown variant {self.id!r}")
        if self.id == Z_CHANNEL:
            if self.q is None or not 0.0 < self.q < 1.0:
                raise ValueError("Z-channel coding requires q in (0, 1)")


def z_channel_rate(q: float, mu: float, t: float, eta: float) -> tuple:
    """(I_AB, r) per pulse for the bit-per-pulse coding.

    Losses turn the channel into a Z-channel (an empty pulse is never
    misread, a non-empty one is missed with probability e^{-mu t eta}),
    whose capacity-achieving mutual information at input bias q is
    I_AB = h(q mu t eta) - q h(mu t eta); the raw key spans every pulse,
    so the ideal rate equals I_AB.  Asymptotically I_AB ~ -q log2(q) mu t eta.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    click = -math.expm1(-mu * t * eta)
    i_ab = binary_entropy(q * click) - q * binary_entropy(click)
    return i_ab, i_ab


def z_channel_optimal_q(mu: float, t: float, eta: float, *,
                        tol: float = 1e-6) -> tuple:
    """(q_opt, r) maximizing the Z-channel rate; tends to 1/e for small mu*t."""
    res = maximize_scalar(lambda q: z_channel_rate(q, mu, t, eta)[1],
                          1e-4, 1.0 - 1e-4, tol, grid_points=100)
    return res.x, res.f


def variant_sifting_rate(spec: VariantSpec, mu: float, t: float, eta: float) -> float:
    """Small-mu*t sifting rate per time slot for one variant.

    The bit-per-pulse coding keeps every slot (rate 1); with an optional
    announced no-click fraction f0 it reduces to q mu t eta + f0.
    Predefined or consecutive a-posteriori pairings keep half the slots
    per accepted click; random trains and Bob-chosen pairings lose
    another factor two to unusable pairs.
    """
    x = mu * t * eta
    if spec.id == Z_CHANNEL:
        if spec.f0 is not None:
            return spec.q * x + spec.f0
        return 1.0
    if spec.id in (ORIGINAL_COW, COWM1_STYLE):
        return 0.5 * x
    if spec.id in (RANDOM_TRAIN_A_POSTERIORI, BOB_CHOOSES):
        return 0.25 * x
    raise ValueError(f"unknown variant {spec.id!r}")
