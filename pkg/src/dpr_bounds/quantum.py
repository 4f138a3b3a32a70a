"""Entropy kernels, Holevo quantities and finite-dimensional state algebra.

All information quantities are in bits (base-2 logarithms).  The states
appearing in the collective-attack bounds are small (dimension <= ~100),
so dense Hermitian eigendecompositions are used everywhere; mixtures of
pure states can alternatively be diagonalized through their weighted Gram
matrix, which has the same nonzero spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Numerical tolerances.  Eigenvalue clipping at 1e-9 tolerates rounding
# accumulated in the largest (100-dimensional) mixtures handled here.
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
RANK_TOL = 1e-10
NORM_TOL = 1e-10
TRACE_TOL = 1e-9
PROB_SLACK = 1e-12


def binary_entropy(p: float) -> float:
    """Shannon entropy h(p) = -p log2 p - (1-p) log2(1-p) of a coin with bias p.

    Values within 1e-12 outside [0, 1] are clamped; anything further out
    raises ValueError.  h(0) = h(1) = 0 and h is symmetric about 1/2.
    """
    p = float(p)
    if p < -PROB_SLACK or p > 1.0 + PROB_SLACK:
        raise ValueError(f"probability out of range: {p!r}")
    p = min(max(p, 0.0), 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return -p * math.log2(p) - q * math.log2(q)


def pure_pair_chi(overlap_modulus: float) -> float:
    """Holevo quantity of two equiprobable pure states with given |overlap|.

    The equal mixture of two pure states with overlap modulus c has
    eigenvalues (1 +- c)/2, so chi = h((1 + c)/2); it decreases from one
    bit (orthogonal states) to zero (identical states).
    """
    c = float(overlap_modulus)
    if c < -PROB_SLACK or c > 1.0 + PROB_SLACK:
        raise ValueError(f"overlap modulus out of range: {c!r}")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1.0 + c) / 2.0)


def eigenvalue_entropy(eigenvalues) -> float:
    """Entropy in bits of a spectrum; eigenvalues in [-1e-9, 0] clip to 0."""
    total = 0.0
    for lam in np.asarray(eigenvalues, dtype=float).ravel():
        if lam < -PSD_TOL:
            raise ValueError(f"eigenvalue {lam} below PSD tolerance")
        if lam > 0.0:
            total -= lam * math.log2(lam)
    return total


def matrix_entropy(matrix: np.ndarray) -> float:
    """Entropy in bits of a Hermitian positive-semidefinite array."""
    return eigenvalue_entropy(np.linalg.eigvalsh(matrix))


def mixture_entropy(vectors: np.ndarray, weights) -> float:
    """Entropy of sum_i w_i |v_i><v_i| from the weighted Gram spectrum.

    ``vectors`` has one state per row.  The nonzero eigenvalues of the
    mixture coincide with those of M_ij = sqrt(w_i w_j) <v_i|v_j>, so the
    cost scales with the number of states rather than their dimension.
    """
    v = np.asarray(vectors)
    w = np.sqrt(np.asarray(weights, dtype=float))
    gram = np.conj(v) @ v.T
    m = gram * np.outer(w, w)
    return eigenvalue_entropy(np.linalg.eigvalsh(m))


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state; amplitudes are a complex vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amp.size == 0:
            raise ValueError("empty state vector")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector norm {norm} deviates from 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def inner(self, other: "StateVector") -> complex:
        """<self|other> with the physics convention (conjugate on the left)."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self, weight: float = 1.0) -> "DensityMatrix":
        outer = weight * np.outer(self.amplitudes, np.conj(self.amplitudes))
        return DensityMatrix(outer, weight=weight)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian PSD operator carrying its intended trace as ``weight``.

    weight = 1 for normalized states; conditioned attack mixtures carry
    their raw probability weight instead.
    """

    entries: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        herm_dev = np.max(np.abs(m - m.conj().T))
        if herm_dev > HERMITIAN_TOL:
            raise ValueError(f"matrix not Hermitian (deviation {herm_dev})")
        m = (m + m.conj().T) / 2.0
        evals = np.linalg.eigvalsh(m)
        if evals[0] < -PSD_TOL:
            raise ValueError(f"matrix not PSD (min eigenvalue {evals[0]})")
        tr = float(np.trace(m).real)
        if abs(tr - self.weight) > TRACE_TOL:
            raise ValueError(f"trace {tr} deviates from weight {self.weight}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "_evals", evals)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return self._evals.copy()

    def normalized(self) -> "DensityMatrix":
        if self.weight <= 0:
            raise ValueError("cannot normalize zero-weight matrix")
        return DensityMatrix(self.entries / self.weight, weight=1.0)

    @classmethod
    def from_pure(cls, state, weight: float = 1.0) -> "DensityMatrix":
        amp = state.amplitudes if isinstance(state, StateVector) else np.asarray(state, dtype=complex)
        return cls(weight * np.outer(amp, np.conj(amp)), weight=weight)

    @classmethod
    def mixture(cls, weighted_states) -> "DensityMatrix":
        """Weighted sum of pure-state projectors; weight is the total."""
        total = 0.0
        entries = None
        for w, state in weighted_states:
            amp = state.amplitudes if isinstance(state, StateVector) else np.asarray(state, dtype=complex)
            term = w * np.outer(amp, np.conj(amp))
            entries = term if entries is None else entries + term
            total += w * float(np.vdot(amp, amp).real)
        if entries is None:
            raise ValueError("empty mixture")
        return cls(entries, weight=total)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -sum_i lambda_i log2 lambda_i for a normalized state."""
    if abs(rho.weight - 1.0) > TRACE_TOL:
        raise ValueError(f"entropy requires a normalized state, weight={rho.weight}")
    return eigenvalue_entropy(rho.eigenvalues())


def holevo_binary(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """chi = S((rho0+rho1)/2) - S(rho0)/2 - S(rho1)/2 for equiprobable signals."""
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    for rho in (rho0, rho1):
        if abs(rho.weight - 1.0) > TRACE_TOL:
            raise ValueError("holevo_binary expects normalized inputs")
    mix = (rho0.entries + rho1.entries) / 2.0
    chi = matrix_entropy(mix) - 0.5 * eigenvalue_entropy(rho0.eigenvalues()) \
        - 0.5 * eigenvalue_entropy(rho1.eigenvalues())
    return max(chi, 0.0)


def holevo_from_arrays(m0: np.ndarray, m1: np.ndarray) -> float:
    """Holevo quantity from raw normalized density arrays (no validation)."""
    mix = (m0 + m1) / 2.0
    chi = matrix_entropy(mix) - 0.5 * matrix_entropy(m0) - 0.5 * matrix_entropy(m1)
    return max(chi, 0.0)


@dataclass(frozen=True)
class GramSpec:
    """Pairwise inner-product constraints for a family of unit vectors.

    ``target[i, j]`` is the required <state_i|state_j>; NaN marks an entry
    left unconstrained.  The diagonal must be constrained to 1 and the
    constrained part must be Hermitian.
    """

    labels: tuple
    target: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.target, dtype=complex)
        n = len(self.labels)
        if t.shape != (n, n):
            raise ValueError(f"target shape {t.shape} does not match {n} labels")
        mask = ~np.isnan(t.real) & ~np.isnan(t.imag)
        if not np.all(np.diag(mask)):
            raise ValueError("diagonal entries must be constrained")
        if np.max(np.abs(np.diag(t) - 1.0)) > NORM_TOL:
            raise ValueError("diagonal entries must equal 1 (unit-norm states)")
        if not np.array_equal(mask, mask.T):
            raise ValueError("constrained entries must come in conjugate pairs")
        both = mask & mask.T
        dev = np.max(np.abs(np.where(both, t - np.conj(t.T), 0.0)))
        if dev > HERMITIAN_TOL:
            raise ValueError(f"constrained sub-matrix not Hermitian (deviation {dev})")
        t.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "target", t)
        object.__setattr__(self, "_mask", mask)

    @property
    def size(self) -> int:
        return len(self.labels)

    def constrained_mask(self) -> np.ndarray:
        return self._mask.copy()

    def filled(self, fill: complex = 0.0) -> np.ndarray:
        """Target matrix with unconstrained entries replaced by ``fill``."""
        return np.where(self._mask, self.target, fill)

    def max_violation(self, vectors) -> float:
        """Largest deviation of the vectors' Gram matrix from the constraints."""
        amps = np.array([v.amplitudes if isinstance(v, StateVector) else np.asarray(v, complex)
                         for v in vectors])
        gram = np.conj(amps) @ amps.T
        return float(np.max(np.abs(np.where(self._mask, gram - self.target, 0.0))))


def gram_embed(spec: GramSpec) -> list:
    """Unit vectors realizing a Gram specification, in minimal dimension.

    The embedding diagonalizes the (zero-filled) target matrix and keeps
    the eigendirections above the rank tolerance, so rank-deficient
    specifications land in the smallest possible space.  Raises if the
    target has an eigenvalue below -1e-9.
    """
    g = spec.filled()
    evals, evecs = np.linalg.eigh(g)
    if evals[0] < -PSD_TOL:
        raise ValueError(f"Gram specification infeasible (min eigenvalue {evals[0]})")
    keep = evals > RANK_TOL
    if not np.any(keep):
        raise ValueError("Gram specification has numerical rank zero")
    coords = np.conj(evecs[:, keep]) * np.sqrt(evals[keep])
    check = np.conj(coords) @ coords.T
    dev = float(np.max(np.abs(check - g)))
    if dev > 1e-10:
        raise ValueError(f"embedding failed to reproduce the Gram matrix ({dev})")
    return [StateVector(coords[i]) for i in range(spec.size)]


def tensor_product(a, b):
    """Kronecker product of two StateVectors or two DensityMatrices."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries), weight=a.weight * b.weight)
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")
