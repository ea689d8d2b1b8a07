"""Closed-form thermal models: the Heisenberg spin dimer and black-hole entropy balance.

The dimer Hamiltonian is ``H = (J/4) sigma.sigma``: a singlet ground state at
``-3J/4`` and a triplet at ``+J/4``. Entropies are computed in nats and
converted, so the two-bit ceiling on the mutual entropy is exact in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import LN2, from_nats
from .qstate import DensityOperator, ValidationError

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class DimerParams:
    J: float
    beta: float

    def __post_init__(self):
        if self.beta < 0:
            raise ValidationError(f"inverse temperature must be >= 0, got {self.beta}")


def dimer_hamiltonian(J: float) -> np.ndarray:
    return 0.25 * J * sum(np.kron(s, s) for s in PAULI)


def _weights(p: DimerParams) -> tuple[float, float, float]:
    """Entries (diagonal, cosh block, sinh block) of the thermal matrix.

    These are ``e^{bJ/4}/Z`` times ``e^{-bJ/2}``, ``cosh(bJ/2)``,
    ``sinh(bJ/2)``, rewritten in terms of ``e^{-|bJ|}`` so large ``beta``
    does not overflow.
    """
    u = p.beta * p.J
    if u > 0:
        t = math.exp(-u)
        den = 1.0 + 3.0 * t
        return t / den, 0.5 * (1.0 + t) / den, 0.5 * (1.0 - t) / den
    e = math.exp(u)
    den = e + 3.0
    return 1.0 / den, 0.5 * (e + 1.0) / den, 0.5 * (e - 1.0) / den


def dimer_density(p: DimerParams) -> DensityOperator:
    """Thermal state exp(-beta H)/Z in the product basis |00>,|01>,|10>,|11>."""
    a, c, s = _weights(p)
    m = np.array(
        [
            [a, 0, 0, 0],
            [0, c, -s, 0],
            [0, -s, c, 0],
            [0, 0, 0, a],
        ],
        dtype=complex,
    )
    return DensityOperator(m, (2, 2))


def dimer_partition(p: DimerParams) -> float:
    """Z = e^{3 beta J/4} + 3 e^{-beta J/4}."""
    return math.exp(dimer_log_partition(p))


def dimer_log_partition(p: DimerParams) -> float:
    u = p.beta * p.J
    return float(np.logaddexp(0.75 * u, math.log(3.0) - 0.25 * u))


def dimer_energy(p: DimerParams) -> float:
    """E = Tr rho H = (3J/4)(1 - e^{beta J})/(3 + e^{beta J})."""
    u = p.beta * p.J
    if u > 0:
        t = math.exp(-u)
        return 0.75 * p.J * (t - 1.0) / (3.0 * t + 1.0)
    e = math.exp(u)
    return 0.75 * p.J * (1.0 - e) / (3.0 + e)


def _joint_entropy_nats(p: DimerParams) -> float:
    # log Z + beta E, simplified so that both limits are free of cancellation
    u = p.beta * p.J
    if u > 0:
        t = math.exp(-u)
        return math.log1p(3.0 * t) + 3.0 * u * t / (1.0 + 3.0 * t)
    e = math.exp(u)
    return math.log(3.0 + e) - u * e / (3.0 + e)


def dimer_joint_entropy(p: DimerParams, unit="bits") -> float:
    """S(rho_12) = log Z + beta E."""
    return from_nats(_joint_entropy_nats(p), unit)


def dimer_mutual_entropy(p: DimerParams, unit="bits") -> float:
    """S(1:2) = 2 bits - S(rho_12); both marginals are maximally mixed."""
    return from_nats(2.0 * LN2 - _joint_entropy_nats(p), unit)


@dataclass(frozen=True)
class BlackHoleState:
    """Schwarzschild black hole of mass ``M`` in units hbar = G = c = k_B = 1."""

    M: float

    def __post_init__(self):
        if not self.M > 0:
            raise ValidationError(f"mass must be positive, got {self.M}")


def bh_entropy(b: BlackHoleState) -> float:
    """Bekenstein-Hawking entropy 4 pi M^2 (nats)."""
    return 4.0 * math.pi * b.M**2


def hawking_temperature(b: BlackHoleState) -> float:
    return 1.0 / (8.0 * math.pi * b.M)


# entropy carried off per unit energy by blackbody radiation, relative to dE/T
RADIATION_ENTROPY_FACTOR = 4.0 / 3.0


def evaporation_step(b: BlackHoleState, dM: float) -> tuple[float, float, float]:
    """Entropy lost by the hole and gained by its radiation when it sheds ``dM``.

    Returns ``(dS_BH, dS_rad, ratio)`` to first order in ``dM``:
    ``dS_BH = dM / T_H`` and ``dS_rad = (4/3) dM / T_H``. The ratio at
    ``dM = 0`` is defined by its limit.
    """
    dM = abs(dM)
    if dM >= b.M:
        raise ValidationError(f"mass decrement {dM} must be smaller than the mass {b.M}")
    ds_bh = dM / hawking_temperature(b)
    ds_rad = RADIATION_ENTROPY_FACTOR * dM / hawking_temperature(b)
    ratio = ds_rad / ds_bh if ds_bh > 0 else RADIATION_ENTROPY_FACTOR
    return ds_bh, ds_rad, ratio
