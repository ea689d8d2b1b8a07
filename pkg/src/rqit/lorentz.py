"""SL(2,C) representation of Lorentz boosts and Wigner rotations for massive spin-1/2.

A four-momentum p is represented by the Hermitian matrix ``p0 + p.sigma``;
a Lorentz transformation with spinor matrix ``A`` acts as ``A P A^dagger``.
The standard boost taking a particle of mass m from rest to momentum p is
``L(p) = (m + E + p.sigma) / sqrt(2 m (m + E))``, and the Wigner rotation
of ``A`` at momentum p is the SU(2) matrix ``L(Ap)^-1 A L(p)``.

Functions are vectorized over a leading axis of momenta, shape (n, 3).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import ValidationError

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class BoostSpec:
    """Pure boost of rapidity ``rapidity`` along the unit vector ``axis``."""

    rapidity: float
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.rapidity < 0:
            raise ValidationError(f"rapidity must be >= 0, got {self.rapidity}")
        n = np.asarray(self.axis, dtype=float)
        norm = np.linalg.norm(n)
        if n.shape != (3,) or norm == 0:
            raise ValidationError(f"boost axis must be a non-zero 3-vector, got {self.axis}")
        object.__setattr__(self, "axis", tuple(float(c) for c in n / norm))

    @property
    def velocity(self) -> float:
        return float(np.tanh(self.rapidity))

    def inverse(self) -> "BoostSpec":
        return BoostSpec(self.rapidity, tuple(-c for c in self.axis))

    def spinor(self) -> np.ndarray:
        """The SL(2,C) matrix ``cosh(xi/2) + sinh(xi/2) n.sigma``."""
        n = np.asarray(self.axis)
        return np.cosh(self.rapidity / 2) * I2 + np.sinh(self.rapidity / 2) * np.einsum(
            "i,ijk->jk", n, SIGMA
        )


def energy(p: np.ndarray, m: float) -> np.ndarray:
    return np.sqrt(m * m + np.einsum("...i,...i->...", p, p))


def _pauli_dot(p: np.ndarray) -> np.ndarray:
    return np.einsum("...i,ijk->...jk", p, SIGMA)


def transform_momenta(A: np.ndarray, p: np.ndarray, m: float) -> np.ndarray:
    """Spatial momenta after the Lorentz transformation with spinor matrix ``A``."""
    P = energy(p, m)[..., None, None] * I2 + _pauli_dot(p)
    Q = A @ P @ A.conj().T
    # p_i = Tr(Q sigma_i) / 2
    return np.real(np.einsum("...jk,ikj->...i", Q, SIGMA)) / 2


def standard_boost(p: np.ndarray, m: float, inverse: bool = False) -> np.ndarray:
    e = energy(p, m)
    sign = -1.0 if inverse else 1.0
    num = (m + e)[..., None, None] * I2 + sign * _pauli_dot(p)
    return num / np.sqrt(2 * m * (m + e))[..., None, None]


def wigner_rotation(A: np.ndarray, p: np.ndarray, m: float) -> tuple[np.ndarray, np.ndarray]:
    """Wigner rotations ``L(Ap)^-1 A L(p)`` and the transformed momenta ``Ap``."""
    q = transform_momenta(A, p, m)
    W = standard_boost(q, m, inverse=True) @ A @ standard_boost(p, m)
    return W, q


def perpendicular_wigner_angle(xi: float, eta: float) -> float:
    """Wigner angle for a boost of rapidity ``xi`` orthogonal to a momentum of rapidity ``eta``.

    ``tan(delta) = sinh(xi) sinh(eta) / (cosh(xi) + cosh(eta))``.
    """
    return float(np.arctan2(np.sinh(xi) * np.sinh(eta), np.cosh(xi) + np.cosh(eta)))
