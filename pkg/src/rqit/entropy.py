"""Classical and quantum entropy functionals.

All quantities are evaluated in nats internally and converted on return;
``unit="bits"`` is the default everywhere.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .qstate import (
    DensityOperator,
    ValidationError,
    as_density,
    eigvals_hermitian,
    partial_trace,
    support_log,
)

LN2 = math.log(2.0)
PROB_ATOL = 1e-12
DENSITY_NORM_ATOL = 1e-6


class EntropyUnit(enum.Enum):
    BITS = "bits"
    NATS = "nats"


def _unit(unit) -> EntropyUnit:
    return unit if isinstance(unit, EntropyUnit) else EntropyUnit(unit)


def from_nats(value, unit="bits"):
    """Convert a value in nats to ``unit``."""
    if _unit(unit) is EntropyUnit.BITS:
        return value / LN2
    return value


def check_probabilities(p, ndim: int | None = None) -> np.ndarray:
    """Validate a probability table (1-D marginal or 2-D joint)."""
    arr = np.asarray(p, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise ValidationError(f"expected a {ndim}-D probability table, got {arr.ndim}-D")
    if arr.size == 0:
        raise ValidationError("empty probability table")
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise ValidationError("probabilities must be finite and non-negative")
    total = arr.sum()
    if abs(total - 1.0) > PROB_ATOL:
        raise ValidationError(f"probabilities sum to {total!r}, expected 1")
    return arr


def _plogp_sum(p: np.ndarray) -> float:
    # 0 log 0 = 0
    q = p[p > 0]
    return float(-np.sum(q * np.log(q)))


def shannon_entropy(p, unit="bits") -> float:
    """Shannon entropy ``-sum p log p`` of a probability table."""
    p = check_probabilities(p)
    return from_nats(_plogp_sum(p.ravel()), unit)


def max_entropy(n: int, unit="bits") -> float:
    """A-priori maximal entropy ``log n`` of an ``n``-state variable."""
    if n < 1:
        raise ValidationError(f"state count must be >= 1, got {n}")
    return from_nats(math.log(n), unit)


def conditional_entropy(joint, unit="bits") -> float:
    """H(X|Y) = sum_j q_j H(X|Y=y_j) for a joint table indexed [x, y]."""
    p = check_probabilities(joint, ndim=2)
    q = p.sum(axis=0)
    h = 0.0
    for j in np.flatnonzero(q > 0):
        h += q[j] * _plogp_sum(p[:, j] / q[j])
    return from_nats(h, unit)


def mutual_information(joint, unit="bits") -> float:
    """H(X:Y) = H(X) + H(Y) - H(XY) for a joint table indexed [x, y]."""
    p = check_probabilities(joint, ndim=2)
    value = _plogp_sum(p.sum(axis=1)) + _plogp_sum(p.sum(axis=0)) - _plogp_sum(p.ravel())
    # clip the O(eps) negatives from cancellation for independent tables
    return from_nats(max(value, 0.0), unit)


@dataclass(frozen=True, eq=False)
class SampledDensity:
    """A probability density sampled at the midpoints of a uniform grid."""

    x: np.ndarray
    delta: float
    f: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        f = np.asarray(self.f, dtype=float)
        if self.delta <= 0:
            raise ValidationError(f"bin width must be positive, got {self.delta}")
        if x.shape != f.shape:
            raise ValidationError("sample points and density values differ in shape")
        if np.any(f < 0):
            raise ValidationError("density values must be non-negative")
        mass = float(f.sum() * self.delta)
        if abs(mass - 1.0) > DENSITY_NORM_ATOL:
            raise ValidationError(f"density integrates to {mass!r} on the grid, expected 1")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "f", f)

    @classmethod
    def from_function(cls, func, lo: float, hi: float, delta: float) -> "SampledDensity":
        """Sample ``func`` at bin midpoints of ``[lo, hi)`` with width ``delta``."""
        n = int(round((hi - lo) / delta))
        x = lo + delta * (np.arange(n) + 0.5)
        return cls(x, delta, func(x))


def discretized_differential_entropy(f: SampledDensity, unit="bits") -> tuple[float, float]:
    """Entropy of the binned density and the implied differential entropy.

    Returns ``(H_delta, h_estimate)`` where ``H_delta = -sum p_i log p_i`` with
    ``p_i = f(x_i) delta`` and ``h_estimate = H_delta + log delta``.
    """
    p = f.f * f.delta
    h_delta = _plogp_sum(p)
    h = h_delta + math.log(f.delta)
    return from_nats(h_delta, unit), from_nats(h, unit)


def _spectrum_entropy(evals: np.ndarray) -> float:
    return _plogp_sum(np.clip(evals, 0.0, None))


def von_neumann_entropy(rho, unit="bits") -> float:
    """-Tr rho log rho, computed from the eigenvalue spectrum."""
    rho = as_density(rho)
    return from_nats(_spectrum_entropy(eigvals_hermitian(rho)), unit)


def _split(rho: DensityOperator, split) -> tuple[DensityOperator, tuple[int, ...], tuple[int, ...]]:
    """Resolve a bipartition into subsystem index tuples (A, B).

    ``split`` lists the subsystems forming A; ``None`` means (0,) for a
    two-subsystem operator. For an operator with a single undivided factor,
    ``split=(dA, dB)`` reinterprets it as dA x dB.
    """
    rho = as_density(rho)
    n = len(rho.dims)
    if split is None:
        if n != 2:
            raise ValidationError("a split is required unless rho has exactly two subsystems")
        return rho, (0,), (1,)
    if len(split) == 2 and n == 1 and split[0] * split[1] == rho.dim:
        return DensityOperator(rho.matrix, split), (0,), (1,)
    a = tuple(int(i) for i in split)
    if not a or any(not 0 <= i < n for i in a) or len(set(a)) != len(a) or len(a) == n:
        raise ValidationError(f"invalid subsystem split {split} for dims {rho.dims}")
    b = tuple(i for i in range(n) if i not in a)
    return rho, a, b


def conditional_vn(rho_ab, split=None, unit="bits") -> float:
    """S(A|B) = S(AB) - S(B); negative for entangled states."""
    rho, a, b = _split(rho_ab, split)
    value = _spectrum_entropy(eigvals_hermitian(rho)) - _spectrum_entropy(
        eigvals_hermitian(partial_trace(rho, b))
    )
    return from_nats(value, unit)


def mutual_vn(rho_ab, split=None, unit="bits") -> float:
    """S(A:B) = S(A) + S(B) - S(AB)."""
    rho, a, b = _split(rho_ab, split)
    s = lambda r: _spectrum_entropy(eigvals_hermitian(r))  # noqa: E731
    value = s(partial_trace(rho, a)) + s(partial_trace(rho, b)) - s(rho)
    return from_nats(max(value, 0.0), unit)


def conditional_amplitude_operator(rho_ab, split=None) -> np.ndarray:
    """exp(log rho_AB - log(1_A x rho_B)) restricted to the support of rho_AB.

    Both logarithms use the support convention of :func:`support_log`; the
    result vanishes on the kernel of ``rho_AB``. Subsystems are reordered
    so that A precedes B.
    """
    rho, a, b = _split(rho_ab, split)
    order = a + b
    dims = rho.dims
    if order != tuple(range(len(dims))):
        rho = partial_trace(rho, order)
    d_a = math.prod(dims[i] for i in a)
    rho_b = partial_trace(rho, tuple(range(len(a), len(order))))
    log_ab, proj = support_log(rho.matrix)
    log_b, _ = support_log(rho_b.matrix)
    gen = log_ab - np.kron(np.eye(d_a), log_b)
    w, v = np.linalg.eigh(proj)
    vs = v[:, w > 0.5]
    restricted = vs.conj().T @ gen @ vs
    restricted = 0.5 * (restricted + restricted.conj().T)
    return vs @ expm(restricted) @ vs.conj().T


def conditional_amplitude_spectrum(rho_ab, split=None) -> np.ndarray:
    """Eigenvalues of the conditional amplitude operator, descending.

    Directions outside the support of ``rho_AB`` contribute zeros. An
    eigenvalue above one signals entanglement.
    """
    return eigvals_hermitian(conditional_amplitude_operator(rho_ab, split))


@dataclass(frozen=True)
class ThermoParams:
    """State count, partition function, mean energy and temperature (k_B = 1)."""

    state_count: float
    Z: float
    E: float
    T: float

    def __post_init__(self):
        if self.state_count < 1:
            raise ValidationError("state count must be >= 1")
        if self.Z <= 0:
            raise ValidationError("partition function must be positive")
        if self.T <= 0:
            raise ValidationError("temperature must be positive")


def thermo_information(tp: ThermoParams, unit="bits") -> float:
    """Knowledge of a canonical ensemble, log(state_count / Z) - E / T."""
    return from_nats(math.log(tp.state_count / tp.Z) - tp.E / tp.T, unit)


def classical_density(joint: Sequence[Sequence[float]]) -> DensityOperator:
    """Diagonal bipartite density operator encoding a joint table [x, y]."""
    p = check_probabilities(joint, ndim=2)
    return DensityOperator(np.diag(p.ravel()).astype(complex), p.shape)
