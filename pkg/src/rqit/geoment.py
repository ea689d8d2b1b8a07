"""Entanglement entropy of a region of a harmonic-oscillator chain.

The chain Hamiltonian is ``H = sum p_i^2/2 + x.K.x/2`` with dynamical matrix
``K = mu^2 I + c L``, where L is the nearest-neighbour Laplacian. Open chains
use fixed (Dirichlet) ends, so every site carries the ``2c`` diagonal and K
stays positive definite even at ``mu = 0``; periodic chains close into a ring.

The ground state is Gaussian with ``X = <x x> = K^{-1/2}/2`` and
``P = <p p> = K^{1/2}/2``. Restricting both to a region R and taking
``nu = sqrt(eig(X_R P_R))`` gives the symplectic eigenvalues, from which all
entropies and Renyi traces follow in closed form.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .entropy import from_nats
from .qstate import ValidationError

NU_FLOOR = 0.5 - 1e-9


@dataclass(frozen=True)
class HarmonicChain:
    """``N`` oscillators with coupling ``coupling`` and on-site mass ``mu``."""

    N: int
    coupling: float = 1.0
    mu: float = 1.0
    boundary: str = "open"

    def __post_init__(self):
        if self.N < 2:
            raise ValidationError(f"chain needs N >= 2, got {self.N}")
        if self.coupling < 0 or self.mu < 0:
            raise ValidationError("coupling and mu must be >= 0")
        if self.boundary not in ("open", "periodic"):
            raise ValidationError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")

    def dynamical_matrix(self) -> np.ndarray:
        n, c = self.N, self.coupling
        K = np.diag(np.full(n, self.mu**2 + 2.0 * c))
        i = np.arange(n - 1)
        K[i, i + 1] = K[i + 1, i] = -c
        if self.boundary == "periodic":
            if n == 2:
                # both bonds join the same pair of sites
                K[0, 1] = K[1, 0] = -2.0 * c
            else:
                K[0, n - 1] = K[n - 1, 0] = -c
        return K


@dataclass(frozen=True)
class RegionSplit:
    """Sites (0-based) belonging to the accessible region."""

    inside: tuple[int, ...]

    def __init__(self, inside: Sequence[int]):
        object.__setattr__(self, "inside", tuple(sorted({int(i) for i in inside})))

    def validate(self, N: int) -> None:
        if not self.inside:
            raise ValidationError("region must be nonempty")
        if self.inside[0] < 0 or self.inside[-1] >= N:
            raise ValidationError(f"region sites must lie in [0, {N})")
        if len(self.inside) == N:
            raise ValidationError("region must be a proper subset of the chain")

    def complement(self, N: int) -> "RegionSplit":
        s = set(self.inside)
        return RegionSplit([i for i in range(N) if i not in s])


def _normal_modes(c: HarmonicChain) -> tuple[np.ndarray, np.ndarray]:
    w2, V = np.linalg.eigh(c.dynamical_matrix())
    if w2[0] <= 1e-14 * max(1.0, w2[-1]):
        raise ValidationError("dynamical matrix is singular (zero mode)")
    return np.sqrt(w2), V


def ground_state_correlations(c: HarmonicChain, beta: float | None = None):
    """Position and momentum correlation matrices ``(X, P)``.

    With ``beta`` the Gibbs state at inverse temperature ``beta`` is used
    instead; each normal mode then picks up a factor ``coth(beta w / 2)``.
    """
    w, V = _normal_modes(c)
    occ = np.ones_like(w)
    if beta is not None:
        if beta <= 0:
            raise ValidationError(f"inverse temperature must be positive, got {beta}")
        occ = 1.0 / np.tanh(0.5 * beta * w)
    X = (V * (0.5 * occ / w)) @ V.T
    P = (V * (0.5 * occ * w)) @ V.T
    return 0.5 * (X + X.T), 0.5 * (P + P.T)


def _sqrtm_psd(A: np.ndarray) -> np.ndarray:
    e, U = np.linalg.eigh(A)
    return (U * np.sqrt(np.clip(e, 0.0, None))) @ U.T


def symplectic_eigenvalues(X: np.ndarray, P: np.ndarray, inside: Sequence[int]) -> np.ndarray:
    """Ascending symplectic eigenvalues of the region restricted to ``inside``."""
    idx = np.asarray(inside)
    Xr, Pr = X[np.ix_(idx, idx)], P[np.ix_(idx, idx)]
    s = _sqrtm_psd(Xr)
    # X^{1/2} P X^{1/2} is symmetric and shares the spectrum of X P
    nu2 = np.linalg.eigvalsh(s @ Pr @ s)
    nu = np.sqrt(np.clip(nu2, 0.0, None))
    if nu[0] < NU_FLOOR:
        raise ValidationError(f"symplectic eigenvalue {nu[0]} below 1/2: correlations are unphysical")
    return np.maximum(nu, 0.5)


def _entropy_nats(nu: np.ndarray) -> float:
    a, b = nu + 0.5, nu - 0.5
    pos = b > 0
    return float(np.sum(a * np.log(a)) - np.sum(b[pos] * np.log(b[pos])))


def _region_nu(c: HarmonicChain, r: RegionSplit, beta=None) -> np.ndarray:
    r.validate(c.N)
    X, P = ground_state_correlations(c, beta)
    return symplectic_eigenvalues(X, P, r.inside)


def geometric_entropy(c: HarmonicChain, r: RegionSplit, unit="nats", beta: float | None = None) -> float:
    """Von Neumann entropy of the reduced state of region ``r``."""
    return from_nats(_entropy_nats(_region_nu(c, r, beta)), unit)


def _log_renyi_trace(nu: np.ndarray, n: float) -> float:
    # log Tr rho^n = -sum log((nu+1/2)^n - (nu-1/2)^n), valid for real n > 0
    a, b = nu + 0.5, nu - 0.5
    return float(-np.sum(n * np.log(a) + np.log1p(-((b / a) ** n))))


def renyi_trace(c: HarmonicChain, r: RegionSplit, n: int, beta: float | None = None) -> float:
    """``Tr rho_R^n`` for integer ``n >= 2``."""
    if int(n) != n or n < 2:
        raise ValidationError(f"replica index must be an integer >= 2, got {n}")
    return math.exp(_log_renyi_trace(_region_nu(c, r, beta), int(n)))


def renyi_entropy(c: HarmonicChain, r: RegionSplit, n: int, unit="nats") -> float:
    """``log(Tr rho^n) / (1 - n)``."""
    return from_nats(math.log(renyi_trace(c, r, n)) / (1.0 - n), unit)


@dataclass(frozen=True)
class ReplicaEstimate:
    """Entropy continued from integer replicas, with the direct value for comparison."""

    value: float
    direct: float
    replicas: tuple[int, ...]
    method: str

    @property
    def relative_error(self) -> float:
        if self.direct == 0:
            return abs(self.value)
        return abs(self.value - self.direct) / self.direct


def _quadrature_entropy(moments: np.ndarray) -> float:
    """Entropy from the moments ``m_k = Tr rho^(k+1)``, k = 0 .. 2K-1.

    ``Tr rho^n = sum_i p_i p_i^(n-1)`` is the (n-1)-th moment of the
    eigenvalue distribution weighted by p. A K-point Gauss rule matching the
    first 2K moments replaces it by ``sum_j w_j x_j^(n-1)``, which continues
    to real n; minus its slope at n = 1 is ``-sum_j w_j log x_j``.
    """
    k = moments.size // 2
    while k > 1:
        Hm = np.array([[moments[i + j] for j in range(k)] for i in range(k)])
        if np.linalg.cond(Hm) < 1e12:
            c = np.linalg.solve(Hm, -moments[k : 2 * k])
            x = np.roots(np.r_[1.0, c[::-1]])
            if np.all(np.abs(x.imag) < 1e-12) and np.all(x.real > 0):
                x = x.real
                w = np.linalg.solve(np.vander(x, k, increasing=True).T, moments[:k])
                return float(-np.sum(w * np.log(x)))
        k -= 1
    # a single node reproduces the Renyi-2 entropy
    return float(-math.log(moments[1]))


def replica_entropy(
    c: HarmonicChain,
    r: RegionSplit,
    replicas: Sequence[int] = (2, 3, 4),
    method: str = "quadrature",
    unit="nats",
) -> ReplicaEstimate:
    """Entropy as ``-d/dn Tr rho^n`` at ``n = 1``, continued from integer replicas.

    Only the traces at the given integer replicas (plus ``Tr rho = 1``) enter.

    Parameters
    ----------
    replicas : sequence of int
        Replica indices >= 2. ``"quadrature"`` needs the consecutive run
        ``2 .. 2K`` for a K-node rule; ``(2, 3, 4)`` gives two nodes.
    method : {"quadrature", "polynomial"}
        ``"quadrature"`` matches a Gauss rule to the moments (see
        :func:`_quadrature_entropy`). ``"polynomial"`` fits ``log Tr rho^n``
        by the polynomial through ``n = 1`` and the replicas; it converges
        poorly because single-mode traces behave like ``q^n`` in n.
    """
    nu = _region_nu(c, r)
    reps = sorted(int(n) for n in replicas)
    if len(set(reps)) != len(reps) or not reps or reps[0] < 2:
        raise ValidationError("replicas must be distinct integers >= 2")
    if method == "quadrature":
        if reps != list(range(2, reps[-1] + 1)) or len(reps) % 2 == 0:
            raise ValidationError("quadrature needs consecutive replicas 2 .. 2K")
        moments = np.array([1.0] + [math.exp(_log_renyi_trace(nu, n)) for n in reps])
        value = _quadrature_entropy(moments)
    elif method == "polynomial":
        ns = np.array([1, *reps], dtype=float)
        logs = np.array([0.0] + [_log_renyi_trace(nu, n) for n in ns[1:]])
        value = -np.polyfit(ns - 1.0, logs, ns.size - 1)[-2]
    else:
        raise ValidationError(f"unknown replica method {method!r}")
    value = float(value) + 0.0
    return ReplicaEstimate(from_nats(value, unit), from_nats(_entropy_nats(nu), unit), tuple(reps), method)


def refinement_sweep(
    N0: int = 16,
    levels: int = 3,
    fraction: float = 0.5,
    mu: float = 1e-3,
    coupling: float = 1.0,
    boundary: str = "open",
    unit="nats",
    threads: int = 1,
) -> list[tuple[int, float]]:
    """Entropy of a fixed fraction of the chain as the lattice is refined.

    Level ``k`` uses ``N0 * 2**k`` sites; the region is the first
    ``round(fraction * N)`` sites. Returns ``[(N, S), ...]``.
    """
    if levels < 3:
        raise ValidationError(f"need at least 3 refinement levels, got {levels}")
    if not 0 < fraction < 1:
        raise ValidationError(f"region fraction must lie in (0, 1), got {fraction}")
    sizes = [N0 * 2**k for k in range(levels)]

    def one(n):
        size = min(n - 1, max(1, round(fraction * n)))
        return n, geometric_entropy(HarmonicChain(n, coupling, mu, boundary), RegionSplit(range(size)), unit)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        return list(ex.map(one, sizes))


def entropy_chain_rule(c: HarmonicChain, r: RegionSplit, unit="nats", beta: float | None = None) -> tuple[float, float, float]:
    """``(S_total, S_in, S_out_given_in)`` with ``S_out|in = S_total - S_in``."""
    r.validate(c.N)
    X, P = ground_state_correlations(c, beta)
    s_total = _entropy_nats(symplectic_eigenvalues(X, P, range(c.N)))
    s_in = _entropy_nats(symplectic_eigenvalues(X, P, r.inside))
    return from_nats(s_total, unit), from_nats(s_in, unit), from_nats(s_total - s_in, unit)
