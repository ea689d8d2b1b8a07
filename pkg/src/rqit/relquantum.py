"""Lorentz boosts of spin-1/2 wave packets and the entanglement they carry.

A packet is a superposition of *branches*. Each branch is a spin vector
(one or two qubits) times a product of single-particle momentum envelopes.
Every particle's envelope lives on a discrete momentum grid whose cells are
carried along by boosts: a cell at momentum ``q`` moves to ``p = Lq``, its
volume picks up the factor ``E(p)/E(q)``, and its spinor amplitude picks up
``sqrt(E(q)/E(p))`` times the Wigner rotation ``W(L, q)``. Probability per
cell is therefore conserved exactly and boosts compose as a group.

Per particle, the amplitude in a cell is stored as a 2x2 *transfer field*
mapping the branch's preparation spin to the current spin, so a two-particle
branch never has to be expanded on the product grid. Branches of the same
particle either share a grid (exact overlaps) or have disjoint support,
which is checked when the packet is built.

Momenta are in units where the mass sets the scale; the default is m = 1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .entropy import von_neumann_entropy
from .lorentz import I2, BoostSpec, energy, wigner_rotation
from .qstate import BellKind, DensityOperator, ValidationError, bell_state

GRID_DEFECT_TOL = 1e-4
BOOST_DEFECT_TOL = 1e-3
MIN_EXTENT = 5.0
DISJOINT_OVERLAP_TOL = 1e-8
CONCURRENCE_TIE = 1e-12


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """Cell-centre momenta, shape (n, 3), and cell volumes, shape (n,)."""

    points: np.ndarray
    weights: np.ndarray
    mean: np.ndarray
    sigma: float


@dataclass(frozen=True, eq=False)
class SpinMomentumPacket:
    """One- or two-particle spin-1/2 wave packet on comoving momentum grids.

    Attributes
    ----------
    mass : float
        Particle mass.
    sigma_r : float
        Momentum spread (std of each component of |f|^2) at preparation.
    spins : tuple of ndarray
        Preparation spin vector of each branch, shape ``(2,) * n_particles``.
    grids : tuple of tuple of MomentumGrid
        ``grids[i]`` lists the distinct grids used by particle ``i``.
    modes : tuple of tuple of (int, ndarray)
        ``modes[b][i] = (g, field)``: branch ``b`` of particle ``i`` lives on
        ``grids[i][g]`` with transfer field of shape (n, 2, 2).
    frame : ndarray
        Accumulated SL(2,C) matrix of all boosts applied so far.
    """

    mass: float
    sigma_r: float
    spins: tuple
    grids: tuple
    modes: tuple
    frame: np.ndarray

    @property
    def n_particles(self) -> int:
        return len(self.grids)

    @property
    def n_branches(self) -> int:
        return len(self.spins)

    def norm(self) -> float:
        """Squared norm of the discretized state, sum over cells of |psi|^2 dV."""
        return float(np.real(np.trace(_spin_block(self))))

    def amplitudes(self) -> np.ndarray:
        """Dense amplitudes indexed by (spin indices, grid indices).

        Only available when every branch of a particle shares that particle's
        single grid; the result has shape ``(2,) * n + (N_1, ..., N_n)`` and
        includes the square root of the cell volume, so its squared 2-norm is
        :meth:`norm`.
        """
        if any(len(g) != 1 for g in self.grids):
            raise ValidationError("dense amplitudes need a single grid per particle")
        n = self.n_particles
        total = 0
        for chi, modes in zip(self.spins, self.modes):
            fields = [f * np.sqrt(self.grids[i][0].weights)[:, None, None] for i, (_, f) in enumerate(modes)]
            if n == 1:
                total = total + np.einsum("kst,t->sk", fields[0], chi)
            else:
                total = total + np.einsum("kac,lbd,cd->abkl", fields[0], fields[1], chi)
        return total


def _gaussian_grid(
    sigma: float,
    mean: Sequence[float],
    n_grid: int,
    extent: float,
    spread_axes: Sequence[int],
) -> tuple[MomentumGrid, np.ndarray]:
    """Grid symmetric about ``mean`` and normalized Gaussian amplitudes on it."""
    if sigma <= 0:
        raise ValidationError(f"momentum spread must be positive, got {sigma}")
    if extent < MIN_EXTENT:
        raise ValidationError(f"grid must extend at least {MIN_EXTENT} sigma per axis, got {extent}")
    if n_grid < 3:
        raise ValidationError(f"need at least 3 grid points per axis, got {n_grid}")
    mean = np.asarray(mean, dtype=float)
    axes, vol = [], 1.0
    for a in range(3):
        if a in spread_axes:
            x = np.linspace(-extent * sigma, extent * sigma, n_grid)
            vol *= x[1] - x[0]
        else:
            x = np.zeros(1)
        axes.append(x)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    d = len(spread_axes)
    # |f|^2 is a product of normal densities along the spread axes
    dens = np.exp(-np.sum(mesh**2, axis=1) / (2 * sigma**2)) / (2 * math.pi * sigma**2) ** (d / 2)
    weights = np.full(mesh.shape[0], vol)
    mass = float(np.sum(dens * weights))
    if abs(mass - 1.0) > GRID_DEFECT_TOL:
        raise ValidationError(
            f"momentum grid too coarse or narrow: normalization defect {abs(mass - 1.0):.2e}"
        )
    amp = np.sqrt(dens / mass)
    grid = MomentumGrid(mesh + mean, weights, mean, sigma)
    return grid, amp


def _check_disjoint(grids: Sequence[MomentumGrid]) -> None:
    for g1, g2 in itertools.combinations(grids, 2):
        gap = np.sum((g1.mean - g2.mean) ** 2)
        s2 = g1.sigma**2 + g2.sigma**2
        # overlap of two normalized Gaussian amplitudes with spreads s1, s2
        pref = (2 * g1.sigma * g2.sigma / s2) ** 1.5
        if pref * math.exp(-gap / (4 * s2)) > DISJOINT_OVERLAP_TOL:
            raise ValidationError("branches of one particle on different grids must not overlap")


def _build(mass, sigma_r, branches, grid_specs) -> SpinMomentumPacket:
    """Assemble a packet from ``branches = [(amplitude, chi, [grid key per particle])]``.

    ``grid_specs[i]`` maps a grid key to ``(sigma, mean, n_grid, extent,
    spread_axes)`` for particle ``i``.
    """
    n_particles = len(grid_specs)
    grids, amps, index = [], [], []
    for i, spec in enumerate(grid_specs):
        gl, al, ix = [], [], {}
        for key, (sigma, mean, n_grid, extent, spread_axes) in spec.items():
            g, a = _gaussian_grid(sigma, mean, n_grid, extent, spread_axes)
            ix[key] = len(gl)
            gl.append(g)
            al.append(a)
        _check_disjoint(gl)
        grids.append(tuple(gl))
        amps.append(al)
        index.append(ix)
    spins, modes = [], []
    for amplitude, chi, keys in branches:
        chi = np.asarray(chi, dtype=complex).reshape((2,) * n_particles)
        spins.append(amplitude * chi)
        row = []
        for i, key in enumerate(keys):
            g = index[i][key]
            row.append((g, amps[i][g][:, None, None] * I2))
        modes.append(tuple(row))
    packet = SpinMomentumPacket(mass, sigma_r, tuple(spins), tuple(grids), tuple(modes), I2.copy())
    norm = packet.norm()
    if abs(norm - 1.0) > GRID_DEFECT_TOL:
        raise ValidationError(f"packet normalization defect {abs(norm - 1.0):.2e}")
    return replace(packet, spins=tuple(s / math.sqrt(norm) for s in packet.spins))


def gaussian_packet(
    sigma_r: float,
    m: float = 1.0,
    mean=(0.0, 0.0, 0.0),
    spin=(1.0, 0.0),
    n_grid: int = 33,
    extent: float = MIN_EXTENT,
    spread_axes: Sequence[int] = (0, 1, 2),
) -> SpinMomentumPacket:
    """Single particle with spin ``spin`` and a Gaussian momentum distribution.

    ``spread_axes`` selects which momentum components are spread; the others
    are sharp at the mean.
    """
    spin = np.asarray(spin, dtype=complex)
    nrm = np.linalg.norm(spin)
    if nrm == 0:
        raise ValidationError("spin vector must be non-zero")
    spec = {0: (sigma_r, mean, n_grid, extent, tuple(spread_axes))}
    return _build(m, sigma_r, [(1.0, spin / nrm, [0])], [spec])


def bell_pair_packet(
    kind: BellKind | str = BellKind.PSI_MINUS,
    sigma_r: float = 1.0,
    m: float = 1.0,
    mean_momentum: float = 0.0,
    direction=(1.0, 0.0, 0.0),
    n_grid: int = 33,
    extent: float = MIN_EXTENT,
    spread_axes: Sequence[int] = (0, 1, 2),
) -> SpinMomentumPacket:
    """Two particles in a Bell spin state with product Gaussian momenta.

    Particle A is centred at ``+mean_momentum * direction`` and particle B at
    the opposite momentum.
    """
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    chi = bell_state(kind).amplitudes
    specs = [
        {0: (sigma_r, mean_momentum * d, n_grid, extent, tuple(spread_axes))},
        {0: (sigma_r, -mean_momentum * d, n_grid, extent, tuple(spread_axes))},
    ]
    return _build(m, sigma_r, [(1.0, chi, [0, 0])], specs)


def momentum_entangled_packet(
    p: float,
    m: float = 1.0,
    width: float | None = None,
    n_grid: int = 15,
    extent: float = MIN_EXTENT,
) -> SpinMomentumPacket:
    """Equal superposition of two back-to-back pairs moving at right angles.

    One branch has spin state Phi- with momenta +-p along y, the other Phi+
    with momenta +-p along x. Spins are quantized along z, the direction the
    packet is meant to be boosted in. The momenta are narrow Gaussians of
    spread ``width`` (default ``p / 50``).
    """
    if p <= 0:
        raise ValidationError(f"momentum magnitude must be positive, got {p}")
    width = p / 50.0 if width is None else width
    ex, ey = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    spread = (0, 1, 2)
    specs = [
        {"y": (width, p * ey, n_grid, extent, spread), "x": (width, p * ex, n_grid, extent, spread)},
        {"y": (width, -p * ey, n_grid, extent, spread), "x": (width, -p * ex, n_grid, extent, spread)},
    ]
    r = 1 / math.sqrt(2)
    branches = [
        (r, bell_state(BellKind.PHI_MINUS).amplitudes, ["y", "y"]),
        (r, bell_state(BellKind.PHI_PLUS).amplitudes, ["x", "x"]),
    ]
    return _build(m, width, branches, specs)


def _as_boost(b) -> BoostSpec:
    if isinstance(b, BoostSpec):
        return b
    return BoostSpec(float(b))


def boost_packet(packet: SpinMomentumPacket, boost) -> SpinMomentumPacket:
    """Apply a pure Lorentz boost to every particle of the packet.

    ``boost`` is a :class:`BoostSpec` or a rapidity (boost along z).
    """
    b = _as_boost(boost)
    A = b.spinor()
    m = packet.mass
    new_grids, factors = [], []
    for grids in packet.grids:
        gl, fl = [], []
        for g in grids:
            W, q = wigner_rotation(A, g.points, m)
            e_old, e_new = energy(g.points, m), energy(q, m)
            gl.append(MomentumGrid(q, g.weights * e_new / e_old, g.mean, g.sigma))
            fl.append(np.sqrt(e_old / e_new)[:, None, None] * W)
        new_grids.append(tuple(gl))
        factors.append(fl)
    modes = tuple(
        tuple((g, factors[i][g] @ field) for i, (g, field) in enumerate(row)) for row in packet.modes
    )
    out = SpinMomentumPacket(m, packet.sigma_r, packet.spins, tuple(new_grids), modes, A @ packet.frame)
    defect = abs(out.norm() - packet.norm())
    if not defect <= BOOST_DEFECT_TOL:
        raise ValidationError(f"boost lost {defect:.2e} of the norm")
    return out


def _transfer(packet: SpinMomentumPacket, i: int, b: int, c: int):
    """K[s, t, s', t'] = sum_k dV_k F_b[k, s, t] conj(F_c[k, s', t']) for particle i."""
    gb, fb = packet.modes[b][i]
    gc, fc = packet.modes[c][i]
    if gb != gc:
        return None
    w = packet.grids[i][gb].weights
    return np.einsum("k,kst,kuv->stuv", w, fb, fc.conj())


def _spin_block(packet: SpinMomentumPacket) -> np.ndarray:
    """Unnormalized spin marginal, summed over branch pairs."""
    n = packet.n_particles
    d = 2**n
    rho = np.zeros((d, d), dtype=complex)
    for b, c in itertools.product(range(packet.n_branches), repeat=2):
        ks = [_transfer(packet, i, b, c) for i in range(n)]
        if any(k is None for k in ks):
            continue
        chi_b, chi_c = packet.spins[b], packet.spins[c].conj()
        if n == 1:
            block = np.einsum("t,v,stuv->su", chi_b, chi_c, ks[0])
        else:
            block = np.einsum("ab,cd,sauc,tbvd->stuv", chi_b, chi_c, ks[0], ks[1])
        rho += block.reshape(d, d)
    return rho


def spin_marginal(packet: SpinMomentumPacket) -> DensityOperator:
    """Reduced spin state, momentum traced out; 2x2 or 4x4."""
    rho = _spin_block(packet)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityOperator(rho / np.trace(rho).real, (2,) * packet.n_particles)


def joint_purity(packet: SpinMomentumPacket) -> float:
    """Tr(rho^2) of the discretized joint spin-momentum projector.

    For the unrenormalized pure state this is the squared norm, so it
    measures how well the discretized boost preserves probability.
    """
    return packet.norm() ** 2


def momentum_purity(packet: SpinMomentumPacket) -> float:
    """Purity of the momentum marginal, equal to that of the spin marginal for a pure state."""
    rho = _spin_block(packet)
    return float(np.real(np.trace(rho @ rho))) / packet.norm() ** 2


_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho) -> float:
    """Concurrence of a two-qubit state.

    ``max(0, l1 - l2 - l3 - l4)`` with ``l_i`` the decreasing square roots of
    the eigenvalues of ``rho (Y x Y) rho* (Y x Y)``. These are computed as
    the singular values of ``sqrt(rho) (Y x Y) sqrt(rho)*``, which avoids
    taking square roots of round-off sized eigenvalues.
    """
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValidationError(f"concurrence needs a 4x4 two-qubit state, got {m.shape}")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam = np.linalg.svd(root @ _YY @ root.conj(), compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(c) if c > CONCURRENCE_TIE else 0.0


def boosted_spin_entropy(
    sigma_over_m: float,
    xi: float,
    spin=(1.0, 0.0),
    boost_axis=(0.0, 0.0, 1.0),
    n_grid: int = 33,
    unit="bits",
) -> float:
    """Spin entropy of a single Gaussian packet at rest, seen after a boost."""
    pkt = gaussian_packet(sigma_over_m, spin=spin, n_grid=n_grid)
    pkt = boost_packet(pkt, BoostSpec(xi, boost_axis))
    return von_neumann_entropy(spin_marginal(pkt), unit)


def boosted_pair_concurrence(
    sigma_over_m: float,
    xi: float,
    kind: BellKind | str = BellKind.PSI_MINUS,
    n_grid: int = 33,
    boost_axis=(0.0, 0.0, 1.0),
    mean_momentum: float = 0.0,
    pair_axis=(1.0, 0.0, 0.0),
    spread_axes: Sequence[int] = (0, 1, 2),
) -> float:
    """Spin concurrence of a Bell pair with Gaussian momenta after a boost.

    By default the pair's mean momenta vanish and the boost is along z; a
    non-zero ``mean_momentum`` puts the particles back to back along
    ``pair_axis`` (orthogonal to the boost by default).
    """
    pkt = bell_pair_packet(
        kind, sigma_over_m, 1.0, mean_momentum, pair_axis, n_grid, spread_axes=spread_axes
    )
    pkt = boost_packet(pkt, BoostSpec(xi, boost_axis))
    return wootters_concurrence(spin_marginal(pkt))


def momentum_entangled_concurrence_closed_form(p, xi):
    """Concurrence of the boosted momentum-entangled pair, m = 1.

    ``p^2 (cosh^2 xi - 1) / (sqrt(1 + p^2) cosh xi + 1)^2``
    """
    p, xi = np.asarray(p, dtype=float), np.asarray(xi, dtype=float)
    if np.any(p < 0) or np.any(xi < 0):
        raise ValidationError("need p >= 0 and xi >= 0")
    ch = np.cosh(xi)
    out = p**2 * (ch**2 - 1.0) / (np.sqrt(1.0 + p**2) * ch + 1.0) ** 2
    return float(out) if out.ndim == 0 else out


def momentum_entangled_concurrence_simulated(p: float, xi: float, n_grid: int = 15, width=None) -> float:
    """Concurrence of :func:`momentum_entangled_packet` after a boost along z."""
    pkt = boost_packet(momentum_entangled_packet(p, width=width, n_grid=n_grid), BoostSpec(xi))
    return wootters_concurrence(spin_marginal(pkt))
