from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rqit.geoment import (
    HarmonicChain,
    RegionSplit,
    entropy_chain_rule,
    geometric_entropy,
    ground_state_correlations,
    refinement_sweep,
    renyi_entropy,
    renyi_trace,
    replica_entropy,
    symplectic_eigenvalues,
)
from rqit.qstate import ValidationError


def fock_region_entropy(chain, sites, cutoff=12):
    """Brute-force ground state in a truncated number basis, reduced to ``sites``."""
    K = chain.dynamical_matrix()
    N = chain.N
    a = np.diag(np.sqrt(np.arange(1, cutoff)), 1)
    eye = np.eye(cutoff)
    w0 = np.sqrt(np.diag(K))

    def on(m, i):
        return reduce(np.kron, [m if j == i else eye for j in range(N)])

    xs = [on((a + a.T) / np.sqrt(2 * w0[i]), i) for i in range(N)]
    H = sum(on(w0[i] * (a.T @ a + 0.5 * eye), i) for i in range(N))
    for i in range(N):
        for j in range(i + 1, N):
            if K[i, j]:
                H = H + K[i, j] * xs[i] @ xs[j]
    _, v = np.linalg.eigh(H)
    psi = v[:, 0].reshape([cutoff] * N)
    rest = [i for i in range(N) if i not in sites]
    psi = np.transpose(psi, list(sites) + rest).reshape(cutoff ** len(sites), -1)
    p = np.linalg.svd(psi, compute_uv=False) ** 2
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def test_uncoupled_chain_is_product():
    c = HarmonicChain(6, coupling=0.0, mu=1.0)
    X, P = ground_state_correlations(c)
    assert np.allclose(X, np.eye(6) / 2) and np.allclose(P, np.eye(6) / 2)
    r = RegionSplit([1, 4])
    assert geometric_entropy(c, r) == 0.0
    assert renyi_trace(c, r, 2) == 1.0 and renyi_trace(c, r, 5) == 1.0
    assert entropy_chain_rule(c, r) == (0.0, 0.0, 0.0)
    assert [s for _, s in refinement_sweep(4, 3, coupling=0.0, mu=1.0)] == [0.0, 0.0, 0.0]


def test_two_site_normal_modes():
    mu, c = 0.7, 1.3
    K = HarmonicChain(2, c, mu).dynamical_matrix()
    assert np.allclose(K, [[mu**2 + 2 * c, -c], [-c, mu**2 + 2 * c]])
    # symmetric and antisymmetric modes
    wp, wm = np.sqrt(mu**2 + c), np.sqrt(mu**2 + 3 * c)
    X, P = ground_state_correlations(HarmonicChain(2, c, mu))
    assert np.isclose(X[0, 0], (1 / wp + 1 / wm) / 4) and np.isclose(X[0, 1], (1 / wp - 1 / wm) / 4)
    assert np.isclose(P[0, 0], (wp + wm) / 4) and np.isclose(P[0, 1], (wp - wm) / 4)


def test_uncertainty_bound():
    rng = np.random.default_rng(0)
    for _ in range(10):
        c = HarmonicChain(int(rng.integers(2, 12)), rng.uniform(0.1, 3), rng.uniform(0.01, 2))
        X, P = ground_state_correlations(c)
        assert np.linalg.eigvals(X @ P).real.min() >= 0.25 - 1e-9


@pytest.mark.parametrize("mu,coupling", [(1.0, 1.0), (0.5, 1.0), (1.0, 0.3)])
def test_two_site_entropy_matches_fock(mu, coupling):
    c = HarmonicChain(2, coupling, mu)
    assert abs(geometric_entropy(c, RegionSplit([0])) - fock_region_entropy(c, [0])) < 1e-6


def test_three_site_entropy_matches_fock():
    c = HarmonicChain(3, 1.0, 0.8)
    for sites in ([0], [1], [0, 2]):
        assert abs(geometric_entropy(c, RegionSplit(sites)) - fock_region_entropy(c, sites)) < 1e-6


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), N=st.integers(2, 64))
def test_complement_symmetry(seed, N):
    rng = np.random.default_rng(seed)
    c = HarmonicChain(N, rng.uniform(0.2, 2.0), rng.uniform(0.01, 1.5), rng.choice(["open", "periodic"]))
    size = int(rng.integers(1, N))
    r = RegionSplit(rng.choice(N, size, replace=False))
    assert abs(geometric_entropy(c, r) - geometric_entropy(c, r.complement(N))) < 1e-8
    X, P = ground_state_correlations(c)
    assert symplectic_eigenvalues(X, P, r.inside).min() >= 0.5 - 1e-9


def test_periodic_translation_invariance():
    c = HarmonicChain(12, 1.0, 0.2, "periodic")
    base = geometric_entropy(c, RegionSplit([0, 1, 2, 5]))
    for shift in range(1, 12):
        r = RegionSplit([(i + shift) % 12 for i in (0, 1, 2, 5)])
        assert abs(geometric_entropy(c, r) - base) < 1e-9


def test_renyi_ordering_and_monotonicity():
    rng = np.random.default_rng(1)
    for _ in range(20):
        N = int(rng.integers(3, 20))
        c = HarmonicChain(N, rng.uniform(0.2, 2.0), rng.uniform(0.01, 1.5))
        r = RegionSplit(range(int(rng.integers(1, N))))
        S = geometric_entropy(c, r)
        traces = [renyi_trace(c, r, n) for n in (2, 3, 4, 5)]
        assert np.all(np.diff(traces) < 0) and 0 < traces[-1] <= 1
        assert renyi_entropy(c, r, 2) <= S + 1e-12
        assert renyi_entropy(c, r, 3) <= renyi_entropy(c, r, 2) + 1e-12


def test_renyi_trace_rejects_bad_index():
    c, r = HarmonicChain(4), RegionSplit([0])
    for n in (1, 2.5, 0):
        with pytest.raises(ValidationError):
            renyi_trace(c, r, n)


def test_replica_continuation():
    c, r = HarmonicChain(8, 1.0, 1.0), RegionSplit(range(4))
    est = replica_entropy(c, r)
    assert est.replicas == (2, 3, 4)
    assert np.isclose(est.direct, geometric_entropy(c, r))
    assert est.relative_error < 0.05
    finer = replica_entropy(c, r, replicas=range(2, 7))
    assert finer.relative_error < est.relative_error
    poly = replica_entropy(c, r, method="polynomial")
    assert np.isfinite(poly.value)
    with pytest.raises(ValidationError):
        replica_entropy(c, r, replicas=(2, 4, 5))
    with pytest.raises(ValidationError):
        replica_entropy(c, r, method="zeta")


def test_refinement_near_critical_grows():
    seq = refinement_sweep(16, 3, fraction=0.5, mu=1e-3)
    assert [n for n, _ in seq] == [16, 32, 64]
    s = [v for _, v in seq]
    assert s[0] < s[1] < s[2]


def test_refinement_massive_saturates():
    s = [v for _, v in refinement_sweep(8, 5, mu=1.0)]
    gaps = np.abs(np.diff(s))
    # gaps shrink until they reach rounding noise
    assert gaps[1] < gaps[0] * 1e-2
    assert np.all(gaps[2:] < 1e-11)


def test_refinement_thread_independent():
    assert refinement_sweep(8, 4, threads=1) == refinement_sweep(8, 4, threads=3)
    with pytest.raises(ValidationError):
        refinement_sweep(8, 2)


def test_chain_rule_ground_state():
    rng = np.random.default_rng(2)
    for _ in range(10):
        N = int(rng.integers(3, 30))
        c = HarmonicChain(N, rng.uniform(0.2, 2.0), rng.uniform(0.01, 1.5))
        r = RegionSplit(range(int(rng.integers(1, N))))
        total, s_in, s_out_in = entropy_chain_rule(c, r)
        assert abs(total) < 1e-9
        assert abs(s_out_in + s_in) < 1e-9


def test_chain_rule_thermal():
    c, r = HarmonicChain(10, 1.0, 0.5), RegionSplit(range(4))
    total, s_in, s_out_in = entropy_chain_rule(c, r, beta=1.5)
    assert total > 0
    assert np.isclose(s_out_in, total - s_in, atol=1e-12)
    # thermal single-mode check: uncoupled sites at beta carry the Bose entropy
    w = 1.3
    total, s_in, _ = entropy_chain_rule(HarmonicChain(3, 0.0, w), RegionSplit([0]), beta=2.0)
    n = 1 / np.expm1(2.0 * w)
    bose = (n + 1) * np.log(n + 1) - n * np.log(n)
    assert np.isclose(s_in, bose) and np.isclose(total, 3 * bose)


def test_validation():
    with pytest.raises(ValidationError):
        HarmonicChain(1)
    with pytest.raises(ValidationError):
        HarmonicChain(4, boundary="twisted")
    with pytest.raises(ValidationError):
        ground_state_correlations(HarmonicChain(4, 1.0, 0.0, "periodic"))
    for bad in ([], range(4), [7]):
        with pytest.raises(ValidationError):
            geometric_entropy(HarmonicChain(4), RegionSplit(bad))
