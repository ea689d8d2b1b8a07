import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rqit.qstate import (
    DensityOperator,
    PureState,
    ValidationError,
    basis_state,
    bell_state,
    eigvals_hermitian,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    pure_density,
    support_log,
    tensor,
)
from rqit.thermal import DimerParams, dimer_density


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def test_pure_density_basis_projector():
    assert np.allclose(pure_density(basis_state(0, 2)).matrix, np.diag([1, 0]))


def test_pure_density_singlet_block():
    rho = pure_density(bell_state("psi-")).matrix
    expected = np.zeros((4, 4))
    expected[1, 1] = expected[2, 2] = 0.5
    expected[1, 2] = expected[2, 1] = -0.5
    assert np.allclose(rho, expected, atol=1e-15)


def test_pure_density_plus_state():
    plus = PureState(np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(pure_density(plus).matrix, 0.5 * np.ones((2, 2)))


def test_unnormalized_state_rejected():
    with pytest.raises(ValidationError):
        PureState([1.0, 1.0])
    with pytest.raises(ValidationError):
        pure_density(np.array([1.0, 0.1]))


def test_density_validation():
    with pytest.raises(ValidationError):
        DensityOperator([[0.5, 0.1], [0.2, 0.5]])
    with pytest.raises(ValidationError):
        DensityOperator(np.eye(2))
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError):
        DensityOperator(np.eye(4) / 4, (2, 3))


def test_tensor_examples():
    half = DensityOperator(np.eye(2) / 2)
    assert np.allclose(tensor(half, half).matrix, np.eye(4) / 4)
    out = tensor(DensityOperator(np.diag([1, 0])), DensityOperator(np.diag([0, 1])))
    assert np.allclose(out.matrix, np.diag([0, 1, 0, 0]))
    assert out.dims == (2, 2)


def test_tensor_of_dimer_marginals_at_infinite_temperature():
    rho = dimer_density(DimerParams(1.0, 0.0))
    m1 = partial_trace(rho, 0)
    assert np.allclose(tensor(m1, partial_trace(rho, 1)).matrix, rho.matrix, atol=1e-15)


def test_partial_trace_examples():
    rng = np.random.default_rng(0)
    a = DensityOperator(random_density(rng, 2))
    b = DensityOperator(random_density(rng, 3))
    assert np.allclose(partial_trace(tensor(a, b), 0).matrix, a.matrix, atol=1e-12)
    assert np.allclose(partial_trace(tensor(a, b), 1).matrix, b.matrix, atol=1e-12)
    assert np.allclose(partial_trace(bell_state("phi-"), 0).matrix, np.eye(2) / 2)
    everything = partial_trace(tensor(a, b), ())
    assert everything.dims == (1,) and np.isclose(everything.matrix[0, 0], 1.0)


@pytest.mark.parametrize("J", [-2.0, 0.5, 1.0, 3.0])
@pytest.mark.parametrize("beta", [0.0, 0.3, 1.0, 10.0])
def test_dimer_marginals_are_maximally_mixed(J, beta):
    rho = dimer_density(DimerParams(J, beta))
    for k in (0, 1):
        assert np.allclose(partial_trace(rho, k).matrix, np.eye(2) / 2, atol=1e-14)


def test_partial_trace_reorders_kept_subsystems():
    rng = np.random.default_rng(1)
    a, b, c = (DensityOperator(random_density(rng, d)) for d in (2, 3, 2))
    abc = tensor(a, b, c)
    assert np.allclose(partial_trace(abc, (2, 0)).matrix, tensor(c, a).matrix, atol=1e-12)


def test_partial_trace_bad_selector():
    with pytest.raises(ValidationError):
        partial_trace(bell_state(), 2)
    with pytest.raises(ValidationError):
        partial_trace(bell_state(), (0, 0))


@settings(max_examples=40, deadline=None)
@given(
    dims=st.lists(st.sampled_from([2, 3, 4]), min_size=2, max_size=3),
    seed=st.integers(0, 2**31),
    data=st.data(),
)
def test_partial_trace_preserves_trace(dims, seed, data):
    rng = np.random.default_rng(seed)
    d = int(np.prod(dims))
    rho = DensityOperator(random_density(rng, d), dims)
    keep = data.draw(st.lists(st.integers(0, len(dims) - 1), unique=True))
    red = partial_trace(rho, keep)
    assert abs(np.trace(red.matrix) - 1.0) < 1e-12
    assert np.allclose(red.matrix, red.matrix.conj().T)


def test_eigvals_examples():
    assert np.allclose(eigvals_hermitian(np.eye(2) / 2), [0.5, 0.5])
    assert np.allclose(eigvals_hermitian(pure_density(bell_state())), [1, 0, 0, 0], atol=1e-10)
    ev = eigvals_hermitian(dimer_density(DimerParams(1.0, 1.0)))
    oracle = np.linalg.eigvalsh(dimer_density(DimerParams(1.0, 1.0)).matrix)
    assert np.allclose(np.sort(ev), np.sort(oracle))
    assert np.isclose(ev.sum(), 1.0, atol=1e-9)
    assert np.all(np.diff(ev) <= 0)


def test_eigvals_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        eigvals_hermitian(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(d=st.integers(2, 6), seed=st.integers(0, 2**31))
def test_pure_density_spectrum_and_bounds(d, seed):
    rng = np.random.default_rng(seed)
    psi = PureState.normalized(rng.normal(size=d) + 1j * rng.normal(size=d))
    ev = eigvals_hermitian(pure_density(psi))
    assert np.allclose(ev, np.r_[1.0, np.zeros(d - 1)], atol=1e-10)
    mixed = eigvals_hermitian(DensityOperator(random_density(rng, d)))
    assert np.all(mixed >= -1e-9) and np.all(mixed <= 1 + 1e-9)


def test_support_log_excludes_kernel():
    log_m, proj = support_log(np.diag([0.5, 0.5, 0.0]))
    assert np.allclose(log_m, np.diag([np.log(0.5), np.log(0.5), 0.0]))
    assert np.allclose(proj, np.diag([1, 1, 0]))


def test_json_round_trip():
    m = random_density(np.random.default_rng(2), 3)
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)
