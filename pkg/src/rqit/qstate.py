"""Dense state-vector and density-operator primitives.

Subsystems are ordered row-major: the leftmost factor of a tensor product is
the slowest-varying index of the flattened vector or matrix.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NORM_ATOL = 1e-12
HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
POSITIVITY_FLOOR = -1e-9
# eigenvalues below this are treated as outside the support of an operator
SUPPORT_CUTOFF = 1e-15


class ValidationError(ValueError):
    """Raised when an input violates the invariants of a state or table."""


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValidationError(f"subsystem dimensions must be positive, got {dims}")
    if math.prod(dims) != size:
        raise ValidationError(f"dims {dims} do not multiply to {size}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector with its subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amplitudes, dims: Sequence[int] | None = None):
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if dims is None:
            dims = (vec.size,)
        dims = _check_dims(dims, vec.size)
        norm2 = float(np.vdot(vec, vec).real)
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ValidationError(f"state not normalized (|psi|^2 = {norm2!r})")
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims: Sequence[int] | None = None) -> "PureState":
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(vec / norm, dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive, unit-trace matrix with subsystem dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims: Sequence[int] | None = None):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"density operator must be square, got shape {m.shape}")
        if dims is None:
            dims = (m.shape[0],)
        dims = _check_dims(dims, m.shape[0])
        if not np.allclose(m, m.conj().T, rtol=0, atol=HERMITIAN_ATOL):
            raise ValidationError("density operator is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f"density operator has trace {tr!r}, expected 1")
        m = 0.5 * (m + m.conj().T)
        evals = np.linalg.eigvalsh(m)
        if evals[0] < POSITIVITY_FLOOR:
            raise ValidationError(f"density operator has negative eigenvalue {evals[0]!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


class BellKind(enum.Enum):
    """The four Bell states in the computational basis.

    ``PSI_MINUS`` is the singlet (|01> - |10>)/sqrt(2).
    """

    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_BELL_VECTORS = {
    BellKind.PHI_PLUS: (1, 0, 0, 1),
    BellKind.PHI_MINUS: (1, 0, 0, -1),
    BellKind.PSI_PLUS: (0, 1, 1, 0),
    BellKind.PSI_MINUS: (0, 1, -1, 0),
}


def bell_state(kind: BellKind | str = BellKind.PSI_MINUS) -> PureState:
    kind = BellKind(kind)
    return PureState(np.array(_BELL_VECTORS[kind], dtype=complex) / np.sqrt(2), (2, 2))


def basis_state(index: int, dim: int) -> PureState:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return PureState(vec)


def pure_density(psi: PureState) -> DensityOperator:
    """Projector |psi><psi| onto a normalized state."""
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    v = psi.amplitudes
    return DensityOperator(np.outer(v, v.conj()), psi.dims)


def as_density(state) -> DensityOperator:
    if isinstance(state, DensityOperator):
        return state
    if isinstance(state, PureState):
        return pure_density(state)
    arr = np.asarray(state)
    if arr.ndim == 1:
        return pure_density(PureState(arr))
    return DensityOperator(arr)


def tensor(*ops: DensityOperator) -> DensityOperator:
    """Kronecker product of density operators, dims concatenated."""
    if not ops:
        raise ValidationError("tensor needs at least one operand")
    mat = np.ones((1, 1), dtype=complex)
    dims: list[int] = []
    for op in ops:
        op = as_density(op)
        mat = np.kron(mat, op.matrix)
        dims.extend(op.dims)
    return DensityOperator(mat, dims)


def _normalize_keep(keep: Iterable[int] | int, n: int) -> tuple[int, ...]:
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(int(k) for k in keep)
    if len(set(keep)) != len(keep):
        raise ValidationError(f"subsystem indices must be distinct, got {keep}")
    for k in keep:
        if not 0 <= k < n:
            raise ValidationError(f"subsystem index {k} out of range for {n} subsystems")
    return keep


def partial_trace(rho, keep: Iterable[int] | int) -> DensityOperator:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems appear in the order given. Keeping nothing returns
    the 1x1 operator [[1]].
    """
    rho = as_density(rho)
    dims = rho.dims
    n = len(dims)
    keep = _normalize_keep(keep, n)
    traced = [i for i in range(n) if i not in keep]
    t = rho.matrix.reshape(dims + dims)
    # letters: rows a.., columns A..; traced subsystems share a letter
    rows = [chr(ord("a") + i) for i in range(n)]
    cols = [chr(ord("A") + i) for i in range(n)]
    for i in traced:
        cols[i] = rows[i]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    kdims = tuple(dims[i] for i in keep)
    d = math.prod(kdims)
    return DensityOperator(reduced.reshape(d, d), kdims or (1,))


def _as_hermitian_matrix(m) -> np.ndarray:
    if isinstance(m, DensityOperator):
        return m.matrix
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {arr.shape}")
    scale = max(1.0, float(np.max(np.abs(arr))) if arr.size else 1.0)
    if not np.allclose(arr, arr.conj().T, rtol=0, atol=HERMITIAN_ATOL * scale):
        raise ValidationError("matrix is not Hermitian")
    return 0.5 * (arr + arr.conj().T)


def eigvals_hermitian(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted in descending order."""
    return np.linalg.eigvalsh(_as_hermitian_matrix(m))[::-1]


def support_log(m) -> tuple[np.ndarray, np.ndarray]:
    """Natural log of a positive semidefinite matrix restricted to its support.

    Returns ``(log_m, projector)``. Eigen-directions with eigenvalue below
    ``SUPPORT_CUTOFF`` are excluded: they contribute zero to ``log_m`` and are
    absent from ``projector``.
    """
    h = _as_hermitian_matrix(m)
    w, v = np.linalg.eigh(h)
    on = w > SUPPORT_CUTOFF
    vs = v[:, on]
    log_m = (vs * np.log(w[on])) @ vs.conj().T
    return log_m, vs @ vs.conj().T


def matrix_to_json(m) -> list:
    """Nested ``[re, im]`` pairs, row by row."""
    arr = m.matrix if isinstance(m, DensityOperator) else np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in arr]
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]
