"""Measurement and communication protocols on a handful of qubits.

``premeasure`` realizes the von Neumann measurement interaction on a
d-level system and a d-level pointer; ``teleport`` and ``superdense`` run
the two entanglement-assisted protocols on an ebit/anti-ebit pair and keep
a transcript of every step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.linalg import expm

from .entropy import conditional_vn
from .qstate import (
    BellKind,
    PureState,
    ValidationError,
    as_density,
    bell_state,
    matrix_to_json,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
I2 = np.eye(2, dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@dataclass(frozen=True)
class PremeasurementSpec:
    """System and pointer dimension ``d`` (matched)."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValidationError(f"dimension must be >= 2, got {self.d}")


def position_operator(d: int) -> np.ndarray:
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def pointer_momentum(d: int) -> np.ndarray:
    """Discrete momentum of a d-level pointer, the generator of its cyclic shifts.

    ``expm(1j * x * P)`` maps ``|a>`` to ``|a + x mod d>`` for integer x.
    """
    k = np.arange(d)
    F = np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)
    return F @ np.diag(-2 * np.pi * k / d).astype(complex) @ F.conj().T


def premeasurement_unitary(spec: PremeasurementSpec) -> np.ndarray:
    """exp(i X_Q P_A) on system (x) pointer."""
    d = spec.d
    return expm(1j * np.kron(position_operator(d), pointer_momentum(d)))


def premeasure(spec: PremeasurementSpec, system: PureState, pointer: PureState | None = None, strict: bool = True) -> PureState:
    """Couple ``system`` to a pointer prepared in ``|0>``: ``|x, 0> -> |x, x>``.

    With ``strict=False`` any pointer state is accepted and shifted by the
    system's basis index.
    """
    d = spec.d
    if system.dim != d:
        raise ValidationError(f"system dimension {system.dim} does not match d={d}")
    if pointer is None:
        pointer = PureState(np.eye(d)[0])
    elif strict and not np.isclose(abs(pointer.amplitudes[0]), 1.0, rtol=0, atol=1e-12):
        raise ValidationError("pointer must be prepared in |0>")
    joint = np.kron(system.amplitudes, pointer.amplitudes)
    out = premeasurement_unitary(spec) @ joint
    return PureState(out / np.linalg.norm(out), (d, d))


@dataclass
class ProtocolTranscript:
    """Record of a protocol run.

    ``steps`` holds one dict per stage with a label and whatever that stage
    produced (state snapshot, outcome, message).
    """

    steps: list[dict[str, Any]] = field(default_factory=list)
    final_state: np.ndarray | None = None
    fidelity: float = 0.0
    classical_bits: int = 0
    channel_qubits: int = 0
    decoded: str | None = None

    def log(self, label: str, **data) -> None:
        self.steps.append({"step": label, **data})

    def to_dict(self) -> dict:
        def conv(v):
            if isinstance(v, np.ndarray):
                return matrix_to_json(v)
            return v

        return {
            "steps": [{k: conv(v) for k, v in s.items()} for s in self.steps],
            "final_state": None if self.final_state is None else matrix_to_json(self.final_state),
            "fidelity": self.fidelity,
            "classical_bits": self.classical_bits,
            "channel_qubits": self.channel_qubits,
            "decoded": self.decoded,
        }


def _on(op: np.ndarray, qubit: int, n: int = 3) -> np.ndarray:
    mats = [I2] * n
    mats[qubit] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _cnot(control: int, target: int, n: int = 3) -> np.ndarray:
    dim = 2**n
    U = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
        if bits[control]:
            bits[target] ^= 1
        j = sum(b << (n - 1 - q) for q, b in enumerate(bits))
        U[j, i] = 1
    return U


# Pauli P with (I x P)|Phi+> proportional to |kind>
_PAIR_FRAME = {
    BellKind.PHI_PLUS: I2,
    BellKind.PHI_MINUS: Z,
    BellKind.PSI_PLUS: X,
    BellKind.PSI_MINUS: X @ Z,
}
_FRAME_NAME = {BellKind.PHI_PLUS: "I", BellKind.PHI_MINUS: "Z", BellKind.PSI_PLUS: "X", BellKind.PSI_MINUS: "XZ"}


def fidelity(psi_in: np.ndarray, psi_out: np.ndarray) -> float:
    """|<in|out>|^2, blind to global phase."""
    return float(abs(np.vdot(psi_in, psi_out)) ** 2)


def teleport_branch(q: PureState, outcome: tuple[int, int], pair: BellKind | str = BellKind.PSI_MINUS):
    """Teleport ``q`` conditioned on a given Bell-measurement outcome.

    Returns ``(probability, bob_state_after_correction)``.
    """
    pair = BellKind(pair)
    psi = np.kron(q.amplitudes, bell_state(pair).amplitudes)
    psi = _on(H, 0) @ _cnot(0, 1) @ psi
    m1, m2 = outcome
    amps = psi.reshape(2, 2, 2)[m1, m2, :]
    prob = float(np.vdot(amps, amps).real)
    bob = amps / np.sqrt(prob)
    U = np.linalg.matrix_power(Z, m1) @ np.linalg.matrix_power(X, m2)
    correction = (_PAIR_FRAME[pair] @ U).conj().T
    return prob, correction @ bob


def teleport(q: PureState, seed: int = 0, pair: BellKind | str = BellKind.PSI_MINUS, outcome: tuple[int, int] | None = None) -> ProtocolTranscript:
    """Teleport a qubit from Alice to Bob using an ebit/anti-ebit pair.

    Bob makes the pair (default: the singlet) and sends the ebit to Alice.
    Alice measures her qubit and the ebit in the Bell basis and sends the two
    outcome bits; Bob applies one of four Pauli corrections to the anti-ebit.
    The outcome is drawn from ``seed`` unless ``outcome`` forces it.
    """
    if q.dim != 2:
        raise ValidationError("teleport expects a single qubit")
    pair = BellKind(pair)
    t = ProtocolTranscript()
    t.log("input", state=q.amplitudes)
    t.log("pair", kind=pair.value, state=bell_state(pair).amplitudes)
    psi = np.kron(q.amplitudes, bell_state(pair).amplitudes)
    psi = _on(H, 0) @ _cnot(0, 1) @ psi
    probs = np.array([np.sum(np.abs(psi.reshape(4, 2)[k]) ** 2) for k in range(4)])
    if outcome is None:
        k = int(np.random.default_rng(seed).choice(4, p=probs / probs.sum()))
        outcome = (k >> 1, k & 1)
    t.log("bell_measurement", outcome=f"{outcome[0]}{outcome[1]}", probabilities=probs.tolist())
    t.log("classical_message", bits=f"{outcome[0]}{outcome[1]}")
    _, bob = teleport_branch(q, outcome, pair)
    m1, m2 = outcome
    op = (_PAIR_FRAME[pair] @ np.linalg.matrix_power(Z, m1) @ np.linalg.matrix_power(X, m2)).conj().T
    # Bob applies (frame . Z^m1 X^m2)^dagger
    t.log(
        "correction",
        pair_frame=_FRAME_NAME[pair],
        outcome_pauli={(0, 0): "I", (0, 1): "X", (1, 0): "Z", (1, 1): "ZX"}[(m1, m2)],
        operator=op,
    )
    t.final_state = bob
    t.fidelity = fidelity(q.amplitudes, bob)
    t.classical_bits = 2
    t.channel_qubits = 0
    return t


_ENCODE = {"00": I2, "01": X, "10": Z, "11": Z @ X}


def superdense(bits: str, pair: BellKind | str = BellKind.PSI_MINUS) -> ProtocolTranscript:
    """Send two classical bits by encoding them on one half of a shared pair.

    Alice applies one of four Paulis to the anti-ebit and sends that single
    qubit; Bob measures it together with the ebit he kept in the Bell basis.
    """
    if bits not in _ENCODE:
        raise ValidationError(f"message must be one of {sorted(_ENCODE)}, got {bits!r}")
    pair = BellKind(pair)
    t = ProtocolTranscript()
    t.log("pair", kind=pair.value, state=bell_state(pair).amplitudes)
    # qubit 0 is the anti-ebit handed to Alice, qubit 1 the ebit Bob keeps
    psi = np.kron(_ENCODE[bits], I2) @ bell_state(pair).amplitudes
    t.log("encode", message=bits, state=psi)
    t.log("send", qubits=1)
    # undo the pair's local frame on Bob's side, then disentangle the Bell basis
    psi = np.kron(I2, _PAIR_FRAME[pair].conj().T) @ psi
    psi = np.kron(H, I2) @ CNOT @ psi
    probs = np.abs(psi) ** 2
    k = int(np.argmax(probs))
    decoded = f"{k >> 1}{k & 1}"
    t.log("bell_measurement", outcome=decoded, probabilities=probs.tolist())
    t.final_state = psi
    t.fidelity = float(probs[k])
    t.classical_bits = 2
    t.channel_qubits = 1
    t.decoded = decoded
    return t


def partial_information(rho_ab, split=None, unit="bits") -> tuple[float, float]:
    """(S(A|B), S(B|A)) for a bipartite state."""
    rho = as_density(rho_ab)
    if split is None:
        split = (0,)
    a = tuple(split)
    b = tuple(i for i in range(len(rho.dims)) if i not in a)
    return conditional_vn(rho, a, unit), conditional_vn(rho, b, unit)
