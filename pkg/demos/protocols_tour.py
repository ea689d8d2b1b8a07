"""Teleportation and superdense coding, step by step.

Teleportation spends one shared pair and two classical bits to move a qubit;
superdense coding spends one shared pair and one transmitted qubit to move
two classical bits. The transcripts show each stage.
"""
import numpy as np

from rqit import PureState, superdense, teleport

theta, phi = 1.1, 0.4
q = PureState(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))
t = teleport(q, seed=3)
for step in t.steps:
    extra = {k: v for k, v in step.items() if k in ("outcome", "bits", "pair_frame", "outcome_pauli", "kind")}
    print(f"  {step['step']:<18} {extra}")
print(f"fidelity {t.fidelity:.15f}, {t.classical_bits} classical bits, {t.channel_qubits} qubits sent")

print("\nsuperdense coding")
for bits in ("00", "01", "10", "11"):
    s = superdense(bits)
    print(f"  sent {bits} -> decoded {s.decoded} using {s.channel_qubits} qubit")
