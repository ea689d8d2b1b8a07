"""Entropies of a Bell pair and of a thermal spin dimer.

A maximally entangled pair has a pure joint state yet maximally mixed halves,
so its conditional entropy goes negative. A Heisenberg dimer interpolates
between that situation (cold) and two independent random spins (hot).
"""
import numpy as np

from rqit import (
    DimerParams,
    bell_state,
    conditional_amplitude_spectrum,
    conditional_vn,
    dimer_mutual_entropy,
    mutual_vn,
    partial_trace,
    pure_density,
    von_neumann_entropy,
)

rho = pure_density(bell_state())
print("singlet, in bits")
print(f"  S(AB)  = {von_neumann_entropy(rho):+.3f}")
print(f"  S(A)   = {von_neumann_entropy(partial_trace(rho, 0)):+.3f}")
print(f"  S(A:B) = {mutual_vn(rho):+.3f}")
print(f"  S(A|B) = {conditional_vn(rho):+.3f}")
# a classical conditional probability never exceeds one; this operator's spectrum does
print(f"  conditional-amplitude spectrum: {np.round(conditional_amplitude_spectrum(rho), 3)}")

print("\nHeisenberg dimer, J = 1: shared entropy against inverse temperature")
for beta in (0.0, 0.5, 1.0, 2.0, 5.0, 50.0):
    print(f"  beta = {beta:5.1f}   S(1:2) = {dimer_mutual_entropy(DimerParams(1.0, beta)):.6f} bits")
