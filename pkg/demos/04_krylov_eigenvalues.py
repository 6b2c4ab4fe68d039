"""
Quantum Arnoldi and Ritz values
===============================

The improved quantum Arnoldi method never stores basis vectors: each x_k is
a known polynomial in A applied to x0, so it is prepared from the power
states A^l|x0> and the Hessenberg entries h_ik = <x_i|A|x_k> come from
swap tests. The top Ritz value of H approximates the largest eigenvalue.
"""

import numpy as np

from qkrylov import arnoldi as ar
from qkrylov.linalg import hermitian_with_spectrum, random_state

rng = np.random.default_rng(3)
A = hermitian_with_spectrum(np.concatenate([[0.95], rng.uniform(-0.5, 0.5, 63)]), rng)
x0 = random_state(64, rng)

classical = ar.classical_arnoldi(A, x0, 6)
quantum = ar.quantum_arnoldi_improved(A, x0, 6, eps=1e-3, rng=rng)
print("max |H_quantum - H_classical|:", f"{np.abs(quantum.H - classical.H).max():.1e}")
print("query count:", quantum.details["query_count"])

for m in range(1, 7):
    kd = ar.classical_arnoldi(A, x0, m)
    top = ar.ritz_pairs(kd)[0]
    print(f"m={m}: top Ritz value {top.value.real:.6f} (true 0.95), residual {top.residual:.1e}")
