"""
Quantum conjugate gradient
==========================

CG iterates are polynomials in A applied to b. The scalars alpha_k, beta_k
only need the moments <b|A^j|b>, which a quantum device can estimate; the
final state |x_m> is then one linear combination of power states. The
Lanczos matrix T_m built from the same scalars gives extreme eigenvalues
and a condition-number estimate for free.
"""

from pathlib import Path

import numpy as np

from qkrylov import cg, io

A = io.read_matrix(Path(__file__).resolve().parents[1] / "data" / "spd16.mtx")
b = np.ones(16) / 4

for m in (1, 3, 5, 8):
    state, rep = cg.quantum_cg(A, b, m, eps=1e-3)
    row = rep.rows[-1]
    print(f"m={m}: fidelity to classical x_m {row['fidelity']:.8f}, "
          f"error {row['measured_error']:.1e} <= {row['predicted_bound']:.1e}")

lo, hi, kappa = cg.extreme_eigenvalues(cg.lanczos_tridiagonal(cg.classical_cg(A, b, 8)))
lam = np.linalg.eigvalsh(A)
print(f"Lanczos extremes [{lo:.4f}, {hi:.4f}] vs true [{lam.min():.4f}, {lam.max():.4f}], kappa ~ {kappa:.2f}")
