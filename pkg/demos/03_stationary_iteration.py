"""
Quantum stationary iteration
============================

x_{k+1} = A x_k + b unrolled into a state. Method I adds one flag qubit per
step and its success amplitude halves each time; method II pads the
operator into a larger block matrix; method III expands the iterate as a
single sum of powers and combines them at once. compare_methods tabulates
success probabilities and errors on an eta grid.
"""

import numpy as np

from qkrylov import stationary as sta
from qkrylov.linalg import hermitian_with_spectrum, random_state

rng = np.random.default_rng(2)
A = hermitian_with_spectrum(rng.uniform(-0.9, 0.9, 8), rng)
p = sta.StationaryProblem(A, random_state(8, rng), np.zeros(8), eta=4)
print("classical iterate norm:", f"{np.linalg.norm(sta.classical_stationary(p)):.4f}")

rep = sta.compare_methods(p, eps=1e-3, eta_grid=[1, 2, 4, 6])
for row in rep.rows:
    print(f"method {row['method']:>3} eta={row['eta']}: success {row['success_probability']:.3e}, "
          f"error {row['measured_error']:.1e} <= bound {row['predicted_bound']:.1e}")
