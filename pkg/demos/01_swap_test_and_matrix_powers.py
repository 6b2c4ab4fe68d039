"""
Inner products and matrix powers as quantum states
==================================================

The swap test estimates <x|y> from copies of the two states, and a flagged
state whose good part is A^l|y> lets us read off <x|A^l|y> the same way.
Everything here is simulated at the level of spectra and amplitudes, so we
can compare with exact numpy arithmetic line by line.
"""

import numpy as np

from qkrylov import qsim
from qkrylov.linalg import hermitian_with_spectrum, random_state

rng = np.random.default_rng(0)

# two random 16-dimensional states and their exact overlap
x, y = random_state(16, rng), random_state(16, rng)
exact = np.vdot(x, y)
est = qsim.swap_test_inner(x, y, 0.01, rng)
print(f"<x|y> exact {exact:.4f}, swap test {est:.4f}, error {abs(est - exact):.1e}")

# a Hermitian matrix with spectrum inside [-1, 1]
A = hermitian_with_spectrum(rng.uniform(-1, 1, 16), rng)

# the flagged state sqrt(Z)|psi> approximates A^l|y>; its error grows like l * eps_phase
for l in (1, 2, 4):
    for eps_phase in (2.0 ** -8, 2.0 ** -16):
        state, Z = qsim.matrix_power_state(A, y, l, eps_phase)
        dev = np.linalg.norm(np.linalg.matrix_power(A, l) @ y - state.good)
        print(f"l={l} eps_phase=2^{int(np.log2(eps_phase))}: deviation {dev:.2e} "
              f"(bound {l * eps_phase:.2e}), success probability {Z:.3f}")

# <x|A^3|y> through one power state and one swap test
val = qsim.inner_product_via_power(x, A, 3, y, 0.01, rng)
print(f"<x|A^3|y> exact {np.vdot(x, np.linalg.matrix_power(A, 3) @ y):.4f}, estimate {val:.4f}")
