"""
Linear combinations of quantum states
=====================================

Three ways to prepare a state proportional to sum_i alpha_i |v_i>:
postselection on an index register, select-prepare with a weighted
index state, and a binary tree of pairwise rotations that needs no
postselection at all. The first two succeed with a probability we can
write down; the third pays in repeated preparations instead.
"""

import numpy as np

from qkrylov import lcu
from qkrylov.linalg import apply_matrix_polynomial, hermitian_with_spectrum, normalize, phase_distance, random_state

rng = np.random.default_rng(1)

for l in (2, 4, 8):
    alpha = rng.standard_normal(l) + 1j * rng.standard_normal(l)
    spec = lcu.CombinationSpec(alpha, [random_state(8, rng) for _ in range(l)], target_eps=1e-3)
    post = lcu.combine_postselect(spec)
    sp = lcu.combine_select_prepare(spec)
    tree = lcu.combine_rotation_tree(spec, rng)
    print(f"l={l}: success postselect {post.success_probability:.3f} "
          f"(closed form {lcu.closed_form_postselect(spec):.3f}), "
          f"select-prepare {sp.success_probability:.3f}, "
          f"tree distance {phase_distance(tree.vector, post.vector):.1e}, tree queries {tree.query_count}")

# a matrix polynomial p(A)|x0> built from the power states A^k|x0>
A = hermitian_with_spectrum(rng.uniform(-1, 1, 8), rng)
x0 = random_state(8, rng)
coeffs = [0.5, -1.0, 0.7]
res = lcu.polynomial_state(coeffs, A, x0, 1e-3, rng)
print("p(A)|x0> distance to exact:",
      f"{phase_distance(res.vector, normalize(apply_matrix_polynomial(coeffs, A, x0))):.1e}")
