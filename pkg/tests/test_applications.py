import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qkrylov import applications as ap
from qkrylov.errors import DimensionMismatch, NoDominantGap, NotHermitian, PrecisionInsufficient, ZeroOverlap
from qkrylov.linalg import hermitian_with_spectrum, normalize


def brute_triangle(g):
    a = g.adjacency
    return any(a[i, j] and a[j, k] and a[i, k] for i, j, k in itertools.combinations(range(g.n), 3))


def brute_cycle(g, l):
    """Any simple l-cycle, by enumerating vertex sequences."""
    a = g.adjacency
    for combo in itertools.combinations(range(g.n), l):
        first = combo[0]
        for rest in itertools.permutations(combo[1:]):
            seq = (first,) + rest
            if all(a[seq[k], seq[(k + 1) % l]] for k in range(l)):
                return True
    return False


def is_simple_cycle(g, cyc, l):
    return (len(cyc) == l and len(set(cyc)) == l
            and all(g.adjacency[cyc[k], cyc[(k + 1) % l]] for k in range(l)))


def complete(n):
    return ap.Graph(np.ones((n, n), dtype=int) - np.eye(n, dtype=int))


def path(n):
    return ap.Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return ap.Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


# -- graphs -----------------------------------------------------------------------


def test_graph_validation():
    with pytest.raises(ValueError):
        ap.Graph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        ap.Graph(np.array([[1, 0], [0, 0]]))
    with pytest.raises(ValueError):
        ap.Graph(np.array([[0, 2], [2, 0]]))
    assert complete(4).sparsity == 3


def test_walk_counts_small_cases():
    k3 = complete(3)
    assert ap.walk_count(k3, 0, 1, 1, 1e-3) == 1
    assert ap.walk_count(k3, 0, 0, 1, 1e-3) == 0
    assert ap.walk_count(k3, 0, 0, 2, 1e-3) == 2
    assert [ap.walk_count(k3, i, i, 3, 1e-3) for i in range(3)] == [2, 2, 2]


def test_walk_counts_match_integer_powers():
    rng = np.random.default_rng(3)
    g = ap.Graph.random(8, 0.5, rng)
    A3 = np.linalg.matrix_power(g.adjacency, 3)
    eps = 0.4 / g.sparsity ** 3
    for i, j in [(0, 0), (0, 5), (2, 7), (4, 4), (6, 1)]:
        assert ap.walk_count(g, i, j, 3, eps, rng) == A3[i, j]


def test_walk_count_precision_checks():
    g = complete(5)
    with pytest.raises(PrecisionInsufficient):
        ap.walk_count(g, 0, 0, 3, 1e-2)
    with pytest.raises(ValueError):
        ap.walk_count(g, 0, 0, 0, 1e-3)


def test_cube_diagonal_counts_triangles_twice():
    rng = np.random.default_rng(5)
    for _ in range(5):
        g = ap.Graph.random(7, 0.5, rng)
        a = g.adjacency
        tri = [sum(a[i, j] and a[j, k] and a[i, k] for j, k in itertools.combinations(range(7), 2))
               for i in range(7)]
        eps = 0.4 / max(g.sparsity, 1) ** 3
        assert [ap.walk_count(g, i, i, 3, eps, rng) if g.sparsity else 0 for i in range(7)] == [2 * t for t in tri]


# -- triangle finding ---------------------------------------------------------------


def test_triangle_small_cases():
    assert ap.triangle_find(complete(3)) == (0, 1, 2)
    assert ap.triangle_find(path(4)) is None
    assert ap.triangle_find(cycle(5)) is None
    with pytest.raises(ValueError):
        ap.triangle_find(path(2))


def test_triangle_search_tightens_coarse_eps():
    res = ap.triangle_search(complete(6), eps=0.1)
    assert res.probe_eps == pytest.approx(0.4 / 5 ** 3)
    assert res.triangle is not None and res.probes == 1


def test_triangle_agrees_with_brute_force_on_graph_atlas():
    # every graph on up to seven vertices
    mismatches = 0
    for idx, G in enumerate(nx.graph_atlas_g()):
        if G.number_of_nodes() < 3:
            continue
        g = ap.Graph(nx.to_numpy_array(G, dtype=int))
        tri = ap.triangle_find(g, 1e-3, np.random.default_rng(idx))
        if tri is not None:
            i, j, k = tri
            assert g.adjacency[i, j] and g.adjacency[j, k] and g.adjacency[i, k]
        mismatches += (tri is not None) != brute_triangle(g)
    assert mismatches == 0


def test_triangle_agrees_with_brute_force_on_random_graphs():
    for p in (0.2, 0.5):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            g = ap.Graph.random(10, p, rng)
            assert (ap.triangle_find(g, 1e-3, rng) is not None) == brute_triangle(g)


# -- polygons --------------------------------------------------------------------------


def test_polygon_small_cases():
    assert is_simple_cycle(cycle(5), ap.find_polygon(cycle(5), 5, 1e-3), 5)
    tree = ap.Graph.from_edges(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)])
    for l in range(3, 7):
        assert ap.find_polygon(tree, l, 1e-5) is None
    with pytest.raises(ValueError):
        ap.find_polygon(cycle(4), 5)
    with pytest.raises(PrecisionInsufficient):
        ap.find_polygon(complete(6), 5, 1e-3)


def test_closed_walks_need_not_be_simple_cycles():
    # a triangle with a pendant edge has closed 4-walks everywhere but no 4-cycle
    g = ap.Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    res = ap.polygon_search(g, 4, 1e-3)
    assert res.closed_walk_vertices == [0, 1, 2, 3]
    assert res.cycle is None
    assert "simple cycle" in res.caveat


def test_closed_walk_detection_matches_integer_powers():
    rng = np.random.default_rng(11)
    for _ in range(6):
        g = ap.Graph.random(7, 0.4, rng)
        for l in (3, 4, 5):
            eps = 0.4 / max(g.sparsity, 1) ** l
            walks = ap.closed_walk_vertices(g, l, eps, rng)
            diag = np.diag(np.linalg.matrix_power(g.adjacency, l))
            assert walks == [i for i in range(7) if diag[i] > 0]


def test_polygon_agrees_with_cycle_enumeration():
    rng = np.random.default_rng(2)
    for _ in range(8):
        g = ap.Graph.random(7, 0.4, rng)
        for l in (3, 4, 5):
            eps = 0.4 / max(g.sparsity, 1) ** l
            cyc = ap.find_polygon(g, l, eps, rng)
            assert (cyc is not None) == brute_cycle(g, l)
            if cyc is not None:
                assert is_simple_cycle(g, cyc, l)


# -- matrix multiplication ----------------------------------------------------------------


def unit_norm_pair(rng, n=4):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return A / np.linalg.norm(A, 2), B / np.linalg.norm(B, 2)


def test_matmul_identity_and_diagonal():
    rng = np.random.default_rng(0)
    A, _ = unit_norm_pair(rng)
    assert np.abs(ap.matrix_multiply_quantum(A, np.eye(4), 0.02, rng) - A).max() <= 0.02
    d1, d2 = np.diag([0.9, -0.3, 0.5]), np.diag([0.2, 0.7, -1.0])
    assert np.abs(ap.matrix_multiply_quantum(d1, d2, 0.02, rng) - d1 @ d2).max() <= 0.02


def test_matmul_random_pairs():
    ok = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        A, B = unit_norm_pair(rng)
        ok += np.abs(ap.matrix_multiply_quantum(A, B, 0.02, rng) - A @ B).max() <= 0.02
    assert ok >= 19


def test_matmul_rectangular_and_mismatch():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(3, 2))
    B = rng.normal(size=(2, 4))
    A, B = A / np.linalg.norm(A, 2), B / np.linalg.norm(B, 2)
    assert np.abs(ap.matrix_multiply_quantum(A, B, 0.02, rng) - A @ B).max() <= 0.02
    with pytest.raises(DimensionMismatch):
        ap.matrix_multiply_quantum(A, A)


# -- shifted power iteration --------------------------------------------------------------


def test_power_iteration_diagonal_example():
    run = ap.power_iteration_shifted(np.diag([0.9, 0.1]), 2.0, 1e-3, b0=[1, 1])
    assert run.details["converged"]
    assert run.eigenvalue_estimate == pytest.approx(0.9, abs=1e-3)
    assert abs(run.eigenvector_estimate[0]) == pytest.approx(1.0, abs=1e-3)
    assert run.shifted_kappa == pytest.approx(2.9 / 2.1)


def test_power_iteration_negative_dominant_eigenvalue():
    run = ap.power_iteration_shifted(np.diag([-0.9, 0.2, 0.1]), 2.0, 1e-3, b0=[1, 1, 1])
    assert run.mu == -2.0
    assert run.eigenvalue_estimate == pytest.approx(-0.9, abs=1e-3)


def test_power_iteration_errors():
    with pytest.raises(NoDominantGap):
        ap.power_iteration_shifted(np.diag([0.5, -0.5]), 2.0)
    with pytest.raises(ZeroOverlap):
        ap.power_iteration_shifted(np.diag([0.9, 0.1]), 2.0, b0=[0, 1])
    with pytest.raises(NotHermitian):
        ap.power_iteration_shifted(np.array([[0.5, 1.0], [0.0, 0.2]]), 2.0)


def test_shifted_kappa_bound_example():
    assert ap.shifted_kappa_bound(3.0) == pytest.approx(2.0)
    assert ap.shifted_condition_number([-1, 1], 3.0) == pytest.approx(2.0)
    assert ap.shifted_condition_number([0.0, 0.5], 0.0) == math.inf


def test_shift_keeps_dominant_eigenvector():
    rng = np.random.default_rng(4)
    lam = np.concatenate([[0.8], rng.uniform(-0.6, 0.6, 7)])
    A = hermitian_with_spectrum(lam, rng)
    v = np.linalg.eigh(A)[1][:, np.argmax(np.abs(np.linalg.eigvalsh(A)))]
    for mu in (1.0, 2.0, 3.0):
        w = np.linalg.eigh(A + mu * np.eye(8))[1][:, -1]
        assert abs(np.vdot(v, w)) >= 1 - 1e-10


def test_iterate_matches_normalized_power_in_exact_mode():
    rng = np.random.default_rng(6)
    A = hermitian_with_spectrum(np.concatenate([[0.9], rng.uniform(-0.7, 0.7, 5)]), rng)
    run = ap.power_iteration_shifted(A, 2.0, 1e-4, eps_phase=0)
    assert run.details["exact_iterate_distance"] <= 1e-8


def test_gapped_instances_estimate_the_dominant_eigenvalue():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        A = hermitian_with_spectrum(np.concatenate([[0.9], rng.uniform(-0.7, 0.7, 15)]), rng)
        for mu in (2.0, 3.0):
            run = ap.power_iteration_shifted(A, mu, 1e-3, rng=rng)
            assert abs(run.eigenvalue_estimate - 0.9) <= 1e-3
            assert run.shifted_kappa <= ap.shifted_kappa_bound(mu) + 1e-9


def star_laplacian_instance(n=5):
    """Half the normalized Laplacian of a star: eigenvalues 0, 1/2 (n-2 times) and 1."""
    g = ap.Graph.from_edges(n, [(0, i) for i in range(1, n)])
    L = ap.normalized_laplacian(g) / 2
    vecs = np.linalg.eigh(L)[1]
    # start at 45 degrees between the dominant and the second eigenvector
    return L, (vecs[:, -1] + vecs[:, -2]) / math.sqrt(2)


@pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
def test_laplacian_converges_within_iteration_bound(eps):
    L, b0 = star_laplacian_instance()
    assert np.allclose(np.linalg.eigvalsh(L), [0, 0.5, 0.5, 0.5, 1.0])
    run = ap.power_iteration_shifted(L, 0.0, eps, b0=b0)
    assert run.details["converged"]
    assert run.eta <= ap.laplacian_iteration_bound(eps)
    assert run.eigenvalue_estimate == pytest.approx(1.0, abs=eps)


def test_normalized_laplacian_spectrum_lies_in_zero_two():
    rng = np.random.default_rng(8)
    for _ in range(5):
        g = ap.Graph.random(9, 0.4, rng)
        lam = np.linalg.eigvalsh(ap.normalized_laplacian(g))
        assert lam.min() >= -1e-10 and lam.max() <= 2 + 1e-10


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(2, 12), st.sampled_from([1.5, 2.0, 3.0, 5.0]))
def test_shifted_kappa_respects_bound(seed, n, mu):
    lam = np.random.default_rng(seed).uniform(-1, 1, n)
    assert ap.shifted_condition_number(lam, mu) <= ap.shifted_kappa_bound(mu) + 1e-9


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_walk_count_is_exact_when_precise(seed):
    rng = np.random.default_rng(seed)
    g = ap.Graph.random(6, 0.5, rng)
    l = int(rng.integers(1, 5))
    i, j = (int(v) for v in rng.integers(0, 6, 2))
    eps = 0.4 / max(g.sparsity, 1) ** l
    assert ap.walk_count(g, i, j, l, eps, rng) == np.linalg.matrix_power(g.adjacency, l)[i, j]
