"""Acceptance suite: one test per criterion, each with its tolerance and time limit.

Every test measures the quantity against a classical oracle, records a
PASS/FAIL line (shown in the pytest terminal summary) and then asserts.
"""

import itertools
import math
import time

import networkx as nx
import numpy as np

from qkrylov import applications as ap
from qkrylov import arnoldi as ar
from qkrylov import cg, cli, lcu, qsim
from qkrylov import stationary as sta
from qkrylov.linalg import apply_matrix_polynomial, hermitian_with_spectrum, normalize, phase_distance, random_state


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def finish(criterion, number, title, ok, detail, timer, limit):
    criterion(number, title, ok, detail, timer.elapsed, limit)
    assert ok, detail
    assert timer.elapsed < limit, f"took {timer.elapsed:.1f}s, limit {limit}s"


def test_swap_test_accuracy(criterion):
    with Timer() as t:
        hits = 0
        for k in range(200):
            rng = np.random.default_rng(k)
            x, y = random_state(16, rng), random_state(16, rng)
            hits += abs(qsim.swap_test_inner(x, y, 0.01, rng) - np.vdot(x, y)) <= 0.015
    finish(criterion, 1, "swap-test accuracy", hits >= 190, f"{hits}/200 within 0.015", t, 30)


def test_matrix_power_error_bound(criterion):
    with Timer() as t:
        worst = 0.0
        for k in range(50):
            rng = np.random.default_rng(100 + k)
            n, l = int(rng.integers(2, 33)), int(rng.integers(1, 5))
            A = hermitian_with_spectrum(rng.uniform(-1, 1, n), rng)
            y = random_state(n, rng)
            exact = np.linalg.matrix_power(A, l) @ y
            for bits in (8, 12, 16):
                eps = 2.0 ** -bits
                st_, _ = qsim.matrix_power_state(A, y, l, eps)
                worst = max(worst, np.linalg.norm(exact - st_.good) / (l * eps))
    finish(criterion, 2, "matrix-power error <= l*eps_phase", worst <= 1,
           f"max deviation / (l eps) = {worst:.3f} over 150 runs", t, 60)


def test_normalized_state_bound(criterion):
    with Timer() as t:
        worst, runs = 0.0, 0
        for k in range(60):
            rng = np.random.default_rng(200 + k)
            n, l = int(rng.integers(2, 17)), int(rng.integers(1, 4))
            kappa = float(rng.choice([1.25, 1.5, 2.0, 3.0]))
            lam = rng.uniform(1 / kappa, 1, n) * rng.choice([-1, 1], n)
            lam[0], lam[-1] = 1 / kappa, 1.0
            A = hermitian_with_spectrum(lam, rng)
            y = random_state(n, rng)
            exact = normalize(np.linalg.matrix_power(A, l) @ y)
            for bits in (8, 12, 16, 20, 24):
                eps = 2.0 ** -bits
                if l * kappa ** (3 * l) * eps >= 0.1:
                    continue
                st_, _ = qsim.matrix_power_state(A, y, l, eps, kappa=kappa)
                err = np.linalg.norm(exact - st_.postselected().amplitudes) ** 2
                worst = max(worst, err / (25 * l ** 2 * kappa ** (6 * l) * eps ** 2))
                runs += 1
    finish(criterion, 3, "normalized-state bound 25 l^2 kappa^6l eps^2", worst <= 1 and runs >= 100,
           f"max error / bound = {worst:.2e} over {runs} runs", t, 60)


def test_lcu_scheme_agreement(criterion):
    with Timer() as t:
        worst_pair, worst_closed = 0.0, 0.0
        for k in range(50):
            rng = np.random.default_rng(300 + k)
            l, n = int(rng.integers(1, 9)), int(rng.integers(2, 17))
            alpha = rng.standard_normal(l) + 1j * rng.standard_normal(l)
            spec = lcu.CombinationSpec(alpha, [random_state(n, rng) for _ in range(l)], target_eps=1e-3)
            post, sp = lcu.combine_postselect(spec), lcu.combine_select_prepare(spec)
            tree = lcu.combine_rotation_tree(spec, rng)
            for x, y in [(post, sp), (post, tree), (sp, tree)]:
                worst_pair = max(worst_pair, phase_distance(x.vector, y.vector) / (2 * 1e-3))
            v2 = np.linalg.norm(spec.target()) ** 2
            a = np.abs(alpha)
            worst_closed = max(worst_closed, abs(post.success_probability - v2 / (a.max() ** 2 * l ** 2)),
                               abs(sp.success_probability - v2 / a.sum() ** 2))
    ok = worst_pair <= 1 and worst_closed <= 1e-10
    finish(criterion, 4, "LCU scheme agreement and closed forms", ok,
           f"max pair distance / 2eps = {worst_pair:.3f}, closed-form error {worst_closed:.1e}", t, 60)


def test_stationary_amplitude_and_fidelity(criterion):
    with Timer() as t:
        worst_amp, worst_fid = 0.0, 0.0
        for k in range(10):
            rng = np.random.default_rng(400 + k)
            n = int(rng.integers(2, 9))
            A = hermitian_with_spectrum(rng.uniform(-0.9, 0.9, n), rng)
            b, x0 = random_state(n, rng), random_state(n, rng)
            for eta in range(9):
                p = sta.StationaryProblem(A, b, x0, eta)
                x = sta.classical_stationary(p)
                expected = np.linalg.norm(x) / math.sqrt(2 ** (eta + 1) + 2 ** eta - 2)
                worst_amp = max(worst_amp, abs(sta.iterate_method1(p, 0).target_amplitude - expected))
                for fn in sta.METHODS.values():
                    worst_fid = max(worst_fid, 1 - sta.fidelity(fn(p, 0).vector, x))
    ok = worst_amp <= 1e-10 and worst_fid <= 1e-8
    finish(criterion, 5, "stationary amplitude formula and exact fidelity", ok,
           f"amplitude error {worst_amp:.1e}, fidelity loss {worst_fid:.1e}", t, 60)


def test_arnoldi_polynomial_identity(criterion):
    with Timer() as t:
        worst, bound_ok = 0.0, True
        for k in range(20):
            rng = np.random.default_rng(500 + k)
            n = int(rng.integers(8, 33))
            m = int(rng.integers(1, 9))
            if k % 2:
                A = hermitian_with_spectrum(rng.uniform(-1, 1, n), rng)
            else:
                M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                A = M / np.linalg.norm(M, 2)
            x0 = random_state(n, rng)
            kd = ar.classical_arnoldi(A, x0, m)
            pc = ar.arnoldi_coefficients(kd.H, kd.delta, kd.basis.shape[1] - 1)
            for j in range(kd.basis.shape[1]):
                v = normalize(apply_matrix_polynomial(pc.alpha[j, : j + 1], A, x0))
                worst = max(worst, phase_distance(v, kd.basis[:, j]))
            for j in range(pc.beta.shape[0] - 1):
                bound_ok &= bool(np.abs(pc.beta[j + 1]).max() <= ar.coefficient_bound(j, kd.delta))
    finish(criterion, 6, "Arnoldi polynomial identity and coefficient bound", worst <= 1e-8 and bound_ok,
           f"max basis distance {worst:.1e}, bound holds: {bound_ok}", t, 60)


def test_quantum_arnoldi_fidelity(criterion):
    with Timer() as t:
        exact_err, budget_err = 0.0, 0.0
        for k in range(10):
            rng = np.random.default_rng(600 + k)
            A = hermitian_with_spectrum(rng.uniform(-1, 1, 16), rng)
            x0 = random_state(16, rng)
            ref = ar.classical_arnoldi(A, x0, 5).H
            exact_err = max(exact_err, np.abs(ar.quantum_arnoldi_improved(A, x0, 5, eps=0).H - ref).max())
            kd = ar.quantum_arnoldi_improved(A, x0, 5, eps=1e-3, rng=rng)
            budget_err = max(budget_err, np.abs(kd.H - ref).max())
        rng = np.random.default_rng(650)
        A = hermitian_with_spectrum(np.concatenate([[0.95], rng.uniform(-0.5, 0.5, 63)]), rng)
        lam_max = np.linalg.eigvalsh(A).max()
        kd = ar.quantum_arnoldi_improved(A, random_state(64, rng), 6, eps=1e-3, rng=rng)
        ritz_err = abs(ar.ritz_pairs(kd)[0].value.real - lam_max)
    ok = exact_err <= 1e-6 and budget_err <= 5e-3 and ritz_err <= 1e-3
    finish(criterion, 7, "quantum Arnoldi H fidelity and top Ritz value", ok,
           f"exact {exact_err:.1e}, eps=1e-3 {budget_err:.1e}, Ritz {ritz_err:.1e}", t, 120)


def test_cg_coefficient_identity_and_growth(criterion):
    with Timer() as t:
        worst_vec, worst_growth, max_ratio, checked = 0.0, 0.0, 0.0, 0
        for k in range(20):
            rng = np.random.default_rng(700 + k)
            n = int(rng.integers(2, 9))
            A = hermitian_with_spectrum(rng.uniform(0.2, 1, n), rng, real=True)
            b = random_state(n, rng, real=True)
            tr = cg.classical_cg(A, b, n)
            for name in ("x", "r", "p"):
                table, vecs = getattr(tr, name), tr.vectors[name]
                for j in range(tr.stop_step + 1):
                    worst_vec = max(worst_vec, np.abs(apply_matrix_polynomial(table[j], A, b) - vecs[j]).max())
            for delta in (0.5, 0.6, 0.8):
                tr = cg.classical_cg(A, b, n, delta=delta)
                if not (np.all(tr.alpha <= delta ** -3) and cg.bound_hypothesis_holds(tr)):
                    continue
                g, mx = cg.coefficient_growth_bounds(delta, tr.stop_step), cg.coefficient_maxima(tr)
                max_ratio = max(max_ratio, (mx["r"] / g.R).max(), (mx["p"] / g.P).max(),
                                (mx["x"][1:] / g.X[1:]).max() if len(g.X) > 1 else 0.0)
                checked += 1
        for delta in (1.0, 0.5, 0.1, 0.01, 0.001):
            g = cg.coefficient_growth_bounds(delta, 30)
            for closed, rec in [(g.R, g.R_recurrence), (g.P, g.P_recurrence), (g.X[1:], g.X_recurrence[1:])]:
                worst_growth = max(worst_growth, (np.abs(closed - rec) / np.abs(rec)).max())
    ok = worst_vec <= 1e-8 and worst_growth <= 1e-9 and max_ratio <= 1 + 1e-12 and checked > 0
    finish(criterion, 8, "CG coefficient identity and growth bounds", ok,
           f"vector error {worst_vec:.1e}, closed form rel {worst_growth:.1e}, "
           f"max coefficient / bound {max_ratio:.3f} on {checked} traces", t, 60)


def test_lanczos_extremes(criterion):
    with Timer() as t:
        full_err, outside = 0.0, 0.0
        for k in range(10):
            rng = np.random.default_rng(800 + k)
            n = int(rng.integers(3, 11))
            lam = np.sort(rng.uniform(0.1, 1, n))
            A = hermitian_with_spectrum(lam, rng, real=True)
            tr = cg.classical_cg(A, random_state(n, rng, real=True), n, delta=1e-12)
            if tr.stop_step == n:
                full_err = max(full_err, np.abs(cg.lanczos_tridiagonal(tr).eigenvalues() - lam).max())
            for m in range(1, tr.stop_step + 1):
                sub = cg.CGTrace(tr.alpha[:m], tr.beta[:m], None, None, None, m, tr.delta)
                ev = cg.lanczos_tridiagonal(sub).eigenvalues()
                outside = max(outside, lam[0] - ev.min(), ev.max() - lam[-1])
    ok = full_err <= 1e-6 and outside <= 1e-8
    finish(criterion, 9, "Lanczos T_m spectrum and interlacing", ok,
           f"full-rank error {full_err:.1e}, worst excursion {max(outside, 0):.1e}", t, 60)


def brute_triangle(a):
    return any(a[i, j] and a[j, k] and a[i, k] for i, j, k in itertools.combinations(range(len(a)), 3))


def test_triangle_finding(criterion):
    with Timer() as t:
        mismatches, total = 0, 0
        for idx, G in enumerate(nx.graph_atlas_g()):
            if G.number_of_nodes() > 6:
                break
            a = nx.to_numpy_array(G, dtype=int)
            found = ap.triangle_find(ap.Graph(a), 1e-3, np.random.default_rng(idx)) if len(a) >= 3 else None
            mismatches += (found is not None) != brute_triangle(a)
            total += 1
        for p in (0.2, 0.5):
            for seed in range(100):
                rng = np.random.default_rng(seed)
                g = ap.Graph.random(10, p, rng)
                mismatches += (ap.triangle_find(g, 1e-3, rng) is not None) != brute_triangle(g.adjacency)
                total += 1
    finish(criterion, 10, "triangle finding vs brute force", mismatches == 0,
           f"{mismatches} mismatches on {total} graphs", t, 120)


def test_shifted_power_iteration(criterion):
    with Timer() as t:
        kappa_ok, worst = True, 0.0
        for k in range(10):
            rng = np.random.default_rng(900 + k)
            lam = rng.uniform(-1, 1, 16)
            for mu in (2.0, 3.0):
                kappa_ok &= ap.shifted_condition_number(lam, mu) <= ap.shifted_kappa_bound(mu) + 1e-9
            A = hermitian_with_spectrum(np.concatenate([[0.9], rng.uniform(-0.7, 0.7, 15)]), rng)
            for mu in (2.0, 3.0):
                run = ap.power_iteration_shifted(A, mu, 1e-3, rng=rng)
                kappa_ok &= run.shifted_kappa <= ap.shifted_kappa_bound(mu) + 1e-9
                worst = max(worst, abs(run.eigenvalue_estimate - 0.9))
        # half the normalized Laplacian of a star: eigenvalues 0, 1/2, 1; start 45 degrees off
        g = ap.Graph.from_edges(6, [(0, i) for i in range(1, 6)])
        L = ap.normalized_laplacian(g) / 2
        vecs = np.linalg.eigh(L)[1]
        run = ap.power_iteration_shifted(L, 0.0, 1e-3, b0=(vecs[:, -1] + vecs[:, -2]) / math.sqrt(2))
        eta_ok = run.details["converged"] and run.eta <= ap.laplacian_iteration_bound(1e-3)
    ok = bool(kappa_ok) and worst <= 1e-3 and eta_ok
    finish(criterion, 11, "shifted power iteration", ok,
           f"kappa bound holds: {bool(kappa_ok)}, eigenvalue error {worst:.1e}, "
           f"Laplacian eta {run.eta} <= {ap.laplacian_iteration_bound(1e-3)}", t, 60)


def test_determinism(criterion, tmp_path):
    with Timer() as t:
        same = {}
        for command in cli.EXPERIMENTS:
            blobs = []
            for name in ("a", "b"):
                out = tmp_path / command / name
                assert cli.main([command, "--seed", "20240611", "--out", str(out)]) == 0
                blobs.append((out / "report.json").read_bytes())
            same[command] = blobs[0] == blobs[1]
    ok = all(same.values())
    finish(criterion, 12, "byte-identical reports for a repeated seed", ok,
           f"{sum(same.values())}/{len(same)} commands identical", t, 30)
