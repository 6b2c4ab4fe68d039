"""Arnoldi iteration: classical, direct quantum, and coefficient-recursion quantum.

Every basis vector is a polynomial in ``A`` applied to ``x0``,
``x_k = sum_l alpha_{kl} A^l x0``. The coefficient tables follow from the
Hessenberg entries alone, which is what allows the improved quantum
version to build ``x_{k+1}`` from the states ``A^l x0`` instead of from the
previous basis states.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import lcu, qsim
from .errors import (
    BreakdownDivision,
    DegenerateKrylov,
    NearlyAntiparallel,
    NearlyParallel,
    NotHermitian,
    SingularH,
    ZeroCombination,
)
from .linalg import (
    as_matrix,
    as_vector,
    is_hermitian,
    normalize,
    spectral_decompose,
)

DEFAULT_DELTA = 1e-4
KRYLOV_KAPPA_CAP = 1e10
MAX_M = 20


@dataclass
class KrylovData:
    """Basis ``x_0..x_c`` and Hessenberg table; ``c`` = number of completed columns.

    ``H`` is stored as an ``(m+1) x m`` array. Without breakdown all ``m``
    columns are filled and ``basis`` has ``m+1`` columns. If
    ``h_{k+1,k} <= delta`` at column ``k`` the run stops there: ``columns``
    is ``k+1``, ``basis`` has ``k+1`` columns, and ``H[:k+1, :k+1]`` is the
    restriction of ``A`` to an (approximately) invariant subspace.
    """

    basis: np.ndarray
    H: np.ndarray
    breakdown_step: int | None
    delta: float
    columns: int
    details: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.H.shape[1]

    def square(self) -> np.ndarray:
        c = self.columns
        return self.H[:c, :c]

    def hessenberg(self) -> np.ndarray:
        c = self.columns
        return self.H[: c + 1, :c]

    def to_dict(self) -> dict:
        return {"H": self.H, "breakdown_step": self.breakdown_step, "delta": self.delta,
                "columns": self.columns}


@dataclass
class PolynomialCoefficients:
    """``alpha[k, l]`` with ``x_k = sum_l alpha[k, l] A^l x0``; ``beta[k] = alpha[k] h_{k,k-1}``."""

    alpha: np.ndarray
    beta: np.ndarray
    delta: float


@dataclass
class RitzPair:
    value: complex
    vector: np.ndarray
    residual: float


def _check_start(A, x0, m):
    A = as_matrix(A)
    x0 = as_vector(x0)
    if A.shape[0] != A.shape[1] or A.shape[0] != x0.shape[0]:
        raise ValueError("A must be square and match x0")
    if abs(np.linalg.norm(x0) - 1) > 1e-10:
        raise ValueError("x0 must be a unit vector")
    if m < 1 or m > A.shape[0]:
        raise ValueError(f"m={m} must lie in [1, dim]")
    return A, x0


def classical_arnoldi(A, x0, m: int, delta: float = DEFAULT_DELTA) -> KrylovData:
    """Gram-Schmidt Arnoldi; stops when ``h_{k+1,k} <= delta``."""
    A, x0 = _check_start(A, x0, m)
    n = A.shape[0]
    X = np.zeros((n, m + 1), dtype=complex)
    H = np.zeros((m + 1, m), dtype=complex)
    X[:, 0] = x0
    breakdown = None
    for k in range(m):
        w = A @ X[:, k]
        h = X[:, : k + 1].conj().T @ w
        H[: k + 1, k] = h
        w = w - X[:, : k + 1] @ h
        hn = np.linalg.norm(w)
        H[k + 1, k] = hn
        if hn <= delta:
            breakdown = k
            break
        X[:, k + 1] = w / hn
    cols = m if breakdown is None else breakdown + 1
    nb = cols + 1 if breakdown is None else cols
    return KrylovData(basis=X[:, :nb], H=H, breakdown_step=breakdown, delta=delta, columns=cols)


def arnoldi_coefficients(H, delta: float = DEFAULT_DELTA, columns: int | None = None) -> PolynomialCoefficients:
    """Fill ``alpha`` and ``beta`` from Hessenberg columns ``0..columns-1``.

    ``beta_{k+1,l} = alpha_{k,l-1} - sum_{i=l}^{k} h_{ik} alpha_{il}`` and
    ``alpha_{k+1,l} = beta_{k+1,l} / h_{k+1,k}``, with ``alpha_{00} = 1``.
    """
    H = np.asarray(H, dtype=complex)
    c = H.shape[1] if columns is None else columns
    alpha = np.zeros((c + 1, c + 1), dtype=complex)
    beta = np.zeros((c + 1, c + 1), dtype=complex)
    alpha[0, 0] = 1.0
    beta[0, 0] = 1.0
    for k in range(c):
        sub = H[k + 1, k]
        if abs(sub) <= delta:
            raise BreakdownDivision(f"h[{k + 1},{k}] = {abs(sub):.3g} is below delta")
        b = np.zeros(c + 1, dtype=complex)
        b[1: k + 2] = alpha[k, : k + 1]
        b[: k + 1] -= H[: k + 1, k] @ alpha[: k + 1, : k + 1]
        beta[k + 1] = b
        alpha[k + 1] = b / sub
    return PolynomialCoefficients(alpha=alpha, beta=beta, delta=delta)


def beta_row(H, alpha: np.ndarray, k: int) -> np.ndarray:
    """``beta_{k+1, .}`` from Hessenberg column ``k`` and ``alpha`` rows ``0..k``."""
    b = np.zeros(k + 2, dtype=complex)
    b[1:] = alpha[k, : k + 1]
    b[: k + 1] -= np.asarray(H)[: k + 1, k] @ alpha[: k + 1, : k + 1]
    return b


def coefficient_bound(k: int, delta: float) -> float:
    """``(k+1)!/delta^{k+1}``, the growth bound on ``|beta_{k+1,l}|``."""
    return math.factorial(k + 1) / delta ** (k + 1)


# --------------------------------------------------------------------------
# quantum versions


def quantum_arnoldi_direct(A, x0, m: int, delta: float = DEFAULT_DELTA, eps: float = 1e-3,
                           rng: np.random.Generator | None = None,
                           qdelta: float = qsim.DEFAULT_DELTA) -> KrylovData:
    """Arnoldi where every basis state is built from the previous ones.

    ``h_ik`` comes from a swap test of ``|x_i, 0>`` against the flagged
    state of ``A x_k``; ``h_{k+1,k}^2 = ||A x_k||^2 - sum_i |h_ik|^2`` decides
    breakdown (threshold ``delta + eps``); ``x_{k+1}`` is the postselected
    combination of ``A x_k`` and ``x_0..x_k`` with coefficients
    ``(||A x_k||, -h_0k, ..., -h_kk)``, after which ``h_{k+1,k}`` is refined
    by one more swap test. Preparing ``x_{k+1}`` repeats the preparation of
    every earlier state, so the cost compounds from column to column.
    """
    A, x0 = _check_start(A, x0, m)
    rng = rng if rng is not None else np.random.default_rng(0)
    op = spectral_decompose(A) if is_hermitian(A) else A
    n = A.shape[0]
    counter = Counter()
    X = [x0]
    costs = [1]
    H = np.zeros((m + 1, m), dtype=complex)
    breakdown = None
    grid = 2 * (2 ** qsim.phase_grid_bits(eps / 2) - 1) if eps else 1
    for k in range(m):
        for i in range(k + 1):
            H[i, k] = qsim.inner_product_via_power(X[i], op, 1, X[k], eps, rng, qdelta, counter)
        st, Z = qsim.matrix_power_state(op, X[k], 1, eps / 2 if eps else 0.0, counter=counter)
        if eps:
            phi = np.concatenate([st.good, st.state.component(flag=1)])
            ax_norm = qsim.amplitude_estimate(phi, eps, qdelta, rng, counter)
        else:
            ax_norm = math.sqrt(Z)
        h2 = ax_norm ** 2 - float(np.sum(np.abs(H[: k + 1, k]) ** 2))
        h_est = math.sqrt(max(h2, 0.0))
        if h_est <= delta + eps:
            H[k + 1, k] = h_est
            breakdown = k
            break
        ax = st.good[:n]
        spec = lcu.CombinationSpec(
            np.concatenate([[ax_norm], -H[: k + 1, k]]),
            [normalize(ax)] + X[: k + 1],
            [costs[k] * grid] + costs[: k + 1], eps)
        res = lcu.combine_postselect(spec, counter)
        x_next = res.vector
        h_ref = qsim.inner_product_via_power(x_next, op, 1, X[k], eps, rng, qdelta, counter)
        H[k + 1, k] = abs(h_ref)
        # the sign convention h_{k+1,k} > 0 fixes the phase of x_{k+1}
        if abs(h_ref) > 0:
            x_next = x_next * (h_ref / abs(h_ref)).conjugate()
        X.append(x_next)
        costs.append(res.query_count)
    cols = m if breakdown is None else breakdown + 1
    return KrylovData(basis=np.column_stack(X), H=H, breakdown_step=breakdown, delta=delta,
                      columns=cols, details={"state_costs": costs, "counters": dict(counter)})


def _pm_pairs_for_powers(op, x0, degree, eps_phase, counter):
    """Flag-leading states ``|0>A^l x0 +- |1>(rest)`` for ``l = 1..degree`` (index 0 unused)."""
    x0_flag = np.concatenate([x0, np.zeros_like(x0)])
    plus, minus = [x0_flag], [x0_flag]
    for l in range(1, degree + 1):
        st, _ = qsim.matrix_power_state(op, x0, l, eps_phase, counter=counter)
        good, bad = st.good, st.state.component(flag=1)
        plus.append(np.concatenate([good, bad]))
        minus.append(np.concatenate([good, -bad]))
    return plus, minus


def _residual_norm(op, x, h_col, eps_phase, rng, qdelta, counter) -> float:
    """``sqrt(||A x||^2 - sum_i |h_i|^2)`` with ``||A x||`` from amplitude estimation."""
    st, Z = qsim.matrix_power_state(op, x, 1, eps_phase, counter=counter)
    if eps_phase:
        phi = np.concatenate([st.good, st.state.component(flag=1)])
        ax = qsim.amplitude_estimate(phi, eps_phase, qdelta, rng, counter)
    else:
        ax = math.sqrt(Z)
    return math.sqrt(max(ax * ax - float(np.sum(np.abs(h_col) ** 2)), 0.0))


def quantum_arnoldi_improved(A, x0, m: int, delta: float = DEFAULT_DELTA, eps: float = 1e-3,
                             rng: np.random.Generator | None = None, path: str = "postselect",
                             qdelta: float = qsim.DEFAULT_DELTA) -> KrylovData:
    """Arnoldi through the coefficient recursion and rotation-tree combinations.

    For column ``k``, ``h_ik`` is estimated by swap test; the coefficients
    ``beta_{k+1,l}`` then follow classically, and the rotation tree over
    ``beta_{k+1,l} A^l x0`` yields both ``x_{k+1}`` and its norm, which is
    ``h_{k+1,k}``. The power states ``A^l x0`` (with norm estimates) are
    prepared for each column at phase precision
    ``eps/(8 sum_l (l+1)|beta_{k+1,l}|)`` so that growing coefficients do not
    amplify their errors. ``path="pm-pairs"`` obtains the power states from
    +/- pairs of flagged states instead of from postselection.
    """
    A, x0 = _check_start(A, x0, m)
    if not is_hermitian(A):
        raise NotHermitian("powers A^l need a Hermitian operator")
    rng = rng if rng is not None else np.random.default_rng(0)
    sd = spectral_decompose(A)
    counter = Counter()
    if path not in ("postselect", "pm-pairs"):
        raise ValueError(f"unknown path {path!r}")
    base_phase = eps / (4 * m) if eps else 0.0
    leaf_cache = {}

    def leaves(degree, eps_phase):
        """Power states up to ``degree`` whose content errors scale with ``eps_phase``."""
        key = (degree, eps_phase)
        if key not in leaf_cache:
            if path == "postselect":
                st, nr, er = lcu.krylov_leaves(sd, x0, degree, eps_phase, rng, qdelta, counter)
                cs = [1 + l for l in range(degree + 1)]
            else:
                plus, minus = _pm_pairs_for_powers(sd, x0, degree, eps_phase, counter)
                st, nr, er, cs = [x0], [1.0], [0.0], [1]
                for l in range(1, degree + 1):
                    wl, sl, el, cl = lcu.pm_pair_leaves([plus[l]], [minus[l]], eps_phase, rng,
                                                        qdelta, counter)
                    st.append(sl[0])
                    nr.append(wl[0])
                    er.append(el[0] + l * eps_phase)
                    cs.append(cl[0] + l)
                nr, er = np.array(nr), np.array(er)
            leaf_cache[key] = (st, nr, er, cs)
        return leaf_cache[key]

    K = np.column_stack([x0] + [np.linalg.matrix_power(A, l) @ x0 for l in range(1, m + 1)])
    H = np.zeros((m + 1, m), dtype=complex)
    alpha = np.zeros((m + 1, m + 1), dtype=complex)
    alpha[0, 0] = 1.0
    X = [x0]
    breakdown = None
    tree_eps = eps / 4 if eps else 0.0
    # xi: prepared states vs classical basis; zeta: exact polynomials with estimated coefficients
    xi, zeta = [0.0], [0.0]
    hbound = np.zeros((m + 1, m))
    for k in range(m):
        for i in range(k + 1):
            H[i, k] = qsim.inner_product_via_power(X[i], sd, 1, X[k], eps, rng, qdelta, counter)
            hbound[i, k] = eps + xi[i] + xi[k]
        # ||A|| <= 1 bounds every |h_ik| by one
        omega = zeta[k] + sum(hbound[i, k] + zeta[i] for i in range(k + 1))
        b = beta_row(H, alpha, k)
        # leaf errors enter multiplied by |beta|, so the power states of this
        # column are prepared with precision shrinking as the coefficients grow
        scale = float(np.sum(np.abs(b) * (np.arange(k + 2) + 1)))
        eps_phase = min(base_phase, eps / (8 * scale)) if eps else 0.0
        states, norms, errs, leaf_costs = leaves(k + 1, eps_phase)
        weights = b * norms[: k + 2]
        leaf_err = np.abs(b) * np.asarray(errs)[: k + 2]
        try:
            res = lcu.tree_from_leaves(list(weights), states[: k + 2], list(leaf_err),
                                       leaf_costs[: k + 2], tree_eps, rng, qdelta, counter)
            h_est = res.norm_estimate
        except (ZeroCombination, NearlyParallel, NearlyAntiparallel):
            # the combination cancels; Pythagoras on ||A x_k|| tells a true
            # breakdown apart from power states too dependent to combine
            res, h_est = None, _residual_norm(sd, X[k], H[: k + 1, k], base_phase, rng, qdelta, counter)
            if h_est > delta + eps:
                raise DegenerateKrylov(f"power states are numerically dependent at step {k + 1}")
        nu = res.norm_error if res is not None else 0.0
        hbound[k + 1, k] = omega + nu
        if h_est <= delta + eps:
            H[k + 1, k] = h_est
            breakdown = k
            break
        s = np.linalg.svd(K[:, : k + 2], compute_uv=False)
        if s[-1] <= s[0] / KRYLOV_KAPPA_CAP:
            raise DegenerateKrylov(f"Krylov matrix condition number exceeds {KRYLOV_KAPPA_CAP:g} at step {k + 1}")
        H[k + 1, k] = h_est
        alpha[k + 1, : k + 2] = b / h_est
        X.append(res.vector)
        zeta.append((2 * omega + nu) / h_est)
        lower = h_est - omega - nu
        xi.append(res.achieved_error + (2 * omega / lower if lower > 0 else 2.0))
    cols = m if breakdown is None else breakdown + 1
    return KrylovData(basis=np.column_stack(X), H=H, breakdown_step=breakdown, delta=delta,
                      columns=cols, details={"alpha": alpha, "counters": dict(counter),
                                             "h_error_bound": hbound, "state_error_bound": xi,
                                             "query_count": int(sum(counter.values()))})


# --------------------------------------------------------------------------
# uses of the Krylov data


def ritz_pairs(kd: KrylovData) -> list[RitzPair]:
    """Eigenpairs of the square Hessenberg part mapped back through the basis.

    The residual is ``|h_{c,c-1} u_{c-1}|`` where ``c`` is the column count.
    """
    Hm = kd.square()
    c = kd.columns
    vals, vecs = np.linalg.eig(Hm)
    order = np.argsort(-vals.real)
    sub = abs(kd.H[c, c - 1]) if c < kd.H.shape[0] else 0.0
    pairs = []
    for j in order:
        u = vecs[:, j]
        pairs.append(RitzPair(value=complex(vals[j]), vector=kd.basis[:, :c] @ u,
                              residual=float(sub * abs(u[-1]))))
    return pairs


def solve_via_projection(A, b, m: int, delta: float = DEFAULT_DELTA, eps: float = 1e-3,
                         rng: np.random.Generator | None = None, method: str = "improved"):
    """Projected solve ``H y = X^dagger b`` over the Krylov space of ``b``.

    Returns ``(y, state, info)``; ``state`` approximates ``X y/||X y||`` and
    ``info`` reports the residual of the full system for the rescaled state.
    """
    b = as_vector(b)
    bn = np.linalg.norm(b)
    x0 = b / bn
    rng = rng if rng is not None else np.random.default_rng(0)
    runner = {"improved": quantum_arnoldi_improved, "direct": quantum_arnoldi_direct,
              "classical": None}[method]
    if runner is None:
        kd = classical_arnoldi(A, x0, m, delta)
    else:
        kd = runner(A, x0, m, delta, eps, rng)
    c = kd.columns
    basis = kd.basis[:, :c]
    rhs = np.array([qsim.swap_test_inner(basis[:, j], x0, eps, rng) for j in range(c)]) * bn
    Hm = kd.square()
    sv = np.linalg.svd(Hm, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], np.abs(kd.H).max()):
        raise SingularH("projected matrix is numerically singular")
    y = np.linalg.solve(Hm, rhs)
    spec = lcu.CombinationSpec(y, [basis[:, j] for j in range(c)], target_eps=eps or 1e-3)
    res = lcu.combine_rotation_tree(spec, rng, eps=eps)
    x_hat = res.norm_estimate * res.vector
    A = as_matrix(A)
    residual = float(np.linalg.norm(A @ x_hat - b) / bn)
    info = {"columns": c, "breakdown_step": kd.breakdown_step, "relative_residual": residual,
            "state_error_bound": res.achieved_error, "krylov": kd}
    return y, res.state, info
