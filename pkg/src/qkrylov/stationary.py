"""Quantum realizations of the stationary iteration ``x -> A x + b``.

Three constructions are compared:

* method I applies ``A`` with a matrix-function state and then merges in
  ``|b>`` by a two-term combination, once per step; the flagged amplitude
  shrinks by roughly ``1/sqrt(2)`` every step;
* method II stacks ``(x0, b, ..., b)`` and applies the wide block operator
  ``[A, I]`` (identity on the remaining blocks) through a Hermitian dilation;
* method III prepares every power ``A^k b`` and ``A^eta x0`` separately and
  combines them with uniform weights.

``eps`` is the phase-grid precision of each matrix application; ``eps=0``
gives exact arithmetic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .errors import AssumptionViolated, NotHermitian, PaddingOverflow, ZeroSolution
from .lcu import CombinationSpec, combine_postselect
from .linalg import as_matrix, as_vector, is_hermitian
from .report import ExperimentReport

DEFAULT_ETA_CAP = 12
DEFAULT_PADDED_CAP = 8192
ZERO_TOL = 1e-12


@dataclass
class StationaryProblem:
    """Hermitian ``A`` with spectral radius below one, unit ``b``, unit or zero ``x0``."""

    A: np.ndarray
    b: np.ndarray
    x0: np.ndarray
    eta: int

    def __post_init__(self):
        self.A = as_matrix(self.A)
        self.b = as_vector(self.b)
        self.x0 = as_vector(self.x0)
        if not is_hermitian(self.A):
            raise NotHermitian("the iteration matrix must be Hermitian")
        n = self.A.shape[0]
        if self.b.shape[0] != n or self.x0.shape[0] != n:
            raise ValueError("A, b and x0 dimensions disagree")
        rho = float(np.max(np.abs(np.linalg.eigvalsh(self.A)))) if n else 0.0
        if rho >= 1 - 1e-10:
            raise AssumptionViolated(f"spectral radius {rho:.6g} is not below 1")
        if abs(np.linalg.norm(self.b) - 1) > 1e-10:
            raise ValueError("b must be a unit vector")
        nx = np.linalg.norm(self.x0)
        if nx > 0 and abs(nx - 1) > 1e-10:
            raise ValueError("x0 must be a unit vector or zero")
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvalsh(self.A))))


@dataclass
class IterationOutcome:
    final_state: qsim.QState
    target_amplitude: float
    success_probability: float
    error_bound: float
    method_tag: str
    query_count: int
    details: dict = field(default_factory=dict)

    @property
    def vector(self) -> np.ndarray:
        return self.final_state.amplitudes


def classical_stationary(p: StationaryProblem) -> np.ndarray:
    """``A^eta x0 + sum_{k<eta} A^k b`` by direct recursion."""
    x = p.x0.copy()
    for _ in range(p.eta):
        x = p.A @ x + p.b
    return x


def method1_amplitude(eta: int) -> float:
    """``alpha_eta = 1/sqrt(2^{eta+1} + 2^eta - 2)``."""
    return 1.0 / math.sqrt(2 ** (eta + 1) + 2 ** eta - 2)


def method1_amplitude_recursive(eta: int) -> float:
    a = 1.0
    for _ in range(eta):
        a = a / math.sqrt(2 * (1 + a * a))
    return a


def inverse_square_sequence(n: int) -> list[int]:
    """``beta_k = alpha_k^{-2}`` from ``beta_{k+1} = 2 beta_k + 2``, ``beta_0 = 1`` (exact integers)."""
    seq = [1]
    for _ in range(n):
        seq.append(2 * seq[-1] + 2)
    return seq


def predicted_complexity(method: str, eta: int, x_norm: float, eps: float) -> float:
    """Leading complexity expressions of the three methods, constants dropped."""
    eps = eps or 1.0
    base = {"I": eta ** 2 * math.sqrt(2 ** eta), "II": eta ** 2, "III": eta ** 3}[method]
    return base / (x_norm ** 2 * eps)


def _grid_queries(eps: float) -> int:
    return 2 * (2 ** qsim.phase_grid_bits(eps) - 1) if eps else 1


def _normalized_error(err: float, approx_norm: float) -> float:
    lower = approx_norm - err
    if lower <= 0:
        return 2.0
    return min(2.0, 2 * err / lower)


def _apply_rounded(A, v: np.ndarray, eps: float, counter: Counter) -> np.ndarray:
    """``A~ v`` for the phase-rounded operator; handles the zero vector."""
    nv = np.linalg.norm(v)
    if nv < ZERO_TOL:
        return np.zeros(v.shape[0] if is_hermitian(A) else np.asarray(A).shape[0], dtype=complex)
    st = qsim.matrix_function_state(A, v / nv, lambda x: x, eps, C=1.0, counter=counter)
    good = st.good
    if st.state.tags.get("dilated"):
        good = good[: np.asarray(A).shape[0]]
    return nv * good


def iterate_method1(p: StationaryProblem, eps: float) -> IterationOutcome:
    """Repeated ``A``-application and two-term merging with ``|b>``.

    The flagged component after step ``k`` is ``alpha_k x~^(k)``; merging
    prepares ``(|0>psi_k + alpha_k |1>|0,b>)/sqrt(1 + alpha_k^2)`` and a
    Hadamard on the new qubit, so ``alpha_{k+1} = alpha_k/sqrt(2(1 + alpha_k^2))``.
    Garbage branches are merged into a single flag after each step.
    """
    counter = Counter()
    alpha = 1.0
    good = p.x0.astype(complex).copy()  # = alpha_k * x~^(k)
    x_tilde = p.x0.astype(complex).copy()
    err = 0.0
    for _ in range(p.eta):
        ax = _apply_rounded(p.A, good, eps, counter)
        counter["state_prep"] += 1
        scale = 1.0 / math.sqrt(2 * (1 + alpha * alpha))
        good = (ax + alpha * p.b) * scale
        err = err + eps / 2 * np.linalg.norm(x_tilde) if eps else 0.0
        alpha = alpha * scale
        x_tilde = good / alpha
    amp = float(np.linalg.norm(good))
    if amp < ZERO_TOL:
        raise ZeroSolution("the iterate vanishes")
    x_norm = float(np.linalg.norm(x_tilde))
    first_order_bound = p.eta * eps / x_norm
    bound = _normalized_error(err, x_norm) if eps else 0.0
    chain = p.eta * _grid_queries(eps) + p.eta + 1
    q = int(math.ceil(1 / amp)) * chain
    return IterationOutcome(
        final_state=qsim.QState.from_vector(good), target_amplitude=amp,
        success_probability=amp ** 2, error_bound=bound, method_tag="I", query_count=q,
        details={"alpha": alpha, "first_order_bound": first_order_bound, "iterate_norm": x_norm,
                 "counters": dict(counter)})


def _block_operator(A: np.ndarray, blocks: int) -> np.ndarray:
    """``[A, I]`` on the first two blocks, identity on the other ``blocks - 2``."""
    n = A.shape[0]
    M = np.zeros((n * (blocks - 1), n * blocks), dtype=complex)
    M[:n, :n] = A
    M[:n, n:2 * n] = np.eye(n)
    if blocks > 2:
        M[n:, 2 * n:] = np.eye(n * (blocks - 2))
    return M


def iterate_method2(p: StationaryProblem, eps: float, max_dim: int = DEFAULT_PADDED_CAP) -> IterationOutcome:
    """Padded state ``(x0, b, ..., b)/||.||`` and ``eta`` block-operator applications.

    Each application is a matrix-function state of the dilation of
    ``M_k/||M_k||``. With unscaled iterates ``w_k`` the error obeys
    ``e_{k+1} <= s_k e_k + s_k (eps/2) ||w~_k||`` where ``s_k = ||M_k||``.
    """
    n, eta = p.dim, p.eta
    if n * (eta + 1) > max_dim:
        raise PaddingOverflow(f"padded dimension {n * (eta + 1)} exceeds {max_dim}")
    counter = Counter()
    w = np.concatenate([p.x0] + [p.b] * eta).astype(complex)
    w0_norm = float(np.linalg.norm(w))
    err = 0.0
    scale = w0_norm
    norms, conds = [], []
    for k in range(eta):
        M = _block_operator(p.A, eta + 1 - k)
        s = float(np.linalg.norm(M, 2))
        norms.append(s)
        sv = np.linalg.svd(M, compute_uv=False)
        conds.append(float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf"))
        w_next = s * _apply_rounded(M / s, w, eps, counter)
        if eps:
            err = s * err + s * eps / 2 * np.linalg.norm(w)
        w = w_next
        scale *= s
    good = w / scale
    amp = float(np.linalg.norm(good))
    if amp < ZERO_TOL:
        raise ZeroSolution("the iterate vanishes")
    x_norm = float(np.linalg.norm(w))
    chain = eta * _grid_queries(eps) + eta + 1
    closed = x_norm ** 2 / (w0_norm ** 2 * float(np.prod(np.square(norms))))
    return IterationOutcome(
        final_state=qsim.QState.from_vector(good), target_amplitude=amp,
        success_probability=amp ** 2, error_bound=_normalized_error(err, x_norm) if eps else 0.0,
        method_tag="II", query_count=int(math.ceil(1 / amp)) * chain,
        details={"padded_dim": n * (eta + 1), "block_norms": norms,
                 "dilation_condition_numbers": conds, "first_order_bound": eta * eps / x_norm,
                 "success_closed_form": closed, "iterate_norm": x_norm,
                 "counters": dict(counter)})


def iterate_method3(p: StationaryProblem, eps: float) -> IterationOutcome:
    """Power states ``A^eta x0`` and ``A^k b`` (``k < eta``) merged with uniform weights.

    The unmeasured flagged states are combined by the postselection scheme,
    then the flag of the power states is postselected as well, leaving
    ``(1/(eta+1)) x^(eta)`` (up to phase rounding) in the good branch.
    """
    n, eta = p.dim, p.eta
    counter = Counter()
    full_states, err = [], 0.0
    have_x0 = np.linalg.norm(p.x0) > 0
    if eta == 0:
        if not have_x0:
            raise ZeroSolution("x0 = 0 with no iterations")
        return IterationOutcome(qsim.QState(p.x0), 1.0, 1.0, 0.0, "III", 1,
                                {"first_order_bound": 0.0, "iterate_norm": 1.0})

    def flagged(v, k):
        if k == 0:
            return np.stack([v, np.zeros_like(v)], axis=1).reshape(-1)
        st, _ = qsim.matrix_power_state(p.A, v, k, eps, counter=counter)
        return st.state.amplitudes

    if have_x0:
        full_states.append(flagged(p.x0.astype(complex), eta))
        err += eta * eps
    for k in range(eta):
        full_states.append(flagged(p.b.astype(complex), k))
        err += k * eps
    spec = CombinationSpec(np.ones(len(full_states)), full_states)
    lcu = combine_postselect(spec, counter)
    # flag of the power states: keep flag 0; amplitude of the good branch
    merged = lcu.vector.reshape(n, 2)
    lcu_amp = math.sqrt(lcu.success_probability)
    good = merged[:, 0] * lcu_amp
    amp = float(np.linalg.norm(good))
    if amp < ZERO_TOL:
        raise ZeroSolution("the iterate vanishes")
    x_approx = good * len(full_states)
    x_norm = float(np.linalg.norm(x_approx))
    chain = sum(k * _grid_queries(eps) + 1 for k in range(eta + 1))
    return IterationOutcome(
        final_state=qsim.QState.from_vector(good), target_amplitude=amp,
        success_probability=amp ** 2, error_bound=_normalized_error(err, x_norm) if eps else 0.0,
        method_tag="III", query_count=int(math.ceil(1 / amp)) * chain,
        details={"first_order_bound": eta ** 2 * eps / x_norm, "iterate_norm": x_norm,
                 "counters": dict(counter)})


def fidelity(u, v) -> float:
    u, v = as_vector(u), as_vector(v)
    return float(abs(np.vdot(u, v)) ** 2 / (np.vdot(u, u).real * np.vdot(v, v).real))


METHODS = {"I": iterate_method1, "II": iterate_method2, "III": iterate_method3}


def compare_methods(p: StationaryProblem, eps: float, eta_grid=None) -> ExperimentReport:
    """Run all three methods on each ``eta`` of the grid (default: ``p.eta`` only).

    Rows carry the success probability, query count, achieved fidelity and
    the leading complexity expression. The summary records whether method
    I's success probability follows ``||x||^2/(2^{eta+1} + 2^eta - 2)`` and
    whether methods II and III decay more slowly than ``2^-eta``.
    """
    eta_grid = [p.eta] if eta_grid is None else list(eta_grid)
    rep = ExperimentReport(command="stationary")
    decay = {"I": [], "II": [], "III": []}
    formula_ok = True
    for eta in eta_grid:
        q = StationaryProblem(p.A, p.b, p.x0, eta)
        exact = classical_stationary(q)
        xn = float(np.linalg.norm(exact))
        for tag, fn in METHODS.items():
            out = fn(q, eps)
            fid = fidelity(out.vector, exact)
            dist = math.sqrt(max(0.0, 2 - 2 * math.sqrt(min(1.0, fid))))
            row = rep.add(method=tag, eta=eta, eps=eps, success_probability=out.success_probability,
                          query_count=out.query_count, fidelity=fid, measured_error=dist,
                          predicted_bound=out.error_bound + (1e-8 if not eps else 0.0),
                          first_order_bound=out.details.get("first_order_bound", 0.0),
                          predicted_complexity=predicted_complexity(tag, max(eta, 1), xn, eps))
            rep.check_bound(row)
            decay[tag].append(out.success_probability)
            if tag == "I" and eta >= 1:
                expected = xn ** 2 * method1_amplitude(eta) ** 2
                tol = 1e-10 if not eps else 4 * row["predicted_bound"] * expected + 1e-10
                formula_ok &= abs(out.success_probability - expected) <= tol
    rep.summary["method1_formula_holds"] = bool(formula_ok)
    rates = {}
    if len(eta_grid) >= 2:
        etas = np.asarray(eta_grid, dtype=float)
        for tag, ps in decay.items():
            slope = np.polyfit(etas, np.log2(np.asarray(ps)), 1)[0]
            rates[tag] = float(slope)
        rep.summary["log2_decay_per_step"] = rates
        rep.summary["methods_II_III_slower_than_I"] = bool(
            rates["II"] > rates["I"] and rates["III"] > rates["I"])
    rep.curves = {f"success_method_{t}": (eta_grid, decay[t]) for t in decay}
    return rep
