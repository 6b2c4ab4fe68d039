"""Conjugate gradient as polynomials in ``A``: classical, coefficient tables, quantum, Lanczos.

Starting from ``x_0 = 0`` and ``r_0 = p_0 = b``, every CG vector is a
polynomial in ``A`` applied to ``b``. The scalars ``alpha_k`` and
``beta_k`` only need the moments ``mu_j = <b|A^j|b>``, so the quantum
solver estimates those once, runs the scalar recursion classically and
prepares the final iterate as one linear combination of ``A^l |b>``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import lcu, qsim
from .errors import NotSPD, StagnantResidual
from .linalg import apply_matrix_polynomial, as_matrix, as_vector, is_hermitian, normalize
from .report import ExperimentReport

DEFAULT_DELTA = 1e-4
SPD_TOL = 1e-12
# estimated r'r must drop within this relative noise band to count as a decrease
STAGNATION_STEPS = 3


@dataclass
class CGTrace:
    """Scalars, coefficient tables and explicit vectors of one CG run.

    ``x[k, l]``, ``r[k, l]``, ``p[k, l]`` are the coefficients of ``A^l b``
    in ``x_k``, ``r_k``, ``p_k``. ``stop_step`` is the number of completed
    updates ``m``; ``alpha`` and ``beta`` have length ``m``.
    """

    alpha: np.ndarray
    beta: np.ndarray
    x: np.ndarray
    r: np.ndarray
    p: np.ndarray
    stop_step: int
    delta: float
    vectors: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "stop_step": self.stop_step,
                "delta": self.delta, "x": self.x}


@dataclass
class GrowthBounds:
    """Worst-case coefficient sizes ``R_k, P_k, X_k`` for ``k = 0..k_max``."""

    R: np.ndarray
    P: np.ndarray
    X: np.ndarray
    z1: float
    z2: float
    lambda1: float
    lambda2: float
    R_recurrence: np.ndarray
    P_recurrence: np.ndarray
    X_recurrence: np.ndarray


@dataclass
class LanczosTridiagonal:
    T: np.ndarray

    @property
    def m(self) -> int:
        return self.T.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.T)


def _check_spd(A):
    A = as_matrix(A)
    if not is_hermitian(A):
        raise NotSPD("A must be Hermitian")
    return A


def classical_cg(A, b, max_m: int, delta: float = DEFAULT_DELTA) -> CGTrace:
    """Plain CG from ``x_0 = 0``; stops when ``r'r <= delta^2`` or ``p'Ap <= delta^2``."""
    A = _check_spd(A)
    b = normalize(as_vector(b))
    n = b.shape[0]
    x = np.zeros(n, dtype=complex)
    r = b.copy()
    p = b.copy()
    xs, rs, ps = [x.copy()], [r.copy()], [p.copy()]
    alphas, betas = [], []
    for _ in range(max_m):
        rr = float(np.vdot(r, r).real)
        if rr <= delta ** 2:
            break
        Ap = A @ p
        pAp = float(np.vdot(p, Ap).real)
        if pAp <= -SPD_TOL:
            raise NotSPD(f"p'Ap = {pAp:.3g} < 0")
        if pAp <= delta ** 2:
            break
        a = rr / pAp
        x = x + a * p
        r = r - a * Ap
        bt = float(np.vdot(r, r).real) / rr
        p = r + bt * p
        alphas.append(a)
        betas.append(bt)
        xs.append(x.copy()), rs.append(r.copy()), ps.append(p.copy())
    alpha, beta = np.array(alphas), np.array(betas)
    tab = cg_coefficients(alpha, beta)
    return CGTrace(alpha=alpha, beta=beta, x=tab["x"], r=tab["r"], p=tab["p"],
                   stop_step=len(alphas), delta=delta,
                   vectors={"x": np.array(xs), "r": np.array(rs), "p": np.array(ps)})


def cg_coefficients(alpha, beta) -> dict:
    """Coefficient tables from the scalar sequences.

    ``x_{k+1,l} = x_{kl} + alpha_k p_{kl}``,
    ``r_{k+1,l} = r_{kl} - alpha_k p_{k,l-1}``,
    ``p_{k+1,l} = r_{k+1,l} + beta_k p_{kl}``.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    m = alpha.size
    x = np.zeros((m + 1, m + 1))
    r = np.zeros((m + 1, m + 1))
    p = np.zeros((m + 1, m + 1))
    r[0, 0] = p[0, 0] = 1.0
    for k in range(m):
        p_shift = np.concatenate([[0.0], p[k, :-1]])
        x[k + 1] = x[k] + alpha[k] * p[k]
        r[k + 1] = r[k] - alpha[k] * p_shift
        p[k + 1] = r[k + 1] + beta[k] * p[k]
    return {"x": x, "r": r, "p": p}


def coefficient_growth_bounds(delta: float, k_max: int) -> GrowthBounds:
    """Closed forms of the bound sequences, cross-checked against their recurrences."""
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    d = delta ** -3.0
    root = math.sqrt(4 * d + d * d)
    z1 = (2 + d + root) / 2
    z2 = 1 / z1  # Vieta; avoids the cancellation in (2 + d - root)/2
    lam1 = (1 + d - z2) / (z1 - z2)
    lam2 = (1 + d - z1) / (z2 - z1)
    k = np.arange(k_max + 2, dtype=float)
    with np.errstate(over="ignore"):
        R = lam1 * z1 ** k + lam2 * z2 ** k
        P = (lam1 * (z1 ** (k + 1) - 1) / (z1 - 1) + lam2 * (z2 ** (k + 1) - 1) / (z2 - 1))
        X = (d * lam1 / (z1 - 1) * ((z1 ** (k + 1) - 1) / (z1 - 1) - k - 1)
             + d * lam2 / (z2 - 1) * ((z2 ** (k + 1) - 1) / (z2 - 1) - k - 1))
    Rr = np.zeros(k_max + 2)
    Pr = np.zeros(k_max + 2)
    Xr = np.zeros(k_max + 2)
    Rr[0] = Pr[0] = 1.0
    for j in range(k_max + 1):
        Rr[j + 1] = Rr[j] + Pr[j] * d
        Pr[j + 1] = Rr[j + 1] + Pr[j]
        Xr[j + 1] = Xr[j] + Pr[j] * d
    s = slice(0, k_max + 1)
    return GrowthBounds(R=R[s], P=P[s], X=X[s], z1=z1, z2=z2, lambda1=lam1, lambda2=lam2,
                        R_recurrence=Rr[s], P_recurrence=Pr[s], X_recurrence=Xr[s])


def coefficient_maxima(trace: CGTrace) -> dict:
    """``max_l |x_kl|`` and friends per step, for comparison with :class:`GrowthBounds`."""
    return {name: np.abs(getattr(trace, name)).max(axis=1) for name in ("x", "r", "p")}


def bound_hypothesis_holds(trace: CGTrace) -> bool:
    """``alpha_k <= delta^-3`` and ``beta_k <= 1`` along the whole trace."""
    return bool(np.all(trace.alpha <= trace.delta ** -3) and np.all(trace.beta <= 1 + 1e-12))


# --------------------------------------------------------------------------
# quantum CG


def _quad(c1, c2, mu, shift):
    """``sum_{l,l'} c1_l c2_l' mu_{l+l'+shift}`` for real coefficient rows."""
    tot = 0.0
    for i, a in enumerate(c1):
        if a == 0:
            continue
        for j, bb in enumerate(c2):
            if bb:
                tot += a * bb * mu[i + j + shift]
    return tot


def _moments(A, b, top, eps, rng, delta, counter):
    mu = np.zeros(top + 1)
    mu[0] = 1.0
    for j in range(1, top + 1):
        mu[j] = qsim.inner_product_via_power(b, A, j, b, eps, rng, delta, counter).real
    return mu


def quantum_cg(A, b, max_m: int, delta: float = DEFAULT_DELTA, eps: float = 1e-3,
               scheme: str = "rotation-tree", rng: np.random.Generator | None = None,
               qdelta: float = qsim.DEFAULT_DELTA):
    """CG with estimated scalars and the final iterate prepared as a state.

    ``r_k'r_k`` and ``p_k'Ap_k`` are quadratic forms in the moments
    ``mu_j = <b|A^j|b>``, estimated by swap test and reused across steps.
    As the coefficient rows grow the moments are re-estimated at precision
    ``eps/(sum_l |r_kl|)^2`` so every quadratic form stays within ``eps``. ``|x_m>`` is then the combination of ``A^l|b>`` with the
    ``x_{ml}`` coefficients, via ``scheme`` (``"postselect"`` or
    ``"rotation-tree"``). Returns ``(state, report)``.
    """
    A = _check_spd(A)
    evals = np.linalg.eigvalsh(A)
    if evals.min() <= SPD_TOL:
        raise NotSPD(f"smallest eigenvalue {evals.min():.3g} is not positive")
    b = normalize(as_vector(b))
    rng = rng if rng is not None else np.random.default_rng(0)
    counter = Counter()
    top = 2 * max_m + 1
    cache = {"eps": eps, "mu": _moments(A, b, top, eps, rng, qdelta, counter)}

    def moments(*rows):
        """Moments precise enough that quadratic forms in ``rows`` err by at most ``eps``."""
        need = eps / max(float(np.abs(r).sum()) ** 2 for r in rows) if eps else 0.0
        if need < cache["eps"]:
            cache["eps"] = need
            cache["mu"] = _moments(A, b, top, need, rng, qdelta, counter)
        return cache["mu"]

    ref = classical_cg(A, b, max_m, delta)
    report = ExperimentReport("cg")

    r_row = np.array([1.0])
    p_row = np.array([1.0])
    x_row = np.array([0.0])
    alphas, betas = [], []
    rr_hist, noise_hist = [], []
    stall = 0
    for k in range(max_m):
        mu = moments(r_row, p_row)
        rr = _quad(r_row, r_row, mu, 0)
        # every moment errs by at most cache["eps"], so the form by that times (sum |r_l|)^2
        noise = cache["eps"] * float(np.abs(r_row).sum()) ** 2
        if rr_hist and rr >= rr_hist[-1] * (1 - 1e-12) and rr - rr_hist[-1] <= noise + noise_hist[-1]:
            stall += 1
            if stall >= STAGNATION_STEPS:
                raise StagnantResidual(f"estimated r'r has not decreased for {stall} steps; eps too coarse")
        else:
            stall = 0
        rr_hist.append(rr)
        noise_hist.append(noise)
        if rr <= delta ** 2:
            break
        pAp = _quad(p_row, p_row, mu, 1)
        if pAp <= -SPD_TOL:
            raise NotSPD(f"estimated p'Ap = {pAp:.3g} < 0")
        if pAp <= delta ** 2:
            break
        a = rr / pAp
        x_row = np.concatenate([x_row, [0.0]]) + a * np.concatenate([p_row, [0.0]])
        r_new = np.concatenate([r_row, [0.0]]) - a * np.concatenate([[0.0], p_row])
        bt = _quad(r_new, r_new, moments(r_new), 0) / rr
        p_row = r_new + bt * np.concatenate([p_row, [0.0]])
        r_row = r_new
        alphas.append(a)
        betas.append(bt)
        ref_a = ref.alpha[k] if k < ref.stop_step else float("nan")
        report.add(step=k, alpha=a, beta=bt, alpha_classical=ref_a, residual_sq=rr)
    m = len(alphas)
    if m == 0:
        raise StagnantResidual("no CG step was taken")
    coeffs = x_row[:m]
    x_est = apply_matrix_polynomial(coeffs, A, b)
    res = lcu.polynomial_state(coeffs, A, b, eps, rng, scheme, qdelta, counter)
    state = res.vector
    x_ref = ref.vectors["x"][min(m, ref.stop_step)]
    fid = float(abs(np.vdot(normalize(x_ref), state)) ** 2)
    target = normalize(x_est)
    measured = float(np.linalg.norm(state - target))
    x_norm = float(np.linalg.norm(x_est))
    row = report.add(step=m, scheme=scheme, fidelity=fid, measured_error=measured,
                     predicted_bound=res.achieved_error, success_probability=res.success_probability,
                     x_norm=x_norm, kappa=float(evals.max() / evals.min()),
                     max_x_coefficient=float(np.abs(coeffs).max()),
                     query_count=int(sum(counter.values())))
    if scheme == "postselect":
        row["success_closed_form"] = x_norm ** 2 / (m ** 2 * float(np.max(np.abs(coeffs * power_norms(A, b, m)))) ** 2)
    report.check_bound(row)
    report.summary = {"steps": m, "fidelity": fid, "scheme": scheme, "eps": eps, "delta": delta}
    return qsim.QState.from_vector(state), report


def power_norms(A, b, m):
    """``||A^l b||`` for ``l < m``."""
    out, v = [], b
    for _ in range(m):
        out.append(np.linalg.norm(v))
        v = A @ v
    return np.array(out)


# --------------------------------------------------------------------------
# Lanczos view


def lanczos_tridiagonal(trace: CGTrace) -> LanczosTridiagonal:
    """Tridiagonal matrix from CG scalars.

    Diagonal ``1/alpha_k + beta_{k-1}/alpha_{k-1}``, off-diagonal
    ``sqrt(beta_k)/alpha_k``.
    """
    m = trace.stop_step
    if m < 1:
        raise ValueError("need at least one completed CG step")
    a, bt = trace.alpha, trace.beta
    T = np.zeros((m, m))
    for k in range(m):
        T[k, k] = 1 / a[k] + (bt[k - 1] / a[k - 1] if k > 0 else 0.0)
        if k + 1 < m:
            T[k, k + 1] = T[k + 1, k] = math.sqrt(bt[k]) / a[k]
    return LanczosTridiagonal(T)


def extreme_eigenvalues(T: LanczosTridiagonal) -> tuple[float, float, float]:
    ev = T.eigenvalues()
    lo, hi = float(ev[0]), float(ev[-1])
    return lo, hi, hi / lo
