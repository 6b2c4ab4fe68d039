"""Preparing a state proportional to ``sum_j alpha_j |v_j>``.

Three schemes are provided:

* ``combine_postselect`` and ``combine_select_prepare`` build the full
  ancilla-augmented state and postselect on a flag; the flagged component is
  exactly proportional to the target, the price is a success probability.
* ``combine_rotation_tree`` rotates states into each other pairwise, with
  unit success probability and an error that comes only from estimated
  angles and rounded phases.

Rotation outputs carry a tracked global phase: a result with ``phase=chi``
approximates ``exp(-1j*chi) * c / ||c||``. Errors are bounded in this phase
sensitive sense, which is what lets pair errors compose through a tree.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qsim
from .errors import (
    DimensionMismatch,
    InconsistentPair,
    NearlyAntiparallel,
    NearlyParallel,
    ZeroCombination,
    ZeroTarget,
)
from .linalg import as_vector, normalize

ZERO_TOL = 1e-12
MIN_PAIR_ANGLE = 1e-6
# safety factor on the sampled supremum of the pair error over the estimate disk
_DISK_SAFETY = 1.25
_MAX_REFINE = 14
_TREE_RETRIES = 3
_LEAF_RETRIES = 6


def _vec(x) -> np.ndarray:
    return x.amplitudes if isinstance(x, qsim.QState) else as_vector(x)


@dataclass
class CombinationSpec:
    """Coefficients ``alpha_j``, states ``v_j`` and their preparation costs."""

    coefficients: Sequence[complex]
    states: Sequence
    costs: Sequence[int] | None = None
    target_eps: float = 1e-3

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=complex).ravel()
        self.states = [normalize(_vec(v)) for v in self.states]
        if self.coefficients.size == 0:
            raise ValueError("at least one coefficient is required")
        if len(self.states) != self.coefficients.size:
            raise DimensionMismatch("one state per coefficient is required")
        if len({v.shape[0] for v in self.states}) != 1:
            raise DimensionMismatch("all states must have the same dimension")
        if not np.any(np.abs(self.coefficients) > 0):
            raise ZeroCombination("all coefficients vanish")
        if self.costs is None:
            self.costs = [1] * self.coefficients.size
        self.costs = [int(c) for c in self.costs]

    @property
    def l(self) -> int:
        return self.coefficients.size

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def target(self) -> np.ndarray:
        """Unnormalized ``sum_j alpha_j v_j``."""
        return np.column_stack(self.states) @ self.coefficients


@dataclass
class CombinationResult:
    state: qsim.QState
    success_probability: float
    achieved_error: float
    query_count: int
    norm_estimate: float = float("nan")
    phase: float = 0.0
    norm_error: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def vector(self) -> np.ndarray:
        return self.state.amplitudes


def _amplification_queries(p: float, costs: Sequence[int]) -> int:
    return int(math.ceil(1.0 / math.sqrt(p)) * sum(costs))


def combine_postselect(spec: CombinationSpec, counter: Counter | None = None) -> CombinationResult:
    """Ancilla-rotation scheme with ``t = 1/max|alpha_j|``.

    1. prepare ``l^{-1/2} sum_j |j>|v_j>``;
    2. rotate a flag qubit to ``alpha_j t |0> + sqrt(1 - |alpha_j t|^2)|1>``;
    3. apply a Hadamard-like uniform map to the index and keep ``|0>|0>``.

    The kept component is ``(t/l) sum_j alpha_j |v_j>``.
    """
    l, n = spec.l, spec.dim
    v = spec.target()
    if np.linalg.norm(v) < ZERO_TOL:
        raise ZeroCombination("the combination cancels; postselection never succeeds")
    t = 1.0 / np.max(np.abs(spec.coefficients))
    joint = np.zeros((l, 2, n), dtype=complex)
    for j, (a, vj) in enumerate(zip(spec.coefficients, spec.states)):
        g = a * t
        joint[j, 0] = g * vj / math.sqrt(l)
        joint[j, 1] = math.sqrt(max(0.0, 1 - abs(g) ** 2)) * vj / math.sqrt(l)
    # uniform map on the index register: row 0 of a unitary is (1,...,1)/sqrt(l)
    good = joint[:, 0, :].sum(axis=0) / math.sqrt(l)
    p = float(np.vdot(good, good).real)
    q = _amplification_queries(p, spec.costs)
    if counter is not None:
        counter["state_prep"] += q
        counter["postselect"] += 1
    return CombinationResult(state=qsim.QState.from_vector(good), success_probability=p,
                             achieved_error=0.0, query_count=q,
                             norm_estimate=float(np.linalg.norm(v)),
                             details={"closed_form": closed_form_postselect(spec)})


def closed_form_postselect(spec: CombinationSpec) -> float:
    v = spec.target()
    return float(np.vdot(v, v).real / (np.max(np.abs(spec.coefficients)) ** 2 * spec.l ** 2))


def closed_form_select_prepare(spec: CombinationSpec) -> float:
    v = spec.target()
    return float(np.vdot(v, v).real / np.sum(np.abs(spec.coefficients)) ** 2)


def _householder_to(p: np.ndarray) -> np.ndarray:
    """Unitary whose first column is the unit vector ``p``."""
    d = p.shape[0]
    e0 = np.zeros(d, dtype=complex)
    e0[0] = 1.0
    ph = p[0] / abs(p[0]) if abs(p[0]) > 0 else 1.0
    w = p - ph * e0
    nw = np.linalg.norm(w)
    if nw < 1e-15:
        return ph * np.eye(d, dtype=complex)
    w = w / nw
    # H = I - 2ww^dagger sends ph*e0 to p; fix the phase of the first column
    H = np.eye(d, dtype=complex) - 2 * np.outer(w, w.conj())
    return H * ph


def combine_select_prepare(spec: CombinationSpec, counter: Counter | None = None) -> CombinationResult:
    """``P^dagger . SELECT . P`` with ``P|0> = sum_j sqrt(r_j/s)|j>`` and ``s = sum_j r_j``."""
    l, n = spec.l, spec.dim
    v = spec.target()
    if np.linalg.norm(v) < ZERO_TOL:
        raise ZeroCombination("the combination cancels; postselection never succeeds")
    r = np.abs(spec.coefficients)
    s = r.sum()
    P = _householder_to(np.sqrt(r / s).astype(complex))
    # after P and SELECT: sum_j sqrt(r_j/s) |j> e^{i theta_j}|v_j>
    phases = np.exp(1j * np.angle(spec.coefficients))
    joint = (P[:, 0][:, None] * phases[:, None]) * np.array(spec.states)
    joint = P.conj().T @ joint
    good = joint[0]
    p = float(np.vdot(good, good).real)
    q = _amplification_queries(p, spec.costs)
    if counter is not None:
        counter["state_prep"] += q
        counter["postselect"] += 1
    return CombinationResult(state=qsim.QState.from_vector(good), success_probability=p,
                             achieved_error=0.0, query_count=q,
                             norm_estimate=float(np.linalg.norm(v)),
                             details={"closed_form": closed_form_select_prepare(spec)})


# --------------------------------------------------------------------------
# pair rotation


@dataclass(frozen=True)
class PairPlan:
    """Rotation parameters derived from an overlap ``s = <a|b>``.

    With ``u = (b - s a)/||b - s a||`` the target is ``c = c1 a + beta t u``
    where ``c1 = alpha + beta s`` and ``t = sqrt(1 - |s|^2)``. Rotating ``a``
    by ``gamma`` toward ``u`` and then multiplying the ``a`` component by
    ``exp(-i nu)`` yields ``exp(-i chi) c/||c||``.
    """

    overlap: complex
    half_angle: float
    gamma: float
    nu: float
    chi: float
    norm: float

    @property
    def ratio(self) -> float:
        return self.gamma / (2 * self.half_angle)


def plan_pair(alpha: complex, beta: complex, s: complex) -> PairPlan:
    s_abs = min(abs(s), 1.0)
    t = math.sqrt(max(0.0, 1.0 - s_abs * s_abs))
    c1 = alpha + beta * s
    c2 = abs(beta) * t
    norm = math.hypot(abs(c1), c2)
    return PairPlan(overlap=complex(s), half_angle=math.acos(s_abs),
                    gamma=math.atan2(c2, abs(c1)),
                    nu=float(np.angle(beta) - np.angle(c1)),
                    chi=float(np.angle(beta)), norm=norm)


def pair_errors(plan: PairPlan, alpha: complex, beta: complex, overlaps) -> tuple[np.ndarray, np.ndarray]:
    """State and norm errors if the true overlap were each of ``overlaps``.

    The executed procedure is fixed by ``plan``; only the geometry changes.
    Both output and target are written in the ``(a, u)`` coordinates of the
    hypothetical pair, so the distances are exact for that pair.
    """
    s = np.asarray(overlaps, dtype=complex)
    s_abs = np.clip(np.abs(s), 0.0, 1.0)
    t = np.sqrt(1.0 - s_abs ** 2)
    angle = 2 * np.arccos(s_abs) * plan.ratio
    out0 = np.exp(-1j * plan.nu) * np.cos(angle)
    out1 = np.sin(angle)
    c1 = alpha + beta * s
    c2 = beta * t
    nrm = np.sqrt(np.abs(c1) ** 2 + np.abs(c2) ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        tg0 = np.exp(-1j * plan.chi) * c1 / nrm
        tg1 = np.exp(-1j * plan.chi) * c2 / nrm
    err = np.sqrt(np.abs(out0 - tg0) ** 2 + np.abs(out1 - tg1) ** 2)
    return np.nan_to_num(err, nan=2.0), np.abs(nrm - plan.norm)


def disk_points(center: complex, radius: float) -> np.ndarray:
    ring = np.exp(2j * np.pi * np.arange(32) / 32)
    return np.concatenate([[center], center + 0.5 * radius * ring[::2], center + radius * ring])


def plane_rotation_spectrum(a: np.ndarray, b: np.ndarray) -> tuple[qsim.UnitarySpectrum, np.ndarray]:
    """In-plane spectrum of the rotation taking ``a`` toward ``b``.

    Returned in the 2-d coordinates ``(a, u)`` together with the ``n x 2``
    embedding ``[a, u]``. On the plane the reflection product
    ``(I - 2bb^dagger)(I - 2aa^dagger)`` acts, after absorbing the phase of
    ``<a|b>`` into ``b``, as the rotation by ``2 phi`` with eigenvectors
    ``(a -+ i u)/sqrt(2)`` and phases ``+-2 phi``.
    """
    s = np.vdot(a, b)
    w = b - s * a
    nw = np.linalg.norm(w)
    u = w / nw if nw > ZERO_TOL else np.zeros_like(a)
    phi = math.acos(min(abs(s), 1.0))
    vecs = np.array([[1, 1], [-1j, 1j]], dtype=complex) / math.sqrt(2)
    spec = qsim.UnitarySpectrum(phases=np.array([2 * phi, -2 * phi]), vectors=vecs)
    return spec, np.column_stack([a, u])


def reflection_product(a, b) -> np.ndarray:
    a, b = _vec(a), _vec(b)
    n = a.shape[0]
    return (np.eye(n) - 2 * np.outer(b, b.conj())) @ (np.eye(n) - 2 * np.outer(a, a.conj()))


def combine_pair_rotation(a, b, alpha: complex, beta: complex, eps: float,
                          rng: np.random.Generator | None = None, delta: float = qsim.DEFAULT_DELTA,
                          costs: tuple[int, int] = (1, 1),
                          counter: Counter | None = None) -> CombinationResult:
    """Rotate ``a`` into the state proportional to ``alpha a + beta b``.

    The overlap ``<a|b>`` is estimated by swap test; from it the rotation
    angle ``gamma``, the fractional power ``r = gamma/(2 phi)`` of the pair
    rotation and a relative phase ``nu`` are derived. The output is
    ``S_a(-nu) R^r a`` where ``S_a`` multiplies the ``a`` direction by a phase.
    The estimate of ``<a|b>`` is refined until the error bound, taken over
    every overlap compatible with the swap-test accuracy, fits half of
    ``eps``; the other half pays for rounding the rotation phases.
    ``eps=0`` runs with exact overlaps and phases.
    """
    a, b = normalize(_vec(a)), normalize(_vec(b))
    if a.shape != b.shape:
        raise DimensionMismatch("pair states must have equal dimension")
    alpha, beta = complex(alpha), complex(beta)
    rng = rng if rng is not None else np.random.default_rng(0)
    if abs(alpha) < ZERO_TOL and abs(beta) < ZERO_TOL:
        raise ZeroTarget("both coefficients vanish")
    if abs(beta) < ZERO_TOL or abs(alpha) < ZERO_TOL:
        keep, coef = (a, alpha) if abs(beta) < ZERO_TOL else (b, beta)
        return CombinationResult(state=qsim.QState(keep), success_probability=1.0,
                                 achieved_error=0.0, query_count=0,
                                 norm_estimate=abs(coef), phase=float(np.angle(coef)))
    local = Counter()
    exact = not eps
    eps_s = eps / 4 if not exact else 0.0
    for _ in range(_MAX_REFINE):
        s_est = qsim.swap_test_inner(a, b, eps_s, rng, delta, counter=local)
        s_est = s_est if abs(s_est) <= 1 else s_est / abs(s_est)
        if math.acos(min(abs(s_est), 1.0)) < MIN_PAIR_ANGLE:
            if s_est.real >= 0:
                raise NearlyParallel("pair states are numerically parallel")
            raise NearlyAntiparallel("pair states are numerically antiparallel")
        plan = plan_pair(alpha, beta, s_est)
        if plan.norm < ZERO_TOL:
            raise ZeroTarget("the pair combination cancels")
        if exact:
            disk_err, norm_err = 0.0, 0.0
            break
        errs, nerrs = pair_errors(plan, alpha, beta, disk_points(s_est, math.sqrt(2) * eps_s))
        disk_err = _DISK_SAFETY * float(errs.max())
        norm_err = _DISK_SAFETY * float(nerrs.max())
        if disk_err <= eps / 2:
            break
        eps_s /= 2
    r = plan.ratio
    k_int = int(math.floor(r))
    frac = r - k_int
    spec, frame = plane_rotation_spectrum(a, b)
    eps_grid = eps / (2 * math.pi) if not exact else 0.0
    rot = qsim.unitary_fractional_power(spec, frac, eps_grid, counter=local)
    if k_int:
        full = spec.vectors @ np.diag(np.exp(1j * spec.phases * k_int)) @ spec.vectors.conj().T
        rot = rot @ full
    coords = rot @ np.array([1.0, 0.0], dtype=complex)
    coords[0] *= np.exp(-1j * plan.nu)  # partial reflection about a
    out = frame @ coords
    grid_err = 0.0
    if not exact:
        grid_err = math.pi * 2.0 ** -qsim.phase_grid_bits(eps_grid) * frac
    uses = local["state_prep"] + local["controlled_u"] + k_int + 1
    if counter is not None:
        counter.update(local)
        counter["pair_rotation"] += 1
    return CombinationResult(state=qsim.QState.from_vector(out), success_probability=1.0,
                             achieved_error=disk_err + grid_err,
                             query_count=int(uses * (costs[0] + costs[1])),
                             norm_estimate=plan.norm, phase=plan.chi, norm_error=norm_err,
                             details={"overlap_estimate": plan.overlap, "ratio": r,
                                      "swap_accuracy": eps_s})


# --------------------------------------------------------------------------
# rotation tree


@dataclass
class _Node:
    weight: complex          # node content ~ weight * state
    state: np.ndarray | None
    error: float             # bound on ||exact content - weight * state||
    cost: int


def _merge(left: _Node, right: _Node, eps_pair: float, rng, delta, counter) -> _Node:
    if left.state is None:
        return right
    if right.state is None:
        return left
    res = combine_pair_rotation(left.state, right.state, left.weight, right.weight, eps_pair,
                                rng, delta, costs=(left.cost, right.cost), counter=counter)
    w = res.norm_estimate * np.exp(1j * res.phase)
    err = (left.error + right.error
           + (res.norm_estimate + res.norm_error) * res.achieved_error + res.norm_error)
    return _Node(weight=w, state=res.vector, error=err, cost=max(res.query_count, 1))


def _run_tree(leaves: list[_Node], eps_pair, rng, delta, counter) -> _Node:
    size = 1 << max(0, (len(leaves) - 1).bit_length())
    level = leaves + [_Node(0.0, None, 0.0, 0)] * (size - len(leaves))
    while len(level) > 1:
        level = [_merge(level[i], level[i + 1], eps_pair, rng, delta, counter)
                 for i in range(0, len(level), 2)]
    return level[0]


def normalized_bound(root_weight: complex, root_error: float) -> float:
    """``||c/||c|| - e^{i arg w} psi|| <= 2E/(|w| - E)`` given ``||c - w psi|| <= E``."""
    if abs(root_weight) <= root_error:
        return float("inf")
    return min(2.0, 2 * root_error / (abs(root_weight) - root_error))


def tree_from_leaves(weights, states, errors, costs, eps: float, rng, delta=qsim.DEFAULT_DELTA,
                     counter: Counter | None = None) -> CombinationResult:
    """Rotation tree over leaves with known content errors; retries with tighter pair tolerances."""
    l = len(weights)
    eps_pair = eps / max(l, 1)
    for attempt in range(_TREE_RETRIES + 1):
        local = Counter()
        leaves = [_Node(complex(w), None if abs(w) == 0 and e == 0 else normalize(v), float(e), int(c))
                  for w, v, e, c in zip(weights, states, errors, costs)]
        root = _run_tree(leaves, eps_pair, rng, delta, local)
        if root.state is None:
            raise ZeroCombination("all coefficients vanish")
        bound = normalized_bound(root.weight, root.error) if eps else 0.0
        if bound <= eps or attempt == _TREE_RETRIES:
            break
        eps_pair /= 4
    if counter is not None:
        counter.update(local)
    # rotate the tracked phase away so the state approximates c/||c|| itself
    state = root.state * np.exp(1j * np.angle(root.weight))
    return CombinationResult(state=qsim.QState.from_vector(state), success_probability=1.0,
                             achieved_error=bound, query_count=root.cost,
                             norm_estimate=abs(root.weight), phase=0.0,
                             norm_error=root.error,
                             details={"pair_eps": eps_pair, "pair_rotations": local["pair_rotation"]})


def combine_rotation_tree(spec: CombinationSpec, rng: np.random.Generator | None = None,
                          eps: float | None = None, delta: float = qsim.DEFAULT_DELTA,
                          counter: Counter | None = None) -> CombinationResult:
    """Pairwise rotations up a binary tree; unit success probability.

    ``l`` is padded with zero coefficients to a power of two. Every node keeps
    a complex weight and a state whose product approximates the exact partial
    sum, so the error bound composes additively up the tree.
    """
    eps = spec.target_eps if eps is None else eps
    rng = rng if rng is not None else np.random.default_rng(0)
    if np.linalg.norm(spec.target()) < ZERO_TOL:
        raise ZeroCombination("the combination cancels")
    return tree_from_leaves(spec.coefficients, spec.states, [0.0] * spec.l, spec.costs,
                            eps, rng, delta, counter)


def pm_pair_leaves(phi_plus_list, phi_minus_list, eps_leaf: float, rng: np.random.Generator,
                   delta: float = qsim.DEFAULT_DELTA, counter: Counter | None = None,
                   tol: float = 1e-8):
    """Recover ``(alpha_j, |u_j>)`` from each pair ``alpha_j|0,u_j> +- beta_j|1,v_j>``.

    Returns ``(weights, states, errors, costs)`` with
    ``||alpha_j u_j - weights[j] states[j]|| <= errors[j]``.
    """
    if len(phi_plus_list) != len(phi_minus_list) or not phi_plus_list:
        raise InconsistentPair("need the same positive number of + and - states")
    weights, states, errors, costs = [], [], [], []
    for plus, minus in zip(phi_plus_list, phi_minus_list):
        p, m = _vec(plus), _vec(minus)
        if p.shape != m.shape or p.shape[0] % 2:
            raise InconsistentPair("pair states need equal, even dimension")
        n = p.shape[0] // 2
        if np.linalg.norm((p + m)[n:]) > tol or np.linalg.norm((p - m)[:n]) > tol:
            raise InconsistentPair("the + and - states do not share their good and garbage parts")
        s = qsim.swap_test_inner(p, m, eps_leaf, rng, delta, counter=counter)
        a2 = min(1.0, max(0.0, (1 + s.real) / 2))
        alpha = math.sqrt(a2)
        rho = math.sqrt(2) * eps_leaf
        if eps_leaf:
            alpha_err = min(math.sqrt(rho / 2), rho / (2 * alpha) if alpha > 0 else math.inf)
        else:
            alpha_err = 0.0
        if alpha <= alpha_err or np.linalg.norm(p[:n]) < ZERO_TOL:
            raise ZeroCombination("a pair has no good component")
        try:
            if a2 > 1 - 1e-14:
                raise NearlyParallel("no garbage branch")
            res = combine_pair_rotation(p, m, 1.0, 1.0, eps_leaf, rng, delta, counter=counter)
            u = (res.vector * np.exp(1j * res.phase))[:n]
            # dropping the flag register at most doubles the error
            u_err, cost = 2 * res.achieved_error, res.query_count
        except NearlyParallel:
            # the + state already is |0,u> up to its tiny garbage branch
            u = p[:n]
            u_err, cost = math.sqrt(2) * math.sqrt(max(0.0, 1 - a2) + rho / 2), 1
        weights.append(alpha)
        states.append(u / np.linalg.norm(u))
        errors.append(alpha_err + alpha * u_err)
        costs.append(cost)
    return weights, states, errors, costs


def combine_from_pm_pairs(phi_plus_list, phi_minus_list, eps: float,
                          rng: np.random.Generator | None = None, delta: float = qsim.DEFAULT_DELTA,
                          counter: Counter | None = None, tol: float = 1e-8) -> CombinationResult:
    """State proportional to ``sum_j alpha_j |u_j>`` from pairs ``alpha_j|0,u_j> +- beta_j|1,v_j>``.

    Each input has a leading flag qubit (``|0>`` good, ``|1>`` garbage) and
    nonnegative ``alpha_j, beta_j`` with ``alpha_j^2 + beta_j^2 = 1``. The
    overlap ``<phi+|phi-> = alpha^2 - beta^2`` gives ``alpha_j``; the pair
    sum gives ``|0,u_j>``; a final tree combines them. The returned state is
    on the system register alone.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    local = Counter()
    l = max(1, len(phi_plus_list))
    eps_leaf = eps / (4 * l) if eps else 0.0
    for _ in range(_LEAF_RETRIES + 1):
        weights, states, errors, costs = pm_pair_leaves(phi_plus_list, phi_minus_list, eps_leaf,
                                                        rng, delta, local, tol)
        res = tree_from_leaves(weights, states, errors, costs, eps / 2 if eps else 0.0,
                               rng, delta, local)
        if res.achieved_error <= eps:
            break
        # the garbage amplitude enters through a square root, so shrink fast
        eps_leaf /= 8
    if counter is not None:
        counter.update(local)
    res.details["alpha_estimates"] = weights
    return res


# --------------------------------------------------------------------------
# polynomial states


def krylov_leaves(A, x0, degree: int, eps_phase: float, rng, delta=qsim.DEFAULT_DELTA,
                  counter: Counter | None = None):
    """Normalized ``A^l x0`` states for ``l = 0..degree`` with norm estimates and error bounds.

    Returns ``(states, norms, errors)`` with
    ``||A^l x0 - norms[l] * states[l]|| <= errors[l]``.
    """
    x0 = normalize(_vec(x0))
    states, norms, errors = [x0], [1.0], [0.0]
    for l in range(1, degree + 1):
        st, Z = qsim.matrix_power_state(A, x0, l, eps_phase, counter=counter)
        good = st.good
        if eps_phase:
            phi = np.concatenate([good, st.state.component(flag=1)])
            est = qsim.amplitude_estimate(phi, eps_phase, delta, rng, counter)
            err = l * eps_phase + eps_phase
        else:
            est, err = math.sqrt(Z), 0.0
        if np.linalg.norm(good) < ZERO_TOL:
            states.append(x0)
            norms.append(0.0)
        else:
            states.append(normalize(good))
            norms.append(est)
        errors.append(err)
    return states, np.array(norms), np.array(errors)


def polynomial_state(coeffs, A, x0, eps: float, rng: np.random.Generator | None = None,
                     scheme: str = "rotation-tree", delta: float = qsim.DEFAULT_DELTA,
                     counter: Counter | None = None, leaves=None) -> CombinationResult:
    """State proportional to ``sum_l coeffs[l] A^l x0``.

    Each ``A^l x0`` comes from a postselected matrix-power state with its
    norm from amplitude estimation. ``scheme`` selects how the powers are
    combined: ``"rotation-tree"`` (unit success probability) or
    ``"postselect"``. Precomputed ``leaves`` from :func:`krylov_leaves` may
    be passed to avoid re-estimating shared norms.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    coeffs = np.asarray(coeffs, dtype=complex)
    deg = coeffs.size - 1
    if leaves is None:
        eps_phase = eps / (4 * max(1, deg) * max(1.0, np.abs(coeffs).sum())) if eps else 0.0
        leaves = krylov_leaves(A, x0, deg, eps_phase, rng, delta, counter)
    states, norms, errs = leaves
    weights = coeffs * norms[: deg + 1]
    leaf_err = np.abs(coeffs) * errs[: deg + 1]
    costs = [1 + l for l in range(deg + 1)]
    if scheme == "rotation-tree":
        res = tree_from_leaves(list(weights), states[: deg + 1], list(leaf_err), costs,
                               eps / 2 if eps else 0.0, rng, delta, counter)
        # leaf errors are already inside the tree bound
        return res
    if scheme == "postselect":
        keep = np.abs(weights) > 0
        spec = CombinationSpec([w for w, k in zip(weights, keep) if k],
                               [s for s, k in zip(states, keep) if k],
                               [c for c, k in zip(costs, keep) if k], eps)
        res = combine_postselect(spec, counter)
        res.norm_error = float(leaf_err.sum())
        res.achieved_error = normalized_bound(res.norm_estimate, res.norm_error) if eps else 0.0
        return res
    raise ValueError(f"unknown scheme {scheme!r}")
