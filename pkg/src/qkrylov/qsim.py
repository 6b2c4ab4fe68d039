"""Semantic-level simulation of the quantum primitives.

Nothing here is simulated gate by gate. Phase estimation is modelled by the
exact outcome distribution of the textbook circuit, Hamiltonian simulation by
exact spectral access with eigenvalues rounded to a ``t``-bit grid, and every
controlled-unitary application or state preparation is tallied in an optional
:class:`collections.Counter` passed as ``counter``.

Passing ``eps=0`` to an estimation routine selects the exact-oracle mode: no
phase rounding and no sampling. It exists so that quantum pipelines can be
checked for algebraic equivalence with their classical counterparts.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    AssumptionViolated,
    BadConstant,
    DimensionMismatch,
    NotHermitian,
    NotUnitary,
    ZeroCombination,
)
from .linalg import (
    SpectralDecomposition,
    as_spectral,
    as_vector,
    hermitian_dilation,
    is_hermitian,
)

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
DEFAULT_DELTA = 0.05
# extra QPE bits beyond the target precision; per-sample failure <= 1/12
_QPE_EXTRA_BITS = 3
_QPE_SAMPLE_SUCCESS = 11.0 / 12.0
_QPE_WINDOW = 4096
_MAX_T_BITS = 48


def _tally(counter: Counter | None, key: str, amount: int) -> None:
    if counter is not None:
        counter[key] += int(amount)


# --------------------------------------------------------------------------
# states


@dataclass
class QState:
    """Normalized amplitude vector over an ordered list of registers.

    The first register is the most significant index, so a layout
    ``(("system", n), ("flag", 2))`` stores amplitude ``(i, q)`` at ``2*i + q``.
    """

    amplitudes: np.ndarray
    layout: tuple = None
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        self.amplitudes = as_vector(self.amplitudes)
        if self.layout is None:
            self.layout = (("system", self.amplitudes.shape[0]),)
        self.layout = tuple((str(name), int(d)) for name, d in self.layout)
        if math.prod(d for _, d in self.layout) != self.amplitudes.shape[0]:
            raise DimensionMismatch(
                f"layout {self.layout} does not match {self.amplitudes.shape[0]} amplitudes")
        nrm = np.linalg.norm(self.amplitudes)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {nrm!r} differs from 1")

    @classmethod
    def from_vector(cls, v, layout=None, **tags) -> "QState":
        v = as_vector(v)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ZeroCombination("cannot build a state from the zero vector")
        return cls(v / nrm, layout, dict(tags))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dims(self) -> tuple:
        return tuple(d for _, d in self.layout)

    def register_index(self, name: str) -> int:
        for k, (reg, _) in enumerate(self.layout):
            if reg == name:
                return k
        raise KeyError(name)

    def component(self, **fixed: int) -> np.ndarray:
        """Unnormalized amplitudes with the named registers fixed to given values."""
        t = self.amplitudes.reshape(self.dims)
        index = [slice(None)] * len(self.layout)
        for name, value in fixed.items():
            index[self.register_index(name)] = value
        return t[tuple(index)].reshape(-1)

    def probability(self, **fixed: int) -> float:
        return float(np.sum(np.abs(self.component(**fixed)) ** 2))


@dataclass
class PostselectedState:
    """A state together with a flag register whose ``good_value`` marks success."""

    state: QState
    flag_register: str = "flag"
    good_value: int = 0
    success_probability: float = 0.0
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        p = self.state.probability(**{self.flag_register: self.good_value})
        if self.success_probability == 0.0:
            self.success_probability = p
        if abs(self.success_probability - p) > 1e-10:
            raise ValueError("success_probability disagrees with the flagged component")

    @property
    def good(self) -> np.ndarray:
        """Unnormalized flagged component (norm^2 equals the success probability)."""
        return self.state.component(**{self.flag_register: self.good_value})

    def postselected(self) -> QState:
        layout = tuple((n, d) for n, d in self.state.layout if n != self.flag_register)
        return QState.from_vector(self.good, layout)


@dataclass
class PhaseEstimateResult:
    sampled_phase: float
    t_bits: int
    query_count: int
    trial_outcomes: list = field(default_factory=list)


# --------------------------------------------------------------------------
# unitary spectra and phase estimation


@dataclass(frozen=True)
class UnitarySpectrum:
    """Eigenphases (radians) and orthonormal eigenvectors of a unitary.

    ``vectors`` may span only part of the space; the orthogonal complement is
    then an eigenspace with phase ``rest_phase``.
    """

    phases: np.ndarray
    vectors: np.ndarray
    rest_phase: float | None = None

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def matrix(self) -> np.ndarray:
        return _spectral_sum(np.exp(1j * self.phases), self.vectors,
                             None if self.rest_phase is None else np.exp(1j * self.rest_phase))


def _spectral_sum(values, vectors, rest_value) -> np.ndarray:
    M = (vectors * values) @ vectors.conj().T
    if rest_value is not None:
        P = vectors @ vectors.conj().T
        M = M + rest_value * (np.eye(vectors.shape[0]) - P)
    return M


def unitary_spectrum(U, branch: str = "principal") -> UnitarySpectrum:
    """Eigen-decompose a unitary via the complex Schur form.

    ``branch="principal"`` reports phases in ``(-pi, pi]``; ``"positive"`` in ``[0, 2 pi)``.
    """
    if isinstance(U, UnitarySpectrum):
        return U
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionMismatch(f"unitary must be square, got {U.shape}")
    if not np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=1e-9):
        raise NotUnitary("matrix is not unitary")
    T, Z = scipy.linalg.schur(U, output="complex")
    ev = np.diag(T)
    if np.any(np.abs(np.abs(ev) - 1.0) > UNITARY_TOL):
        raise NotUnitary("eigenvalue moduli deviate from 1")
    phases = np.angle(ev)
    if branch == "positive":
        phases = np.mod(phases, 2 * np.pi)
        phases[phases >= 2 * np.pi] = 0.0
    elif branch != "principal":
        raise ValueError(f"unknown branch {branch!r}")
    return UnitarySpectrum(phases=phases, vectors=Z)


def qpe_outcome_probabilities(phase: float, t_bits: int) -> np.ndarray:
    """Exact outcome distribution of ``t``-bit phase estimation for phase ``phase`` (in turns)."""
    M = 2 ** t_bits
    y = np.arange(M)
    d = phase - y / M
    num = np.sin(np.pi * M * d) ** 2
    den = (M * np.sin(np.pi * d)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(den < 1e-300, 1.0, num / den)
    exact = np.isclose(np.mod(d, 1.0), 0.0, atol=1e-15) | np.isclose(np.mod(d, 1.0), 1.0, atol=1e-15)
    p = np.where(exact, 1.0, p)
    return p / p.sum()


def sample_qpe(phase: float, t_bits: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` outcomes ``y`` in ``[0, 2^t)`` from the phase-estimation distribution.

    Offsets within a window around the nearest grid point are sampled from
    exact probabilities; for very large registers the rarely hit far tail
    uses the continuum approximation ``p_k ~ sin^2(pi f) / (pi (k - f))^2``.
    """
    if t_bits > _MAX_T_BITS:
        raise ValueError(f"t_bits={t_bits} exceeds the supported {_MAX_T_BITS}")
    M = 2 ** t_bits
    phase = float(phase) % 1.0
    x = phase * M
    y0 = int(np.floor(x + 0.5))
    f = x - y0
    if abs(f) < 1e-12:
        return np.full(size, y0 % M, dtype=np.int64)
    if M <= 2 * _QPE_WINDOW + 1:
        p = qpe_outcome_probabilities(phase, t_bits)
        return rng.choice(M, size=size, p=p).astype(np.int64)
    k = np.arange(-_QPE_WINDOW, _QPE_WINDOW + 1)
    s2 = np.sin(np.pi * f) ** 2
    p = s2 / (M * np.sin(np.pi * (f - k) / M)) ** 2
    cdf = np.cumsum(p)
    mass = cdf[-1]
    u = rng.random(size)
    out = np.empty(size, dtype=np.int64)
    inside = u < mass
    out[inside] = y0 + k[np.searchsorted(cdf, u[inside], side="right").clip(0, k.size - 1)]
    n_tail = int((~inside).sum())
    if n_tail:
        # |k - f| beyond the window, density ~ 1/(k-f)^2, symmetric sides
        K = _QPE_WINDOW + 0.5
        mag = K / rng.random(n_tail)
        sign = np.where(rng.random(n_tail) < 0.5, -1, 1)
        out[~inside] = y0 + np.round(sign * mag).astype(np.int64)
    return np.mod(out, M)


def phase_estimate(U, input_state, t_bits: int, rng: np.random.Generator,
                   trials: int = 1, counter: Counter | None = None) -> PhaseEstimateResult:
    """Sample ``t``-bit phase estimates of ``U`` on ``input_state``.

    The eigen-branch ``j`` is drawn with probability ``|<u_j|input>|^2`` and
    the register outcome from the exact QPE distribution of phase ``theta_j``.
    Phases are reported in turns, i.e. in ``[0, 1)``.
    """
    spec = unitary_spectrum(U)
    psi = input_state.amplitudes if isinstance(input_state, QState) else as_vector(input_state)
    if psi.shape[0] != spec.dim:
        raise DimensionMismatch("input dimension does not match the unitary")
    weights = np.abs(spec.vectors.conj().T @ psi) ** 2
    phases = list(np.mod(spec.phases / (2 * np.pi), 1.0))
    if spec.rest_phase is not None:
        rest = max(0.0, 1.0 - weights.sum())
        weights = np.append(weights, rest)
        phases.append((spec.rest_phase / (2 * np.pi)) % 1.0)
    weights = weights / weights.sum()
    branches = rng.choice(len(phases), size=trials, p=weights)
    outcomes = []
    for j in branches:
        y = int(sample_qpe(phases[j], t_bits, 1, rng)[0])
        outcomes.append(y / 2 ** t_bits)
    q = trials * (2 ** t_bits - 1)
    _tally(counter, "controlled_u", q)
    return PhaseEstimateResult(sampled_phase=outcomes[0], t_bits=t_bits,
                               query_count=q, trial_outcomes=outcomes)


# --------------------------------------------------------------------------
# amplitude estimation and the swap test


@dataclass
class GroverRotation:
    """``G = (2|phi><phi| - I)(Y (x) I)`` and its restriction to ``span{|0>|u>, |1>|v>}``."""

    matrix: np.ndarray
    block: np.ndarray
    theta: float
    basis: np.ndarray
    degenerate: bool

    @property
    def block_eigenphases(self) -> np.ndarray:
        return np.array([2 * self.theta, -2 * self.theta])


def _split_first_qubit(phi) -> tuple[np.ndarray, np.ndarray]:
    amps = phi.amplitudes if isinstance(phi, QState) else as_vector(phi)
    if isinstance(phi, QState) and phi.dims[0] != 2:
        raise DimensionMismatch("first register must be a single qubit")
    if amps.shape[0] % 2:
        raise DimensionMismatch("state length must be even")
    n = amps.shape[0] // 2
    return amps[:n], amps[n:]


def grover_rotation(phi) -> GroverRotation:
    branch0, branch1 = _split_first_qubit(phi)
    s, c = np.linalg.norm(branch0), np.linalg.norm(branch1)
    theta = float(np.arctan2(s, c))
    n = branch0.shape[0]
    amps = np.concatenate([branch0, branch1])
    Y = np.concatenate([-np.ones(n), np.ones(n)])
    G = (2 * np.outer(amps, amps.conj()) - np.eye(2 * n)) * Y[None, :]
    degenerate = bool(s < 1e-12 or c < 1e-12)
    u = branch0 / s if s >= 1e-12 else np.zeros(n)
    v = branch1 / c if c >= 1e-12 else np.zeros(n)
    basis = np.column_stack([np.concatenate([u, np.zeros(n)]), np.concatenate([np.zeros(n), v])])
    c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
    block = np.array([[c2, s2], [-s2, c2]])
    return GroverRotation(matrix=G, block=block, theta=theta, basis=basis, degenerate=degenerate)


def qpe_bits_for(angle_accuracy: float) -> int:
    """Register size so that one sample resolves the Grover angle to ``angle_accuracy``."""
    n = max(1, math.ceil(math.log2(math.pi / angle_accuracy)))
    return min(n + _QPE_EXTRA_BITS, _MAX_T_BITS)


def repetitions_for(delta: float) -> int:
    """Odd number of samples whose median fails with probability at most ``delta``."""
    gap = _QPE_SAMPLE_SUCCESS - 0.5
    k = max(1, math.ceil(math.log(1.0 / delta) / (2 * gap * gap)))
    return k if k % 2 else k + 1


def estimate_angle(theta: float, accuracy: float, delta: float, rng: np.random.Generator,
                   counter: Counter | None = None) -> float:
    """Median-boosted phase estimation of the Grover angle ``theta`` in ``[0, pi/2]``.

    Each sample folds the register outcome as ``pi * min(y, 2^t - y) / 2^t``
    so both eigen-branches ``e^{+-2i theta}`` give the same estimate.
    """
    if accuracy <= 0:
        return float(theta)
    t = qpe_bits_for(accuracy)
    k = repetitions_for(delta)
    M = 2 ** t
    turns = theta / np.pi
    branch = rng.random(k) < 0.5
    ys = np.empty(k, dtype=np.int64)
    n_plus = int(branch.sum())
    if n_plus:
        ys[branch] = sample_qpe(turns, t, n_plus, rng)
    if k - n_plus:
        ys[~branch] = sample_qpe(-turns, t, k - n_plus, rng)
    folded = np.minimum(ys, M - ys)
    estimates = np.pi * folded / M
    _tally(counter, "controlled_u", k * (M - 1))
    _tally(counter, "state_prep", 2 * k * (M - 1))
    return float(np.median(estimates))


def amplitude_estimate(phi, eps: float, delta: float, rng: np.random.Generator,
                       counter: Counter | None = None) -> float:
    """Estimate ``sin(theta)`` for ``phi = sin(theta)|0>|u> + cos(theta)|1>|v>``.

    ``|sin(theta) - result| <= eps`` with probability at least ``1 - delta``.
    """
    theta = grover_rotation_angle(phi)
    return float(np.sin(estimate_angle(theta, eps, delta, rng, counter)))


def grover_rotation_angle(phi) -> float:
    branch0, branch1 = _split_first_qubit(phi)
    return float(np.arctan2(np.linalg.norm(branch0), np.linalg.norm(branch1)))


def _vec(x) -> np.ndarray:
    return x.amplitudes if isinstance(x, QState) else as_vector(x)


def swap_test_real(x, y, eps: float, delta: float, rng: np.random.Generator,
                   counter: Counter | None = None) -> float:
    """Estimate ``Re<x|y>`` from ``(|+>|x> + |->|y>)/sqrt(2)`` to accuracy ``eps``."""
    xv, yv = _vec(x), _vec(y)
    if xv.shape != yv.shape:
        raise DimensionMismatch(f"states of length {xv.shape[0]} and {yv.shape[0]}")
    phi = np.concatenate([xv + yv, xv - yv]) / 2.0
    theta = grover_rotation_angle(phi)
    # Re<x|y> = 2 sin^2(theta) - 1 = -cos(2 theta); angle error a -> value error 2a
    est = estimate_angle(theta, eps / 2.0, delta, rng, counter)
    return float(-np.cos(2 * est))


def swap_test_inner(x, y, eps: float, rng: np.random.Generator,
                    delta: float = DEFAULT_DELTA, counter: Counter | None = None) -> complex:
    """Estimate the complex overlap ``<x|y>``.

    The imaginary part comes from the real part of ``<x| i y>``. With
    probability at least ``1 - delta`` the error is at most ``sqrt(2) eps``.
    """
    xv, yv = _vec(x), _vec(y)
    if xv.shape != yv.shape:
        raise DimensionMismatch(f"states of length {xv.shape[0]} and {yv.shape[0]}")
    if eps <= 0:
        return complex(np.vdot(xv, yv))
    re = swap_test_real(xv, yv, eps, delta / 2, rng, counter)
    im = -swap_test_real(xv, 1j * yv, eps, delta / 2, rng, counter)
    return complex(re, im)


# --------------------------------------------------------------------------
# matrix functions


def phase_grid_bits(eps_phase: float) -> int:
    return max(1, math.ceil(math.log2(1.0 / eps_phase)))


def round_to_grid(values, eps_phase: float | None) -> np.ndarray:
    """Round to the nearest multiple of ``2^-t``, ``t = ceil(log2(1/eps))``; sign preserving."""
    values = np.asarray(values, dtype=float)
    if not eps_phase:
        return values.copy()
    g = 2.0 ** -phase_grid_bits(eps_phase)
    return np.round(values / g) * g


def _prepare_operator(A, y):
    """Return (spectral data, padded input, dilated flag)."""
    y = as_vector(y)
    if isinstance(A, SpectralDecomposition):
        sd = A
        dilated = False
    else:
        A = np.asarray(A, dtype=complex)
        if is_hermitian(A):
            sd, dilated = as_spectral(A), False
        else:
            sd, dilated = as_spectral(hermitian_dilation(A)), True
    if dilated:
        n_rows = sd.dim - y.shape[0]
        y = np.concatenate([np.zeros(n_rows, dtype=complex), y])
    if y.shape[0] != sd.dim:
        raise DimensionMismatch(f"vector of length {y.shape[0]} vs operator dim {sd.dim}")
    return sd, y, dilated


def check_singular_window(sd: SpectralDecomposition, kappa: float | None = None,
                          tol: float = 1e-10) -> None:
    mags = np.abs(sd.eigenvalues)
    if mags.size and mags.max() > 1 + tol:
        raise AssumptionViolated(f"largest singular value {mags.max():.6g} exceeds 1")
    if kappa is not None and mags.size and mags.min() < 1 / kappa - tol:
        raise AssumptionViolated(f"smallest singular value {mags.min():.6g} below 1/kappa")


def matrix_function_state(A, y, f: Callable[[np.ndarray], np.ndarray], eps_phase: float,
                          C: float | None = None, kappa: float | None = None,
                          counter: Counter | None = None) -> PostselectedState:
    """Prepare ``sum_j beta_j |u_j> (f(l_j) C |0> + sqrt(1 - |f(l_j) C|^2) |1>)``.

    ``l_j`` are the eigenvalues rounded to the ``eps_phase`` grid. A
    non-Hermitian ``A`` is replaced by its Hermitian dilation with ``y``
    placed in the lower block, so the flagged component is ``(A y, 0)``.
    """
    sd, yv, dilated = _prepare_operator(A, y)
    nrm = np.linalg.norm(yv)
    if abs(nrm - 1) > NORM_TOL:
        raise ValueError("input vector must be normalized")
    check_singular_window(sd, kappa)
    lam = round_to_grid(sd.eigenvalues, eps_phase)
    fv = np.asarray(f(lam), dtype=complex)
    beta = sd.coefficients(yv)
    if C is None:
        fmax = np.max(np.abs(fv)) if fv.size else 0.0
        if fmax == 0:
            raise BadConstant("f vanishes on the whole spectrum")
        C = 1.0 / fmax
    scaled = fv * C
    if np.any(np.abs(scaled) > 1 + 1e-12):
        raise BadConstant(f"|f(lambda) C| reaches {np.abs(scaled).max():.6g} > 1")
    warnings = []
    violated = (np.abs(fv) < 1e-14) & (np.abs(beta) > 1e-10)
    if np.any(violated):
        warnings.append(
            f"f vanishes on the input: {int(violated.sum())} component(s) with f(lambda)=0 "
            f"carry weight {float(np.sum(np.abs(beta[violated]) ** 2)):.3g}")
    good = sd.synthesize(beta * scaled)
    bad = sd.synthesize(beta * np.sqrt(np.clip(1 - np.abs(scaled) ** 2, 0, None)))
    amps = np.stack([good, bad], axis=1).reshape(-1)
    tags = {"dilated": dilated, "C": float(C)}
    state = QState(amps / np.linalg.norm(amps), (("system", sd.dim), ("flag", 2)), tags)
    if eps_phase:
        _tally(counter, "controlled_u", 2 * (2 ** phase_grid_bits(eps_phase) - 1))
    _tally(counter, "state_prep", 1)
    return PostselectedState(state=state, flag_register="flag", good_value=0,
                             success_probability=float(np.sum(np.abs(good) ** 2)),
                             warnings=warnings)


def matrix_power_state(A, y, l: int, eps_phase: float, kappa: float | None = None,
                       counter: Counter | None = None) -> tuple[PostselectedState, float]:
    """Flagged state of ``A^l y`` (with ``C = 1``) and ``Z~ = sum |l~_j^l beta_j|^2``.

    ``||A^l y - sqrt(Z~) psi~|| <= l eps_phase`` holds by construction.
    """
    if l < 1:
        raise ValueError("power must be a positive integer")
    st = matrix_function_state(A, y, lambda x: x ** l, eps_phase, C=1.0,
                               kappa=kappa, counter=counter)
    if l > 1 and st.state.tags.get("dilated"):
        raise NotHermitian("powers l > 1 need a Hermitian operator")
    return st, float(st.success_probability)


def inner_product_via_power(x, A, l: int, y, eps: float, rng: np.random.Generator,
                            delta: float = DEFAULT_DELTA,
                            counter: Counter | None = None) -> complex:
    """Estimate ``<x|A^l|y>`` by a swap test of ``|x,0>`` against the unmeasured flagged state.

    Half the budget goes to the swap test and ``eps/(2l)`` is the phase grid,
    so the total error stays below ``eps`` with probability ``1 - delta``.
    """
    xv, yv = _vec(x), _vec(y)
    if l == 0:
        return swap_test_inner(xv, yv, eps, rng, delta, counter)
    eps_phase = eps / (2 * l) if eps > 0 else 0.0
    st, _ = matrix_power_state(A, yv, l, eps_phase, counter=counter)
    if st.state.tags.get("dilated"):
        xv = np.concatenate([xv, np.zeros(st.state.dims[0] - xv.shape[0], dtype=complex)])
    xpad = np.stack([xv, np.zeros_like(xv)], axis=1).reshape(-1)
    # the complex swap test errs by up to sqrt(2) times its accuracy
    return swap_test_inner(xpad, st.state.amplitudes, eps / (2 * math.sqrt(2)), rng, delta, counter)


# --------------------------------------------------------------------------
# fractional powers


def unitary_fractional_power(U, t: float, eps: float | None, branch: str = "principal",
                             counter: Counter | None = None) -> np.ndarray:
    """``U^t = sum_j exp(i theta~_j t) |u_j><u_j|`` with phases rounded to the ``eps`` grid.

    Phases are rounded as fractions of a full turn. The operator distance to
    the exact fractional power is at most ``pi eps t``.
    """
    if not 0 <= t <= 1:
        raise ValueError("fractional power must lie in [0, 1]")
    spec = U if isinstance(U, UnitarySpectrum) else unitary_spectrum(U, branch)
    turns = spec.phases / (2 * np.pi)
    rounded = round_to_grid(turns, eps) * 2 * np.pi
    rest = None
    if spec.rest_phase is not None:
        rest = np.exp(1j * t * float(round_to_grid([spec.rest_phase / (2 * np.pi)], eps)[0] * 2 * np.pi))
    if eps:
        _tally(counter, "controlled_u", 2 * (2 ** phase_grid_bits(eps) - 1))
    return _spectral_sum(np.exp(1j * rounded * t), spec.vectors, rest)


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def quantized_phases(phases: Sequence[float], eps: float) -> np.ndarray:
    return round_to_grid(np.asarray(phases) / (2 * np.pi), eps) * 2 * np.pi
