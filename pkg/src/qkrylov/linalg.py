"""Dense complex linear algebra: the classical oracle layer.

Matrices are plain :class:`numpy.ndarray` objects of complex dtype. The
:class:`SpectralDecomposition` caches the eigen-data of a Hermitian matrix and
is the stand-in for Hamiltonian-simulation access used by :mod:`qkrylov.qsim`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .errors import DimensionMismatch, NotHermitian, ZeroMatrix

HERMITIAN_TOL = 1e-12
SINGULAR_CUTOFF = 1e-14


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {A.shape}")
    return A


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d array, got shape {v.shape}")
    return v


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and bool(
        np.all(np.abs(A - A.conj().T) <= tol)
    )


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ZeroDivisionError("cannot normalize the zero vector")
    return v / nrm


def canonical_phase(v, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first non-negligible entry is real positive."""
    v = np.asarray(v, dtype=complex)
    if v.size == 0:
        return v
    mags = np.abs(v)
    idx = np.flatnonzero(mags > tol * max(mags.max(), 1.0))
    if idx.size == 0:
        return v.copy()
    c = v[idx[0]]
    return v * (abs(c) / c)


def phase_distance(u, v) -> float:
    """Distance between two vectors after optimal global-phase alignment."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    ip = np.vdot(u, v)
    phase = ip / abs(ip) if abs(ip) > 0 else 1.0
    return float(np.linalg.norm(u * phase - v))


def hermitian_dilation(A) -> np.ndarray:
    """Return the Hermitian block matrix ``[[0, A], [A^dagger, 0]]``.

    Acting on ``(0, y)`` it produces ``(A y, 0)``; acting on ``(x, 0)`` it
    produces ``(0, A^dagger x)``.
    """
    A = as_matrix(A)
    r, c = A.shape
    out = np.zeros((r + c, r + c), dtype=complex)
    out[:r, r:] = A
    out[r:, :r] = A.conj().T
    return out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigen-data of a Hermitian matrix.

    Eigenvalues are sorted by descending absolute value (ties: positive
    first), and each eigenvector has its first non-negligible component made
    real positive, so the decomposition is reproducible.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.dim else 0.0

    def coefficients(self, v) -> np.ndarray:
        """Expansion coefficients ``beta_j = <u_j|v>``."""
        v = as_vector(v)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"vector of length {v.shape[0]} vs dim {self.dim}")
        return self.eigenvectors.conj().T @ v

    def synthesize(self, coeffs) -> np.ndarray:
        return self.eigenvectors @ np.asarray(coeffs, dtype=complex)

    def apply(self, f: Callable[[np.ndarray], np.ndarray], v) -> np.ndarray:
        return self.synthesize(f(self.eigenvalues) * self.coefficients(v))

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.conj().T


def spectral_decompose(A) -> SpectralDecomposition:
    A = as_matrix(A)
    if not is_hermitian(A):
        raise NotHermitian("spectral_decompose requires a Hermitian matrix")
    w, U = np.linalg.eigh(A)
    # descending |lambda|, ties broken by sign (positive first)
    order = np.lexsort((-np.sign(w), -np.abs(w)))
    w = w[order]
    U = U[:, order]
    U = np.column_stack([canonical_phase(U[:, j]) for j in range(U.shape[1])]) if U.size else U
    return SpectralDecomposition(eigenvalues=w.real.copy(), eigenvectors=U, matrix=A)


def as_spectral(A) -> SpectralDecomposition:
    """Accept either a Hermitian matrix or an existing decomposition."""
    if isinstance(A, SpectralDecomposition):
        return A
    return spectral_decompose(A)


def condition_number(A) -> float:
    """Ratio of extreme singular values; ``inf`` for numerically singular input."""
    A = as_matrix(A)
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        raise ZeroMatrix("condition number of the zero matrix is undefined")
    if s[-1] < SINGULAR_CUTOFF * s[0]:
        return float("inf")
    return float(s[0] / s[-1])


def apply_matrix_polynomial(coeffs: Sequence[complex], A, v) -> np.ndarray:
    """Evaluate ``sum_l coeffs[l] A^l v`` by Horner's rule."""
    A = as_matrix(A)
    v = as_vector(v)
    if A.shape[0] != A.shape[1] or A.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"A is {A.shape}, v has length {v.shape[0]}")
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.size == 0:
        return np.zeros_like(v)
    out = coeffs[-1] * v
    for c in coeffs[-2::-1]:
        out = A @ out + c * v
    return out


def random_unitary(n: int, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    group = stats.ortho_group if real else stats.unitary_group
    return np.asarray(group.rvs(n, random_state=rng), dtype=complex)


def hermitian_with_spectrum(eigenvalues, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    """Random Hermitian matrix ``Q diag(eigenvalues) Q^dagger`` with Haar ``Q``."""
    lam = np.asarray(eigenvalues, dtype=float)
    Q = random_unitary(lam.size, rng, real=real)
    A = (Q * lam) @ Q.conj().T
    return (A + A.conj().T) / 2


def random_state(n: int, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    v = rng.standard_normal(n).astype(complex)
    if not real:
        v = v + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)
