"""Uses of quantum matrix powers: cycle finding, matrix products, shifted power iteration.

Graph routines scale the adjacency matrix by ``1/s`` (``s`` the largest
degree) so its spectrum fits in ``[-1, 1]``, estimate entries of
``(A/s)^l`` and rescale by ``s^l``. Walk counts are integers, so an
estimate accurate to better than ``1/2`` rounds to the exact count.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .errors import (
    DimensionMismatch,
    NoDominantGap,
    NotHermitian,
    PrecisionInsufficient,
    ZeroOverlap,
)
from .linalg import (
    SpectralDecomposition,
    as_matrix,
    as_vector,
    hermitian_dilation,
    is_hermitian,
    normalize,
    spectral_decompose,
)

ROUND_MARGIN = 0.5
# probe accuracy used when the caller's eps cannot resolve integer counts
_SAFE_FRACTION = 0.4
DOMINANT_GAP_TOL = 1e-6
OVERLAP_TOL = 1e-12
# worst-case growth constant of the shifted iteration, kept as a reference line
C1_REFERENCE = math.e ** 2


@dataclass
class Graph:
    """Simple undirected graph as a symmetric 0/1 adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.all((a == 0) | (a == 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diag(a)):
            raise ValueError("adjacency must have a zero diagonal")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        self.adjacency = a.astype(int)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        a = np.zeros((n, n), dtype=int)
        for u, v in edges:
            a[u, v] = a[v, u] = 1
        return cls(a)

    @classmethod
    def random(cls, n: int, p: float, rng: np.random.Generator) -> "Graph":
        upper = np.triu(rng.random((n, n)) < p, 1)
        return cls((upper | upper.T).astype(int))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def sparsity(self) -> int:
        return int(self.adjacency.sum(axis=1).max()) if self.n else 0

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])

    def induced(self, keep) -> "Graph":
        keep = np.asarray(keep, dtype=bool)
        a = self.adjacency * np.outer(keep, keep)
        return Graph(a)


class _WalkOracle:
    """Estimates ``<i|A^l|j>`` for one graph with a cached spectral decomposition."""

    def __init__(self, g: Graph, rng, delta=qsim.DEFAULT_DELTA, counter=None):
        self.g = g
        self.s = max(g.sparsity, 1)
        self.sd = spectral_decompose(g.adjacency / self.s)
        self.rng = rng
        self.delta = delta
        self.counter = counter if counter is not None else Counter()
        self.probes = 0

    def estimate(self, i: int, j: int, l: int, eps: float) -> float:
        """Real estimate of the walk count; ``eps`` is the accuracy before rescaling."""
        self.probes += 1
        if self.g.sparsity == 0:
            return float(i == j) if l == 0 else 0.0
        n = self.g.n
        ei = np.zeros(n, dtype=complex)
        ej = np.zeros(n, dtype=complex)
        ei[i] = ej[j] = 1.0
        val = qsim.inner_product_via_power(ei, self.sd, l, ej, eps, self.rng, self.delta, self.counter)
        return float(val.real) * self.s ** l

    def count(self, i: int, j: int, l: int, eps: float) -> int:
        return int(round(self.estimate(i, j, l, eps)))


def _check_precision(eps: float, s: int, l: int) -> None:
    if eps * max(s, 1) ** l >= ROUND_MARGIN:
        raise PrecisionInsufficient(
            f"eps * s^l = {eps * max(s, 1) ** l:.3g} >= 1/2; counts cannot be rounded exactly")


def walk_count(g: Graph, i: int, j: int, l: int, eps: float,
               rng: np.random.Generator | None = None) -> int:
    """Number of length-``l`` walks from ``i`` to ``j``, rounded from an estimate."""
    if l < 1:
        raise ValueError("walk length must be at least 1")
    _check_precision(eps, g.sparsity, l)
    rng = rng if rng is not None else np.random.default_rng(0)
    return _WalkOracle(g, rng).count(i, j, l, eps)


@dataclass
class TriangleSearch:
    triangle: tuple | None
    probes: int
    probe_eps: float
    quantum_cost: float
    order: list = field(default_factory=list)


def triangle_search(g: Graph, eps: float = 1e-3, rng: np.random.Generator | None = None) -> TriangleSearch:
    """Scan vertices in random order for a positive diagonal entry of ``A^3``.

    Grover search over vertices is modelled as sequential probes; the
    ``quantum_cost`` field is ``sqrt(n)`` probe costs. If ``eps`` is too
    coarse to round the diagonal exactly it is tightened to ``0.4/s^3``.
    """
    if g.n < 3:
        raise ValueError("need at least 3 vertices")
    rng = rng if rng is not None else np.random.default_rng(0)
    s = max(g.sparsity, 1)
    probe_eps = eps if eps * s ** 3 < ROUND_MARGIN else _SAFE_FRACTION / s ** 3
    oracle = _WalkOracle(g, rng)
    order = [int(v) for v in rng.permutation(g.n)]
    found = None
    for i in order:
        if oracle.estimate(i, i, 3, probe_eps) >= ROUND_MARGIN:
            nb = g.neighbors(i)
            for a in range(len(nb)):
                for b in range(a + 1, len(nb)):
                    if g.adjacency[nb[a], nb[b]]:
                        found = tuple(sorted((i, int(nb[a]), int(nb[b]))))
                        break
                if found:
                    break
            if found:
                break
    return TriangleSearch(triangle=found, probes=oracle.probes, probe_eps=probe_eps,
                          quantum_cost=math.sqrt(g.n) * 3 / probe_eps, order=order)


def triangle_find(g: Graph, eps: float = 1e-3, rng: np.random.Generator | None = None):
    """A triangle ``(i, j, k)`` with ``i < j < k``, or ``None``."""
    return triangle_search(g, eps, rng).triangle


# --------------------------------------------------------------------------
# polygons


@dataclass
class PolygonSearch:
    cycle: list | None
    closed_walk_vertices: list
    probes: int
    caveat: str = ("a positive diagonal of A^l certifies a closed walk, which need not be a simple "
                   "cycle; the returned cycle is checked for distinct vertices")


def closed_walk_vertices(g: Graph, l: int, eps: float, rng: np.random.Generator | None = None) -> list:
    """Vertices whose estimated ``(A^l)_ii`` rounds to a positive count."""
    _check_precision(eps, g.sparsity, l)
    rng = rng if rng is not None else np.random.default_rng(0)
    oracle = _WalkOracle(g, rng)
    return [i for i in range(g.n) if oracle.estimate(i, i, l, eps) >= ROUND_MARGIN]


def polygon_search(g: Graph, l: int, eps: float = 1e-3,
                   rng: np.random.Generator | None = None) -> PolygonSearch:
    """Detect closed walks of length ``l`` and grow a simple ``l``-cycle from them.

    Starting at a detected vertex ``i``, each next vertex is a neighbor in
    the subgraph that still excludes the vertices already used, kept only
    if the estimated number of walks back to ``i`` of the remaining length
    is positive. Dead ends backtrack.
    """
    if not 3 <= l <= g.n:
        raise ValueError("need 3 <= l <= n")
    _check_precision(eps, g.sparsity, l)
    rng = rng if rng is not None else np.random.default_rng(0)
    starts = closed_walk_vertices(g, l, eps, rng)
    oracles: dict = {}
    probes = [g.n]

    def walks_back(used: frozenset, v: int, i: int, length: int) -> bool:
        keep = np.ones(g.n, dtype=bool)
        for u in used:
            keep[u] = False
        keep[v] = keep[i] = True
        key = frozenset(np.flatnonzero(~keep).tolist())
        if key not in oracles:
            oracles[key] = _WalkOracle(g.induced(keep), rng)
        probes[0] += 1
        return oracles[key].estimate(v, i, length, eps) >= ROUND_MARGIN

    def extend(path: list) -> list | None:
        i, cur = path[0], path[-1]
        remaining = l - len(path)
        if remaining == 0:
            return path if g.adjacency[cur, i] else None
        used = frozenset(path)
        for v in g.neighbors(cur):
            v = int(v)
            if v in used:
                continue
            if walks_back(used - {i}, v, i, remaining):
                out = extend(path + [v])
                if out:
                    return out
        return None

    cycle = None
    for i in starts:
        cycle = extend([i])
        if cycle:
            break
    return PolygonSearch(cycle=cycle, closed_walk_vertices=starts, probes=probes[0])


def find_polygon(g: Graph, l: int, eps: float = 1e-3, rng: np.random.Generator | None = None):
    """Vertices of a simple ``l``-cycle in order, or ``None``."""
    return polygon_search(g, l, eps, rng).cycle


# --------------------------------------------------------------------------
# matrix multiplication


def _flagged_columns(M, n: int, eps_phase: float, counter):
    """For each basis vector ``e_k``: ``(M e_k, garbage)`` from one flagged state."""
    M = as_matrix(M)
    if is_hermitian(M):
        sd, pad = spectral_decompose(M), 0
    else:
        sd, pad = spectral_decompose(hermitian_dilation(M)), M.shape[0]
    out = []
    for k in range(n):
        y = np.zeros(sd.dim, dtype=complex)
        y[pad + k] = 1.0
        st = qsim.matrix_function_state(sd, y, lambda x: x, eps_phase, C=1.0, counter=counter)
        out.append((st.good[: M.shape[0]], st.state.component(flag=1)))
    return out


def matrix_multiply_quantum(A, B, eps: float = 0.02, rng: np.random.Generator | None = None,
                            delta: float = qsim.DEFAULT_DELTA) -> np.ndarray:
    """Estimate ``AB`` entrywise as ``<A^dagger e_i | B e_j>``.

    Both operands must have singular values at most one. Each factor state
    carries its own flag qubit, arranged so that the garbage parts are
    orthogonal and the swap test sees only the product term.
    """
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    rng = rng if rng is not None else np.random.default_rng(0)
    counter = Counter()
    eps_phase = eps / 4
    left = _flagged_columns(A.conj().T, A.shape[0], eps_phase, counter)
    right = _flagged_columns(B, B.shape[1], eps_phase, counter)
    gdim = max(max(g.shape[0] for _, g in left), max(g.shape[0] for _, g in right))

    def pad(v):
        return np.concatenate([v, np.zeros(gdim - v.shape[0], dtype=complex)])

    out = np.zeros((A.shape[0], B.shape[1]), dtype=complex)
    for i, (ai, gi) in enumerate(left):
        # (x|00>, g|10>) against (y|00>, g'|01>): the garbage blocks never overlap
        phi = np.concatenate([ai, pad(gi), np.zeros(gdim, dtype=complex)])
        for j, (bj, gj) in enumerate(right):
            psi = np.concatenate([bj, np.zeros(gdim, dtype=complex), pad(gj)])
            out[i, j] = qsim.swap_test_inner(phi, psi, eps / (2 * math.sqrt(2)), rng, delta, counter)
    return out


# --------------------------------------------------------------------------
# shifted power iteration


@dataclass
class PowerIterationRun:
    mu: float
    eta: int
    eigenvalue_estimate: float
    eigenvector_estimate: np.ndarray
    shifted_kappa: float
    details: dict = field(default_factory=dict)


def shifted_condition_number(eigenvalues, mu: float) -> float:
    shifted = np.abs(np.asarray(eigenvalues) + mu)
    return float(shifted.max() / shifted.min()) if shifted.min() > 0 else math.inf


def shifted_kappa_bound(mu: float) -> float:
    """``(mu+1)/(mu-1) = 1 + 2/(mu-1)`` for a spectrum inside ``[-1, 1]``."""
    return 1 + 2 / (mu - 1)


def power_iteration_shifted(A, mu: float = 2.0, eps: float = 1e-3, max_eta: int = 500,
                            b0=None, rng: np.random.Generator | None = None,
                            eps_phase: float | None = None,
                            delta: float = qsim.DEFAULT_DELTA) -> PowerIterationRun:
    """Power iteration on ``B = A + mu I`` with each step a flagged matrix-vector state.

    ``B`` is rescaled to spectral norm at most one before use. Iteration
    stops when successive normalized iterates differ by less than ``eps``.
    The eigenvalue is the ratio ``<b_0|B^eta A B^eta|b_0> / <b_0|B^{2eta}|b_0>``,
    estimated as ``<b_eta|A|b_eta>`` by one swap test. If the dominant
    eigenvalue is negative the shift is applied as ``-mu``.
    """
    A = as_matrix(A)
    if not is_hermitian(A):
        raise NotHermitian("shifted power iteration needs a Hermitian matrix")
    if mu < 0:
        raise ValueError("mu must be non-negative")
    rng = rng if rng is not None else np.random.default_rng(0)
    n = A.shape[0]
    sd = spectral_decompose(A)
    lam = sd.eigenvalues
    order = np.argsort(-np.abs(lam))
    if n > 1 and abs(lam[order[0]]) - abs(lam[order[1]]) < DOMINANT_GAP_TOL:
        raise NoDominantGap("the two largest eigenvalues have equal magnitude")
    lam1 = float(lam[order[0]])
    dominant = sd.eigenvectors[:, order[0]]
    b0 = normalize(np.ones(n, dtype=complex)) if b0 is None else normalize(as_vector(b0))
    if abs(np.vdot(dominant, b0)) < OVERLAP_TOL:
        raise ZeroOverlap("b0 has no component along the dominant eigenvector")
    shift = mu if lam1 >= 0 else -mu
    scale = float(np.abs(lam + shift).max())
    Bsd = SpectralDecomposition(eigenvalues=(lam + shift) / scale, eigenvectors=sd.eigenvectors,
                                matrix=(A + shift * np.eye(n)) / scale)
    eps_phase = eps / 4 if eps_phase is None else eps_phase
    counter = Counter()
    b = b0
    eta = 0
    diffs = []
    converged = False
    while eta < max_eta:
        st = qsim.matrix_function_state(Bsd, b, lambda x: x, eps_phase, C=1.0, counter=counter)
        nxt = normalize(st.good)
        eta += 1
        diffs.append(float(np.linalg.norm(nxt - b)))
        b = nxt
        if diffs[-1] < eps:
            converged = True
            break
    est = qsim.inner_product_via_power(b, sd, 1, b, eps / 2, rng, delta, counter).real
    exact_iterate = normalize(np.linalg.matrix_power(A + shift * np.eye(n), eta) @ b0)
    k0 = int(np.argmax(np.abs(b0)))
    # the ratio through a fixed basis vector, evaluated classically for reference
    ratio_ref = (np.linalg.matrix_power(A, eta + 1) @ b0)[k0] / (np.linalg.matrix_power(A, eta) @ b0)[k0]
    return PowerIterationRun(
        mu=shift, eta=eta, eigenvalue_estimate=float(est), eigenvector_estimate=b,
        shifted_kappa=shifted_condition_number(lam, shift),
        details={"converged": converged, "step_differences": diffs, "true_eigenvalue": lam1,
                 "dominant_overlap": float(abs(np.vdot(dominant, b))),
                 "exact_iterate_distance": float(np.linalg.norm(exact_iterate - b)),
                 "basis_ratio_reference": complex(ratio_ref), "c1_reference": C1_REFERENCE,
                 "queries": dict(counter)})


def normalized_laplacian(g: Graph) -> np.ndarray:
    """``I - D^{-1/2} A D^{-1/2}`` (isolated vertices get a zero row)."""
    deg = g.adjacency.sum(axis=1).astype(float)
    inv = np.where(deg > 0, 1 / np.sqrt(np.where(deg > 0, deg, 1)), 0.0)
    L = np.diag((deg > 0).astype(float)) - inv[:, None] * g.adjacency * inv[None, :]
    return L


def laplacian_iteration_bound(eps: float) -> int:
    """``ceil(log2(1/eps)) + 2`` iterations for a dominant/second eigenvalue ratio of at least 2."""
    return math.ceil(math.log2(1 / eps)) + 2
