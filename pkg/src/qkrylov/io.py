"""File formats: Matrix Market matrices, complex vectors, graph edge lists."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .errors import InputUnreadable
from .linalg import is_hermitian


def read_matrix(path) -> np.ndarray:
    """Read a Matrix Market file (coordinate or array; real or complex) as a dense complex array."""
    try:
        M = scipy.io.mmread(str(path))
    except (OSError, ValueError) as exc:
        raise InputUnreadable(f"{path}: {exc}") from exc
    if scipy.sparse.issparse(M):
        M = M.toarray()
    return np.asarray(M, dtype=complex)


def write_matrix(path, A, comment: str = "") -> None:
    """Write ``A`` in coordinate format, using the ``hermitian`` header when it applies."""
    A = np.asarray(A, dtype=complex)
    symmetry = "hermitian" if is_hermitian(A) else "general"
    coo = scipy.sparse.coo_matrix(A)
    scipy.io.mmwrite(str(path), coo, comment=comment, field="complex",
                     precision=17, symmetry=symmetry)


def read_vector(path) -> np.ndarray:
    """One complex number per line, written as ``re im`` (a lone ``re`` is also accepted)."""
    values = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputUnreadable(f"{path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if len(parts) == 1:
                values.append(complex(parts[0].replace("i", "j")))
            elif len(parts) == 2:
                values.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError("too many fields")
        except ValueError as exc:
            raise InputUnreadable(f"{path}:{lineno}: {exc}") from exc
    return np.asarray(values, dtype=complex)


def write_vector(path, v) -> None:
    v = np.asarray(v, dtype=complex)
    Path(path).write_text("".join(f"{z.real:.17g} {z.imag:.17g}\n" for z in v))


def read_edge_list(path, n: int | None = None) -> np.ndarray:
    """Adjacency matrix from ``u v`` lines (0-indexed); ``#`` starts a comment."""
    edges = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputUnreadable(f"{path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise InputUnreadable(f"{path}:{lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InputUnreadable(f"{path}:{lineno}: {exc}") from exc
        if u < 0 or v < 0:
            raise InputUnreadable(f"{path}:{lineno}: negative vertex index")
        edges.append((u, v))
    size = max([max(e) for e in edges], default=-1) + 1
    n = size if n is None else max(n, size)
    adj = np.zeros((n, n), dtype=int)
    for u, v in edges:
        if u != v:
            adj[u, v] = adj[v, u] = 1
    return adj


def write_edge_list(path, adjacency) -> None:
    adj = np.asarray(adjacency)
    rows, cols = np.nonzero(np.triu(adj, 1))
    Path(path).write_text("".join(f"{u} {v}\n" for u, v in zip(rows, cols)))
