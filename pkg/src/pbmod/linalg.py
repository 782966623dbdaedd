"""Exact linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  Subspaces
are represented by their reduced row echelon basis, which is a canonical form:
two subspaces are equal iff their RREF bases are identical arrays.
"""

from __future__ import annotations

import itertools

import numpy as np


def asfield(mat, p: int) -> np.ndarray:
    A = np.asarray(mat, dtype=np.int64) % p
    return A


def rref(mat, p: int):
    """Reduced row echelon form.

    Returns (R, pivots) where R holds only the nonzero rows.
    """
    A = asfield(mat, p).copy()
    if A.ndim == 1:
        A = A.reshape(1, -1)
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        A = (A - np.outer(col, A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(mat, p: int) -> int:
    return rref(mat, p)[0].shape[0]


def row_space(mat, p: int) -> np.ndarray:
    """Canonical (RREF) basis of the row space."""
    return rref(mat, p)[0]


def reduce_against(basis, pivots, vecs, p: int) -> np.ndarray:
    """Residual of vecs after elimination against an RREF basis."""
    V = asfield(vecs, p).copy()
    if V.ndim == 1:
        V = V.reshape(1, -1)
    for k, c in enumerate(pivots):
        V = (V - np.outer(V[:, c], basis[k])) % p
    return V


def in_rowspace(basis, pivots, vecs, p: int):
    """Boolean array: which rows of vecs lie in the span of the RREF basis."""
    res = reduce_against(basis, pivots, vecs, p)
    return ~res.any(axis=1)


def coords_in_rowspace(basis, pivots, vecs, p: int) -> np.ndarray:
    """Coefficient matrix C with C @ basis == vecs.  Raises if not in span."""
    V = asfield(vecs, p)
    if V.ndim == 1:
        V = V.reshape(1, -1)
    C = V[:, pivots].copy()
    if ((C @ basis - V) % p).any():
        raise ValueError("vectors not in row space")
    return C


def nullspace(mat, p: int) -> np.ndarray:
    """Canonical basis (rows) of {x : mat @ x == 0}."""
    A = asfield(mat, p)
    ncols = A.shape[1]
    R, pivots = rref(A, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for k, c in enumerate(pivots):
            basis[i, c] = (-R[k, f]) % p
    return row_space(basis, p) if len(free) else basis


def sum_rowspaces(A, B, p: int) -> np.ndarray:
    if len(A) == 0:
        return row_space(B, p)
    if len(B) == 0:
        return row_space(A, p)
    return row_space(np.vstack([A, B]), p)


def intersect_rowspaces(A, B, p: int) -> np.ndarray:
    """Canonical basis of (row space of A) ∩ (row space of B)."""
    A = asfield(A, p)
    B = asfield(B, p)
    if len(A) == 0 or len(B) == 0:
        n = A.shape[1] if len(A) else B.shape[1]
        return np.zeros((0, n), dtype=np.int64)
    # x = a @ A = b @ B  <=>  (a, b) in left nullspace of [A; -B]
    M = np.vstack([A, (-B) % p])
    N = nullspace(M.T, p)
    if len(N) == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    vecs = (N[:, : len(A)] @ A) % p
    return row_space(vecs, p)


def inv_mod(mat, p: int) -> np.ndarray:
    A = asfield(mat, p)
    n = A.shape[0]
    aug = np.hstack([A, np.eye(n, dtype=np.int64)])
    R, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix not invertible")
    return R[:, n:]


def is_invertible(mat, p: int) -> bool:
    A = asfield(mat, p)
    return A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def matpow(mat, k: int, p: int) -> np.ndarray:
    A = asfield(mat, p)
    n = A.shape[0]
    out = np.eye(n, dtype=np.int64)
    while k:
        if k & 1:
            out = (out @ A) % p
        A = (A @ A) % p
        k >>= 1
    return out


def is_nilpotent(mat, p: int) -> bool:
    A = asfield(mat, p)
    return not matpow(A, A.shape[0], p).any()


def nilpotency_degree(mat, p: int) -> int:
    """Least d with mat^d == 0.  Raises if mat is not nilpotent."""
    A = asfield(mat, p)
    n = A.shape[0]
    B = np.eye(n, dtype=np.int64)
    for d in range(n + 1):
        if not B.any():
            return d
        B = (B @ A) % p
    raise ValueError("matrix is not nilpotent")


def all_vectors(n: int, p: int) -> np.ndarray:
    """All p^n vectors of F_p^n, ordered lexicographically (row index = code)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(p)] * n, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def vector_codes(vecs, p: int) -> np.ndarray:
    """Lexicographic integer code of each row, matching all_vectors order."""
    V = asfield(vecs, p)
    n = V.shape[1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return V @ weights


def subspace_key(basis) -> bytes:
    """Hashable identity for a canonical (RREF) basis."""
    b = np.ascontiguousarray(basis, dtype=np.int64)
    return b.shape[0].to_bytes(4, "big") + b.tobytes()


def enumerate_subspaces(n: int, p: int, max_count: int | None = None):
    """Yield the RREF basis of every subspace of F_p^n, all dimensions.

    Deterministic order: by dimension, then pivot pattern, then free entries.
    """
    count = 0
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free_pos = [
                (r, c)
                for r in range(k)
                for c in range(pivots[r] + 1, n)
                if c not in pivots
            ]
            for vals in itertools.product(range(p), repeat=len(free_pos)):
                B = np.zeros((k, n), dtype=np.int64)
                for r, c in zip(range(k), pivots):
                    B[r, c] = 1
                for (r, c), v in zip(free_pos, vals):
                    B[r, c] = v
                count += 1
                if max_count is not None and count > max_count:
                    raise OverflowError("subspace enumeration over budget")
                yield B
