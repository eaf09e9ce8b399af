"""Dense linear algebra over table-backed finite fields.

Matrices are int64 numpy arrays of element codes; every function takes the
field first. Row reduction and batched rank go through the kernels in
:mod:`fingeo.kernels`.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .fields import GF

__all__ = [
    "mat",
    "mat_mul",
    "mat_vec",
    "vec_mat",
    "mat_add",
    "mat_sub",
    "mat_neg",
    "scalar_mul",
    "mat_pow",
    "outer",
    "rref",
    "rank",
    "rank_batch",
    "mat_inv",
    "solve_left",
    "identity",
]


def mat(rows) -> np.ndarray:
    return np.array(rows, dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, k][:, None], B[k, :][None, :]))
    return out


def mat_vec(F: GF, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.zeros(A.shape[0], dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, k], v[k]))
    return out


def vec_mat(F: GF, v, A: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    out = np.zeros(A.shape[1], dtype=np.int64)
    for k in range(A.shape[0]):
        out = F.add(out, F.mul(v[k], A[k, :]))
    return out


def mat_add(F: GF, A, B) -> np.ndarray:
    return F.add(A, B)


def mat_sub(F: GF, A, B) -> np.ndarray:
    return F.sub(A, B)


def mat_neg(F: GF, A) -> np.ndarray:
    return F.neg(A)


def scalar_mul(F: GF, c: int, A) -> np.ndarray:
    return F.mul(c, A)


def outer(F: GF, u, v) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return F.mul(u[:, None], v[None, :])


def mat_pow(F: GF, A: np.ndarray, k: int) -> np.ndarray:
    out = identity(A.shape[0])
    x = A
    while k:
        if k & 1:
            out = mat_mul(F, out, x)
        x = mat_mul(F, x, x)
        k >>= 1
    return out


def rref(F: GF, A: np.ndarray) -> tuple[np.ndarray, int]:
    """Reduced row echelon form (a fresh array) and rank."""
    m = np.ascontiguousarray(A, dtype=np.int64).copy()
    if m.size == 0:
        return m, 0
    r = kernels.rref(m, F.add_table, F.mul_table, F.neg_table, F.inv_table)
    return m, int(r)


def rank(F: GF, A: np.ndarray) -> int:
    return rref(F, A)[1]


def rank_batch(F: GF, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices (int64[k, rows, cols])."""
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    out = np.empty(mats.shape[0], dtype=np.int64)
    if mats.shape[0]:
        kernels.rank_batch(mats, F.add_table, F.mul_table, F.neg_table, F.inv_table, out)
    return out


def mat_inv(F: GF, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("matrix must be square")
    aug = np.concatenate([np.asarray(A, dtype=np.int64), identity(n)], axis=1)
    red, r = rref(F, aug)
    if r < n or np.any(red[:, :n] != identity(n)):
        raise ValueError("matrix is singular")
    return red[:, n:].copy()


def solve_left(F: GF, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of x . A = b (rows of A combined by x), or None."""
    At = np.ascontiguousarray(A.T, dtype=np.int64)
    bt = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    aug = np.concatenate([At, bt], axis=1)
    red, _ = rref(F, aug)
    n = A.shape[0]
    x = np.zeros(n, dtype=np.int64)
    for row in red:
        nz = np.nonzero(row)[0]
        if len(nz) == 0:
            continue
        piv = nz[0]
        if piv == n:
            return None
        x[piv] = row[n]
    return x
