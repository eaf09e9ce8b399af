"""The geometry X(n, t, q) of subspaces skew to a fixed n-space.

Inside PG(n+t, q) fix the n-space pi: X_0 = ... = X_{t-1} = 0. Points of the
geometry are the (t-1)-subspaces skew to pi; lines are the t-subspaces
meeting pi in exactly one point; incidence is containment. Every point P is
coordinatised by an (n+1) x t matrix A_P: column j of A_P holds the last n+1
coordinates of the unique intersection point of P with the coordinate
(n+1)-space Sigma_j (the one with X_i = 0 for i < t, i != j), normalised to
have a 1 in position j. For a skew P the canonical rref basis is exactly
[I_t | A_P^T], so coordinatisation is a block read-off, and the matrix model
(see :mod:`fingeo.coset`) is reached without search.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import FingeoError
from .fields import GF, field_to_json
from .incidence import IncidenceStructure
from .projgeom import DEFAULT_BUDGET, ProjSpace, Subspace, intersect

__all__ = [
    "pi_subspace",
    "sigma_subspace",
    "point_of_matrix",
    "coordinatize_point",
    "line_at_infinity",
    "build_x",
]


def pi_subspace(n: int, t: int) -> Subspace:
    """The distinguished n-space X_0 = ... = X_{t-1} = 0."""
    basis = np.zeros((n + 1, n + t + 1), dtype=np.int64)
    basis[:, t:] = np.eye(n + 1, dtype=np.int64)
    return Subspace(basis)


def sigma_subspace(j: int, n: int, t: int) -> Subspace:
    """The coordinate (n+1)-space with X_i = 0 for i in {0..t-1} minus {j}."""
    if not 0 <= j < t:
        raise ValueError(f"need 0 <= j < t, got {j}")
    basis = np.zeros((n + 2, n + t + 1), dtype=np.int64)
    basis[0, j] = 1
    basis[1:, t:] = np.eye(n + 1, dtype=np.int64)
    return Subspace(basis)


def point_of_matrix(n: int, t: int, A: np.ndarray) -> Subspace:
    """The X-point with coordinate matrix A ((n+1) x t): basis [I_t | A^T]."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape != (n + 1, t):
        raise ValueError(f"expected a {(n + 1, t)} matrix, got {A.shape}")
    basis = np.zeros((t, n + t + 1), dtype=np.int64)
    basis[:, :t] = np.eye(t, dtype=np.int64)
    basis[:, t:] = A.T
    return Subspace(basis)


def coordinatize_point(n: int, t: int, P: Subspace) -> np.ndarray:
    """Recover A_P from an X-point.

    The rows of the canonical basis of a skew (t-1)-subspace are exactly its
    intersection points with the Sigma_j, so the matrix is the transposed
    right block; a non-skew subspace is rejected.
    """
    if P.basis.shape != (t, n + t + 1):
        raise FingeoError(
            f"expected a (t-1)-subspace of PG({n + t}, q) with t={t} basis rows"
        )
    if np.any(P.basis[:, :t] != np.eye(t, dtype=np.int64)):
        raise FingeoError("subspace is not skew to pi")
    return P.basis[:, t:].T.copy()


def line_at_infinity(field: GF, n: int, t: int, L: Subspace) -> tuple[int, ...]:
    """The unique point in which an X-line meets pi (full coordinates)."""
    inter = intersect(field, L, pi_subspace(n, t))
    if not inter.is_point:
        raise FingeoError(
            f"subspace meets pi in dimension {inter.pdim}, not a point"
        )
    return inter.point_tuple()


def build_x(
    n: int, t: int, field: GF, budget: int = DEFAULT_BUDGET
) -> IncidenceStructure:
    """Build X(n, t, q) by filtering the subspace lattice of PG(n+t, q).

    Point labels are the canonical rref bases of the (t-1)-subspaces (skew to
    pi), line labels those of the t-subspaces (meeting pi in one point), both
    in subspace enumeration order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if t < 1:
        raise ValueError("t must be >= 1")
    space = ProjSpace(n + t, field, budget=budget)
    pi = pi_subspace(n, t)
    full = n + t + 1

    points: list[Subspace] = []
    for P in space.subspaces(t - 1):
        stacked = np.vstack([P.basis, pi.basis])
        if linalg.rank(field, stacked) == full:
            points.append(P)

    lines: list[Subspace] = []
    for L in space.subspaces(t):
        stacked = np.vstack([L.basis, pi.basis])
        if linalg.rank(field, stacked) == full:
            lines.append(L)

    q = field.order
    expect_points = q ** (t * (n + 1))
    expect_lines = (q ** (n + 1) - 1) // (q - 1) * q ** (t * (n + 1)) // q**t
    if len(points) != expect_points or len(lines) != expect_lines:
        raise FingeoError(
            f"unexpected X({n},{t},{q}) sizes: {len(points)} points, {len(lines)} lines"
        )

    flags = []
    stack_buf = np.empty((len(points), 2 * t + 1, full), dtype=np.int64)
    for li, L in enumerate(lines):
        for pi_idx, P in enumerate(points):
            stack_buf[pi_idx, : t + 1] = L.basis
            stack_buf[pi_idx, t + 1 :] = P.basis
        ranks = linalg.rank_batch(field, stack_buf)
        for pi_idx in np.nonzero(ranks == t + 1)[0]:
            flags.append((int(pi_idx), li))

    return IncidenceStructure(
        "x",
        [P.key() for P in points],
        [L.key() for L in lines],
        flags,
        params={"n": n, "t": t, "q": q, "field": field_to_json(field)},
        metadata={
            "ambient_dim": n + t,
            "points_are": f"{t - 1}-subspaces skew to pi",
            "lines_are": f"{t}-subspaces meeting pi in one point",
        },
    )
