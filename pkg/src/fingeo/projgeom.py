"""Projective spaces PG(m, q): points, subspaces, spans, meets, frames,
canonical subgeometries.

Points are length-(m+1) coordinate vectors of field codes, normalised so the
first nonzero coordinate is 1; their identity is the coordinate tuple.
Subspaces are stored as reduced-row-echelon bases, which makes them canonical
and hashable. Point enumeration is ascending lexicographic on the normalised
coordinate tuple; subspace enumeration walks pivot-column combinations in
lexicographic order and fills the free entries as an ascending base-q counter
(row-major free slots, first slot most significant). Both orders are stable
across runs and documented here because exports and labels rely on them.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from . import linalg
from .errors import BudgetExceededError
from .fields import GF

__all__ = [
    "DEFAULT_BUDGET",
    "ProjSpace",
    "Subspace",
    "gaussian_binomial",
    "span",
    "span_rows",
    "intersect",
    "subspace_contains",
    "is_frame",
    "standard_frame",
    "subgeometry_points",
]

DEFAULT_BUDGET = 2_000_000


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Gaussian binomial [m choose k]_q, the number of k-dimensional linear
    subspaces of an m-dimensional vector space over GF(q); equivalently the
    number of (k-1)-dimensional projective subspaces of PG(m-1, q)."""
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (k - i) - 1
    if num % den:
        raise ArithmeticError("gaussian binomial did not divide out")
    return num // den


class Subspace:
    """A projective subspace held as its canonical rref basis."""

    __slots__ = ("basis", "_key")

    def __init__(self, basis: np.ndarray):
        b = np.ascontiguousarray(basis, dtype=np.int64)
        b.setflags(write=False)
        self.basis = b
        self._key = (b.shape[1], b.tobytes())

    @classmethod
    def from_rows(cls, field: GF, rows) -> "Subspace":
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(1, -1)
        red, r = linalg.rref(field, arr)
        return cls(red[:r])

    @classmethod
    def empty(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((0, ambient_dim + 1), dtype=np.int64))

    @property
    def pdim(self) -> int:
        """Projective dimension: -1 for the empty subspace, 0 for a point."""
        return self.basis.shape[0] - 1

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1] - 1

    @property
    def is_empty(self) -> bool:
        return self.basis.shape[0] == 0

    @property
    def is_point(self) -> bool:
        return self.basis.shape[0] == 1

    def point_tuple(self) -> tuple[int, ...]:
        if not self.is_point:
            raise ValueError(f"subspace of projective dimension {self.pdim} is not a point")
        return tuple(int(c) for c in self.basis[0])

    def key(self) -> tuple:
        return tuple(tuple(int(c) for c in row) for row in self.basis)

    def points(self, field: GF) -> np.ndarray:
        """All normalised point vectors on this subspace, lex ascending."""
        r = self.basis.shape[0]
        q = field.order
        if r == 0:
            return np.zeros((0, self.basis.shape[1]), dtype=np.int64)
        coeffs = _all_vectors(q, r)
        pts = np.zeros((coeffs.shape[0], self.basis.shape[1]), dtype=np.int64)
        for i in range(r):
            pts = field.add(pts, field.mul(coeffs[:, i][:, None], self.basis[i][None, :]))
        pts = pts[_normalized_mask(pts)]
        order = np.lexsort(pts.T[::-1])
        return pts[order]

    def contains_point(self, field: GF, vec) -> bool:
        stacked = np.vstack([self.basis, np.asarray(vec, dtype=np.int64)])
        return linalg.rank(field, stacked) == self.basis.shape[0]

    def __eq__(self, other):
        return isinstance(other, Subspace) and other._key == self._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(pdim={self.pdim}, ambient={self.ambient_dim})"


def _all_vectors(q: int, width: int) -> np.ndarray:
    """All q**width code vectors, ascending lex (first coordinate most
    significant)."""
    n = q**width
    codes = np.arange(n, dtype=np.int64)
    out = np.empty((n, width), dtype=np.int64)
    for j in range(width):
        out[:, j] = (codes // q ** (width - 1 - j)) % q
    return out


def _normalized_mask(vecs: np.ndarray) -> np.ndarray:
    nz = vecs != 0
    has = nz.any(axis=1)
    first = nz.argmax(axis=1)
    lead = vecs[np.arange(len(vecs)), first]
    return has & (lead == 1)


class ProjSpace:
    """PG(dim, field) with cached point enumeration."""

    def __init__(self, dim: int, field: GF, budget: int = DEFAULT_BUDGET):
        if dim < 0:
            raise ValueError("projective dimension must be >= 0")
        self.dim = dim
        self.field = field
        self.budget = budget
        self._points: np.ndarray | None = None
        self._point_index: dict[tuple[int, ...], int] | None = None

    @property
    def n_points(self) -> int:
        q = self.field.order
        return (q ** (self.dim + 1) - 1) // (q - 1)

    def n_subspaces(self, k: int) -> int:
        return gaussian_binomial(self.dim + 1, k + 1, self.field.order)

    def points(self) -> np.ndarray:
        if self._points is None:
            q = self.field.order
            if self.n_points > self.budget or q ** (self.dim + 1) > 8 * self.budget:
                raise BudgetExceededError(
                    f"PG({self.dim},{q}) has {self.n_points} points, budget {self.budget}"
                )
            vecs = _all_vectors(q, self.dim + 1)
            pts = vecs[_normalized_mask(vecs)]
            pts.setflags(write=False)
            self._points = pts
        return self._points

    def point_index(self) -> dict[tuple[int, ...], int]:
        if self._point_index is None:
            self._point_index = {
                tuple(int(c) for c in p): i for i, p in enumerate(self.points())
            }
        return self._point_index

    def normalize_point(self, vec) -> tuple[int, ...]:
        v = np.asarray(vec, dtype=np.int64)
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            raise ValueError("zero vector does not represent a point")
        lead = v[nz[0]]
        if lead != 1:
            v = self.field.div(v, lead)
        return tuple(int(c) for c in v)

    def point_subspace(self, vec) -> Subspace:
        return Subspace(np.array([self.normalize_point(vec)], dtype=np.int64))

    def subspaces(self, k: int):
        """Yield every projective k-subspace as a canonical Subspace,
        Schubert-cell order (see module docstring)."""
        if not 0 <= k <= self.dim:
            raise ValueError(f"need 0 <= k <= dim, got {k}")
        total = self.n_subspaces(k)
        if total > self.budget:
            raise BudgetExceededError(
                f"{total} subspaces of dimension {k} exceed budget {self.budget}"
            )
        q = self.field.order
        m1 = self.dim + 1
        r = k + 1
        for pivots in combinations(range(m1), r):
            free: list[tuple[int, int]] = []
            pivset = set(pivots)
            for i in range(r):
                for j in range(pivots[i] + 1, m1):
                    if j not in pivset:
                        free.append((i, j))
            fills = _all_vectors(q, len(free))
            base = np.zeros((r, m1), dtype=np.int64)
            for i, pc in enumerate(pivots):
                base[i, pc] = 1
            for fill in fills:
                mat = base.copy()
                for (i, j), val in zip(free, fill):
                    mat[i, j] = val
                yield Subspace(mat)

    def whole(self) -> Subspace:
        return Subspace(np.eye(self.dim + 1, dtype=np.int64))

    def __repr__(self):
        return f"PG({self.dim}, {self.field.order})"


def span(field: GF, a: Subspace, b: Subspace) -> Subspace:
    return Subspace.from_rows(field, np.vstack([a.basis, b.basis]))


def span_rows(field: GF, rows) -> Subspace:
    return Subspace.from_rows(field, rows)


def intersect(field: GF, a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus intersection of two subspaces (possibly empty)."""
    m1 = a.basis.shape[1]
    ra, rb = a.basis.shape[0], b.basis.shape[0]
    if ra == 0 or rb == 0:
        return Subspace.empty(m1 - 1)
    block = np.zeros((ra + rb, 2 * m1), dtype=np.int64)
    block[:ra, :m1] = a.basis
    block[:ra, m1:] = a.basis
    block[ra:, :m1] = b.basis
    red, r = linalg.rref(field, block)
    red = red[:r]
    zero_left = ~red[:, :m1].any(axis=1)
    inter = red[zero_left, m1:]
    return Subspace.from_rows(field, inter) if inter.size else Subspace.empty(m1 - 1)


def subspace_contains(field: GF, big: Subspace, small: Subspace) -> bool:
    if small.is_empty:
        return True
    stacked = np.vstack([big.basis, small.basis])
    return linalg.rank(field, stacked) == big.basis.shape[0]


def is_frame(space: ProjSpace, points) -> bool:
    """Whether the given dim+2 points form a frame: every dim+1 of them are
    projectively independent."""
    arr = np.asarray(points, dtype=np.int64)
    m1 = space.dim + 1
    if arr.ndim != 2 or arr.shape[1] != m1:
        raise ValueError(f"expected points with {m1} coordinates")
    if arr.shape[0] != space.dim + 2:
        raise ValueError(f"a frame of PG({space.dim}, q) has {space.dim + 2} points")
    for skip in range(arr.shape[0]):
        sub = np.delete(arr, skip, axis=0)
        if linalg.rank(space.field, sub) != m1:
            return False
    return True


def standard_frame(space: ProjSpace) -> np.ndarray:
    m1 = space.dim + 1
    frame = np.zeros((space.dim + 2, m1), dtype=np.int64)
    frame[:m1] = np.eye(m1, dtype=np.int64)
    frame[m1] = 1
    return frame


def subgeometry_points(
    space: ProjSpace, sub_order: int, frame: np.ndarray | None = None
) -> list[tuple[int, ...]]:
    """Points of the PG(dim, sub_order) subgeometry determined by a frame.

    With the standard frame these are exactly the points whose normalised
    coordinates all lie in the subfield of the given order (the fixed points
    of the matching Frobenius power); a general frame transports that set by
    the change of coordinates taking the standard frame to it.
    """
    field = space.field
    p = field.p
    d = round(math.log(sub_order, p))
    if p**d != sub_order or field.h % d != 0:
        raise ValueError(f"order {sub_order} is not a subfield order of {field.order}")
    subcodes = field.subfield_codes(d)
    mask = np.isin(space.points(), subcodes).all(axis=1)
    pts = space.points()[mask]
    if frame is None:
        return [tuple(int(c) for c in row) for row in pts]
    frame = np.asarray(frame, dtype=np.int64)
    if not is_frame(space, frame):
        raise ValueError("the given points do not form a frame")
    m1 = space.dim + 1
    simplex = frame[:m1]
    unit = frame[m1]
    lam = linalg.solve_left(field, simplex, unit)
    if lam is None or np.any(lam == 0):
        raise ValueError("degenerate frame")
    B = field.mul(lam[:, None], simplex)
    out = []
    for row in pts:
        img = linalg.vec_mat(field, row, B)
        out.append(space.normalize_point(img))
    return sorted(out)
