"""Point sets in projective space: the forbidden-plane-section test and the
closure recursion.

A point set K in PG(m, q) fails the plane test exactly when some plane meets
K either in two full lines, or in two full lines minus their common point.
The closure of a point set containing a frame alternates two saturation
steps until stable: collect every subspace spanned by a subset of the current
points, then replace the point set by every point that occurs as the exact
intersection of two collected subspaces. The result is the smallest
subgeometry (over a subfield, possibly the whole field) containing K.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .errors import BudgetExceededError, FingeoError
from .fields import GF, field_from_json, field_to_json
from .projgeom import DEFAULT_BUDGET, ProjSpace, Subspace, intersect, span

__all__ = [
    "PointSet",
    "has_property_star",
    "closure",
    "two_lines_fixture",
    "random_point_set",
]

SCHEMA_POINTSET = "fingeo.pointset/1"


class PointSet:
    """An immutable, sorted, normalised set of points of PG(dim, field)."""

    def __init__(self, space: ProjSpace, points):
        self.space = space
        norm = {space.normalize_point(p) for p in points}
        self.points = tuple(sorted(norm))
        if not self.points:
            raise ValueError("point set must be nonempty")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in set(self.points)

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and other.points == self.points
            and other.space.dim == self.space.dim
            and other.space.field.key == self.space.field.key
        )

    def __hash__(self):
        return hash((self.space.dim, self.space.field.key, self.points))

    def __repr__(self):
        return f"PointSet({len(self.points)} points in {self.space!r})"

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64)

    def spans_ambient(self) -> bool:
        return linalg.rank(self.space.field, self.as_array()) == self.space.dim + 1

    def contains_frame(self) -> bool:
        """Whether some dim+2 points of the set form a frame (every dim+1 of
        them independent). Backtracking over the points with rank pruning."""
        m1 = self.space.dim + 1
        arr = self.as_array()
        if len(arr) < m1 + 1:
            return False
        field = self.space.field

        chosen: list[int] = []

        def independent_prefix(idx: int) -> bool:
            rows = arr[chosen + [idx]]
            return linalg.rank(field, rows) == len(rows)

        def extend_simplex(start: int) -> bool:
            if len(chosen) == m1:
                # need one more point off every facet of the chosen simplex
                basis = arr[chosen]
                for j in range(len(arr)):
                    if j in chosen:
                        continue
                    lam = linalg.solve_left(field, basis, arr[j])
                    if lam is not None and np.all(lam != 0):
                        return True
                return False
            for idx in range(start, len(arr)):
                if independent_prefix(idx):
                    chosen.append(idx)
                    if extend_simplex(idx + 1):
                        return True
                    chosen.pop()
            return False

        return extend_simplex(0)

    def to_json_obj(self) -> dict:
        return {
            "schema": SCHEMA_POINTSET,
            "dim": self.space.dim,
            "field": field_to_json(self.space.field),
            "points": [list(p) for p in self.points],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PointSet":
        if obj.get("schema") != SCHEMA_POINTSET:
            raise FingeoError(f"unexpected schema {obj.get('schema')!r}")
        field = field_from_json(obj["field"])
        space = ProjSpace(int(obj["dim"]), field)
        return cls(space, [tuple(int(c) for c in p) for p in obj["points"]])


def _lines_with_many_points(space: ProjSpace, pts: list[tuple[int, ...]], minimum: int):
    """Distinct lines spanned by point pairs that carry at least ``minimum``
    of the given points, as (Subspace, frozenset_of_points) pairs."""
    field = space.field
    seen: dict = {}
    arrs = [np.array(p, dtype=np.int64) for p in pts]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            L = Subspace.from_rows(field, np.vstack([arrs[i], arrs[j]]))
            if L in seen:
                continue
            on_line = frozenset(
                tuple(int(c) for c in row) for row in L.points(field)
            )
            seen[L] = on_line
    out = []
    ptset = set(pts)
    for L, on_line in seen.items():
        if len(on_line & ptset) >= minimum:
            out.append((L, on_line))
    return out


def has_property_star(ps: PointSet, with_witness: bool = False):
    """Test the forbidden plane sections.

    Returns True/False, or (flag, witness) when ``with_witness`` is set; the
    witness names the plane and the two lines of a violating section, else
    None.
    """
    space = ps.space
    field = space.field
    q = field.order
    if space.dim < 2:
        return (True, None) if with_witness else True
    ptset = set(ps.points)
    for plane in space.subspaces(2):
        in_plane = [
            p for p in ps.points if plane.contains_point(field, np.array(p))
        ]
        if len(in_plane) not in (2 * q, 2 * q + 1):
            continue
        cands = _lines_with_many_points(space, in_plane, q)
        section = set(in_plane)
        for a in range(len(cands)):
            for b in range(a + 1, len(cands)):
                L1, set1 = cands[a]
                L2, set2 = cands[b]
                common = intersect(field, L1, L2)
                if not common.is_point:
                    continue
                cp = common.point_tuple()
                union = set1 | set2
                if section == union or section == union - {cp}:
                    witness = {
                        "plane": plane.key(),
                        "line1": L1.key(),
                        "line2": L2.key(),
                        "missing_common_point": section != union,
                    }
                    return (False, witness) if with_witness else False
    return (True, None) if with_witness else True


def closure(ps: PointSet, budget: int = DEFAULT_BUDGET) -> PointSet:
    """Closure of a point set containing a frame: alternate span collection
    and exact-point intersections until stable.

    The ambient space must have dimension >= 2 for the recursion; dimension 1
    is handled by an extension of it (see _closure_on_line): three points of
    a projective line determine a unique smallest subline, computed by moving
    them to a standard frame and collecting the subfield their affine
    coordinates generate.
    """
    space = ps.space
    if space.dim < 1:
        raise ValueError("ambient dimension must be >= 1")
    if space.dim == 1:
        return _closure_on_line(ps)
    if not ps.contains_frame():
        raise FingeoError("closure requires a point set containing a frame")
    field = space.field
    current = set(ps.points)
    while True:
        spans: dict[Subspace, None] = {}
        frontier = []
        for p in current:
            s = space.point_subspace(p)
            if s not in spans:
                spans[s] = None
                frontier.append(s)
        while frontier:
            s = frontier.pop()
            for p in current:
                s2 = span(field, s, space.point_subspace(p))
                if s2 not in spans:
                    if len(spans) > budget:
                        raise BudgetExceededError("closure span collection over budget")
                    spans[s2] = None
                    frontier.append(s2)
        subs = list(spans)
        nxt: set[tuple[int, ...]] = set()
        for i in range(len(subs)):
            for j in range(i, len(subs)):
                inter = intersect(field, subs[i], subs[j])
                if inter.is_point:
                    nxt.add(inter.point_tuple())
        if nxt == current:
            return PointSet(space, nxt)
        current = nxt


def _closure_on_line(ps: PointSet) -> PointSet:
    space = ps.space
    field = space.field
    if len(ps) < 3:
        raise FingeoError("closure on a line requires at least 3 points (a frame)")
    pts = [np.array(p, dtype=np.int64) for p in ps.points]
    v0, v1, v2 = pts[0], pts[1], pts[2]
    lam = linalg.solve_left(field, np.vstack([v0, v1]), v2)
    if lam is None or np.any(lam == 0):
        raise FingeoError("degenerate frame on line")
    B = field.mul(lam[:, None], np.vstack([v0, v1]))
    Binv = linalg.mat_inv(field, B)
    # transformed points: v0 -> (1,0), v1 -> (0,1), v2 -> (1,1)
    affine_codes = []
    for p in pts:
        w = space.normalize_point(linalg.vec_mat(field, p, Binv))
        if w[0] == 0:
            continue  # the point at infinity of the standard frame
        affine_codes.append(w[1])
    # subfield generated by the affine coordinates: lcm of their degrees
    deg = 1
    for x in affine_codes:
        d = 1
        while int(field.frobenius(x, d)) != int(x):
            d += 1
        deg = _lcm(deg, d)
    subcodes = field.subfield_codes(deg)
    out = []
    inf = linalg.vec_mat(field, np.array([0, 1], dtype=np.int64), B)
    out.append(space.normalize_point(inf))
    for x in subcodes:
        w = linalg.vec_mat(field, np.array([1, int(x)], dtype=np.int64), B)
        out.append(space.normalize_point(w))
    return PointSet(space, out)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def two_lines_fixture(space: ProjSpace, minus_point: bool = False) -> PointSet:
    """Two full lines of a plane through a common point, optionally with the
    common point removed. Always fails the plane test."""
    if space.dim < 2:
        raise ValueError("need ambient dimension >= 2")
    field = space.field
    m1 = space.dim + 1
    e = np.eye(m1, dtype=np.int64)
    L1 = Subspace.from_rows(field, e[[0, 1]])
    L2 = Subspace.from_rows(field, e[[0, 2]])
    pts = [tuple(int(c) for c in row) for row in L1.points(field)]
    pts += [tuple(int(c) for c in row) for row in L2.points(field)]
    pts = set(pts)
    if minus_point:
        pts.discard(tuple(int(c) for c in e[0]))
    return PointSet(space, pts)


def random_point_set(space: ProjSpace, size: int, rng: np.random.Generator) -> PointSet:
    pts = space.points()
    if size > len(pts):
        raise ValueError("not enough points")
    idx = rng.choice(len(pts), size=size, replace=False)
    return PointSet(space, [tuple(int(c) for c in pts[i]) for i in idx])
