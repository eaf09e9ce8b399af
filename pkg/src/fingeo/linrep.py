"""Linear representations: affine space joined by pencils through a point set
at infinity.

``build_linrep`` realises T*_n(K) for a point set K in the hyperplane at
infinity of PG(n+1, q): points are the affine points (last coordinate 1),
lines are the affine lines whose direction is a point of K. The generalised
variant ``build_gen_linrep`` replaces points of K by pairwise disjoint
(t-1)-subspaces at infinity and lines by the t-spaces through them.

Affine points are enumerated in ascending lexicographic order of their
coordinate tuples, which coincides with ascending base-q integer packing of
the coordinates (most significant first); line labels are
(infinity label, least affine point).
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceededError, FingeoError
from .fields import GF, field_to_json
from .incidence import IncidenceStructure
from .projgeom import DEFAULT_BUDGET, ProjSpace, Subspace, _all_vectors

__all__ = ["LinRepSpec", "build_linrep", "build_gen_linrep"]


class LinRepSpec:
    """Parameters of a linear representation: ambient affine dimension n+1,
    the (big) coordinate field, and the points at infinity."""

    def __init__(self, n: int, field: GF, infinity_points):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.field = field
        space = ProjSpace(n, field)
        self.infinity_points = tuple(
            sorted(space.normalize_point(p) for p in infinity_points)
        )
        if len(set(self.infinity_points)) != len(self.infinity_points):
            raise ValueError("infinity points must be distinct")
        if not self.infinity_points:
            raise ValueError("need at least one point at infinity")

    def __repr__(self):
        return (
            f"LinRepSpec(n={self.n}, order={self.field.order}, "
            f"k={len(self.infinity_points)})"
        )


def _affine_points(q: int, width: int, budget: int) -> np.ndarray:
    if q**width > budget:
        raise BudgetExceededError(
            f"{q**width} affine points exceed budget {budget}"
        )
    return _all_vectors(q, width)


def build_linrep(spec: LinRepSpec, budget: int = DEFAULT_BUDGET) -> IncidenceStructure:
    """The incidence structure T*_n(K) for K = spec.infinity_points."""
    field = spec.field
    q = field.order
    n = spec.n
    coords = _affine_points(q, n + 1, budget)
    npts = coords.shape[0]
    weights = q ** np.arange(n, -1, -1, dtype=np.int64)
    labels = [tuple(int(c) for c in row) + (1,) for row in coords]

    lines = []
    flags = []
    mus = np.arange(q, dtype=np.int64)
    for u in spec.infinity_points:
        d = np.array(u, dtype=np.int64)
        offsets = field.mul(mus[:, None], d[None, :])
        covered = np.zeros(npts, dtype=bool)
        inf_label = tuple(int(c) for c in u) + (0,)
        for i in range(npts):
            if covered[i]:
                continue
            members = field.add(coords[i][None, :], offsets)
            idx = members @ weights
            covered[idx] = True
            li = len(lines)
            lines.append((inf_label, labels[i]))
            for j in idx:
                flags.append((int(j), li))

    meta = {
        "affine_points": npts,
        "lines_per_infinity_point": q**n,
        "infinity_points": [list(u) for u in spec.infinity_points],
    }
    struct = IncidenceStructure(
        "linrep",
        labels,
        lines,
        flags,
        params={"n": n, "order": q, "k_size": len(spec.infinity_points),
                "field": field_to_json(field)},
        metadata=meta,
    )
    return struct


def build_gen_linrep(
    t: int, field: GF, spread, budget: int = DEFAULT_BUDGET
) -> IncidenceStructure:
    """Generalised linear representation for a collection of pairwise disjoint
    (t-1)-subspaces at infinity.

    The subspaces are given in the intrinsic coordinates of the infinity
    hyperplane (ambient dimension m); the structure lives in PG(m+1, q) with
    the hyperplane X_{m+1} = 0. Lines of the structure are labelled by the
    embedded rref basis of their infinity subspace plus their least affine
    point; each subspace carries q**(m+1-t) lines.
    """
    spread = list(spread)
    if not spread:
        raise ValueError("need at least one subspace at infinity")
    m = spread[0].ambient_dim
    q = field.order
    from . import linalg

    for D in spread:
        if not isinstance(D, Subspace):
            raise TypeError("spread elements must be Subspace instances")
        if D.ambient_dim != m:
            raise ValueError("spread elements must share one ambient space")
        if D.pdim != t - 1:
            raise ValueError(
                f"spread element has projective dimension {D.pdim}, expected {t - 1}"
            )
    for i in range(len(spread)):
        for j in range(i + 1, len(spread)):
            stacked = np.vstack([spread[i].basis, spread[j].basis])
            if linalg.rank(field, stacked) != 2 * t:
                raise FingeoError("subspaces at infinity must be pairwise disjoint")

    coords = _affine_points(q, m + 1, budget)
    npts = coords.shape[0]
    weights = q ** np.arange(m, -1, -1, dtype=np.int64)
    labels = [tuple(int(c) for c in row) + (1,) for row in coords]

    combos = _all_vectors(q, t)
    lines = []
    flags = []
    for D in spread:
        basis = D.basis
        offsets = np.zeros((combos.shape[0], m + 1), dtype=np.int64)
        for r in range(t):
            offsets = field.add(
                offsets, field.mul(combos[:, r][:, None], basis[r][None, :])
            )
        emb = tuple(tuple(int(c) for c in row) + (0,) for row in basis)
        covered = np.zeros(npts, dtype=bool)
        for i in range(npts):
            if covered[i]:
                continue
            members = field.add(coords[i][None, :], offsets)
            idx = members @ weights
            covered[idx] = True
            li = len(lines)
            lines.append((emb, labels[i]))
            for j in idx:
                flags.append((int(j), li))

    meta = {
        "affine_points": npts,
        "lines_per_subspace": q ** (m + 1 - t),
        "spread_size": len(spread),
    }
    return IncidenceStructure(
        "gen_linrep",
        labels,
        lines,
        flags,
        params={"m": m, "t": t, "q": q, "field": field_to_json(field)},
        metadata=meta,
    )
