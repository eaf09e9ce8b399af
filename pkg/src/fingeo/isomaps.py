"""Explicit maps between the models, field reduction, and the Segre locus.

The chain realised here: an X-point P goes to its coordinate matrix A_P
(``x_to_coset``); a matrix goes to an affine point of the linear
representation by packing its rows into extension-field coordinates
(``coset_to_linrep``); composing the two exhibits X(n, t, q) as T*_n of the
canonical PG(n, q) inside PG(n, q^t). Field reduction sends points of
PG(n, q^t) to (t-1)-subspaces of PG(t(n+1)-1, q) by expanding coordinates
over a basis, and ``barlotti_cofman`` matches the linear representation of a
point set with the generalised linear representation of its reduction.
"""

from __future__ import annotations

import numpy as np

from .coset import build_coset_geometry, matrix_code
from .errors import VerificationError
from .fields import GF, CompanionAlgebra
from .incidence import IncidenceStructure
from .linrep import LinRepSpec, build_gen_linrep, build_linrep
from .projgeom import DEFAULT_BUDGET, ProjSpace, Subspace
from .xgeom import build_x, coordinatize_point, line_at_infinity

__all__ = [
    "GeometryMap",
    "verify_map",
    "induce_line_map",
    "x_to_coset",
    "coset_to_linrep",
    "x_to_linrep",
    "field_reduce",
    "reduction_spread",
    "segre_membership",
    "barlotti_cofman",
]


class GeometryMap:
    """A point and line bijection between two incidence structures."""

    def __init__(self, name, source, target, point_map, line_map):
        self.name = str(name)
        self.source = source
        self.target = target
        self.point_map = np.asarray(point_map, dtype=np.int64)
        self.line_map = np.asarray(line_map, dtype=np.int64)
        self.verified = False
        self.report: dict | None = None

    def verify(self) -> dict:
        """Exhaustively check bijectivity and flag preservation; since flag
        counts are compared, preservation in the forward direction implies the
        inverse map preserves flags as well."""
        s, t = self.source, self.target
        report: dict = {"name": self.name, "ok": False}
        if s.n_points != t.n_points or s.n_lines != t.n_lines:
            report["reason"] = "size mismatch"
            self.report = report
            return report
        if len(self.point_map) != s.n_points or len(self.line_map) != s.n_lines:
            report["reason"] = "map length mismatch"
            self.report = report
            return report
        if sorted(self.point_map.tolist()) != list(range(t.n_points)):
            report["reason"] = "point map is not a bijection"
            self.report = report
            return report
        if sorted(self.line_map.tolist()) != list(range(t.n_lines)):
            report["reason"] = "line map is not a bijection"
            self.report = report
            return report
        if s.n_flags != t.n_flags:
            report["reason"] = "flag count mismatch"
            self.report = report
            return report
        tflags = t.flag_set()
        for p, l in s.flags:
            if (int(self.point_map[p]), int(self.line_map[l])) not in tflags:
                report["reason"] = "flag not preserved"
                report["witness"] = {
                    "source_flag": [p, l],
                    "image": [int(self.point_map[p]), int(self.line_map[l])],
                }
                self.report = report
                return report
        report["ok"] = True
        report["points"] = s.n_points
        report["lines"] = s.n_lines
        report["flags"] = s.n_flags
        self.verified = True
        self.report = report
        return report

    @staticmethod
    def compose(first: "GeometryMap", second: "GeometryMap") -> "GeometryMap":
        if first.target != second.source:
            raise VerificationError("maps do not chain: target != source")
        return GeometryMap(
            f"{second.name}.{first.name}",
            first.source,
            second.target,
            second.point_map[first.point_map],
            second.line_map[first.line_map],
        )

    def to_json_obj(self) -> dict:
        return {
            "schema": "fingeo.map/1",
            "name": self.name,
            "source": {"kind": self.source.kind, "points": self.source.n_points,
                       "lines": self.source.n_lines},
            "target": {"kind": self.target.kind, "points": self.target.n_points,
                       "lines": self.target.n_lines},
            "point_map": self.point_map.tolist(),
            "line_map": self.line_map.tolist(),
            "verified": bool(self.verified),
        }

    def __repr__(self):
        return (
            f"GeometryMap({self.name!r}, {self.source.kind}->{self.target.kind}, "
            f"verified={self.verified})"
        )


def verify_map(m: GeometryMap) -> dict:
    return m.verify()


def induce_line_map(
    source: IncidenceStructure, target: IncidenceStructure, point_map
) -> np.ndarray:
    """The line bijection forced by a point map: each source line goes to the
    unique target line carrying exactly the image point set."""
    point_map = np.asarray(point_map, dtype=np.int64)
    by_pointset = {ps: i for i, ps in enumerate(target.line_pointsets())}
    out = np.empty(source.n_lines, dtype=np.int64)
    for l in range(source.n_lines):
        image = frozenset(int(point_map[p]) for p in source.points_of_line(l))
        hit = by_pointset.get(image)
        if hit is None:
            raise VerificationError(
                f"image of line {l} is not a line of the target"
            )
        out[l] = hit
    return out


def x_to_coset(
    n: int,
    t: int,
    field: GF,
    xs: IncidenceStructure | None = None,
    cs: IncidenceStructure | None = None,
    budget: int = DEFAULT_BUDGET,
) -> GeometryMap:
    """Coordinatisation as an isomorphism: X-point P to the matrix A_P, the
    X-line through direction b to the coset line of L_b."""
    if xs is None:
        xs = build_x(n, t, field, budget=budget)
    if cs is None:
        cs = build_coset_geometry(n, t, field, budget=budget)
    point_map = np.empty(xs.n_points, dtype=np.int64)
    for i, label in enumerate(xs.points):
        P = Subspace(np.array(label, dtype=np.int64))
        A = coordinatize_point(n, t, P)
        code = matrix_code(field, A)
        want = tuple(tuple(int(c) for c in row) for row in A)
        if cs.points[code] != want:
            raise VerificationError("matrix code order does not match target labels")
        point_map[i] = code
    line_map = induce_line_map(xs, cs, point_map)
    # the direction of each X-line must match the direction label of its image
    for l, label in enumerate(xs.lines):
        L = Subspace(np.array(label, dtype=np.int64))
        inf = line_at_infinity(field, n, t, L)
        b = inf[t:]
        if cs.lines[int(line_map[l])][0] != b:
            raise VerificationError(
                f"line {l}: infinity direction {b} does not match coset label"
            )
    m = GeometryMap("x_to_coset", xs, cs, point_map, line_map)
    rep = m.verify()
    if not rep["ok"]:
        raise VerificationError(f"x_to_coset failed verification: {rep}")
    return m


def coset_to_linrep(
    n: int,
    t: int,
    alg: CompanionAlgebra,
    cs: IncidenceStructure | None = None,
    budget: int = DEFAULT_BUDGET,
) -> tuple[GeometryMap, IncidenceStructure]:
    """Row packing as an isomorphism onto the linear representation of the
    canonical PG(n, q) inside PG(n, q^t).

    A matrix point M becomes the affine point (y_0, ..., y_n, 1) with
    y_i the extension-field packing of row i; the coset of L_b becomes the
    affine line with direction b (whose coordinates are base-field codes, so
    the infinity label is literally b extended by 0).
    """
    field = alg.base
    ext = alg.ext
    q = field.order
    if cs is None:
        cs = build_coset_geometry(n, t, field, budget=budget)
    directions = [tuple(int(c) for c in b) for b in ProjSpace(n, field).points()]
    spec = LinRepSpec(n, ext, directions)
    target = build_linrep(spec, budget=budget)

    ext_weights = ext.order ** np.arange(n, -1, -1, dtype=np.int64)
    point_map = np.empty(cs.n_points, dtype=np.int64)
    for i, label in enumerate(cs.points):
        ys = [alg.row_to_ext(row) for row in label]
        idx = int(np.dot(np.array(ys, dtype=np.int64), ext_weights))
        want = tuple(ys) + (1,)
        if target.points[idx] != want:
            raise VerificationError("affine packing does not match target labels")
        point_map[i] = idx
    line_map = induce_line_map(cs, target, point_map)
    for l, (b, _rep) in enumerate(cs.lines):
        inf_label = target.lines[int(line_map[l])][0]
        if inf_label != tuple(b) + (0,):
            raise VerificationError(
                f"coset direction {b} maps to line with infinity {inf_label}"
            )
    m = GeometryMap("coset_to_linrep", cs, target, point_map, line_map)
    rep = m.verify()
    if not rep["ok"]:
        raise VerificationError(f"coset_to_linrep failed verification: {rep}")
    return m, target


def x_to_linrep(
    n: int, t: int, alg: CompanionAlgebra, budget: int = DEFAULT_BUDGET
) -> dict:
    """The composite isomorphism X(n, t, q) -> coset model -> T*_n(PG(n, q)),
    with all three structures and both partial maps."""
    field = alg.base
    xs = build_x(n, t, field, budget=budget)
    cs = build_coset_geometry(n, t, field, budget=budget)
    m1 = x_to_coset(n, t, field, xs=xs, cs=cs, budget=budget)
    m2, linrep_struct = coset_to_linrep(n, t, alg, cs=cs, budget=budget)
    comp = GeometryMap.compose(m1, m2)
    rep = comp.verify()
    if not rep["ok"]:
        raise VerificationError(f"composite map failed verification: {rep}")
    return {
        "x": xs,
        "coset": cs,
        "linrep": linrep_struct,
        "x_to_coset": m1,
        "coset_to_linrep": m2,
        "composite": comp,
    }


# -- field reduction and the Segre locus -----------------------------------


def field_reduce(alg: CompanionAlgebra, point) -> Subspace:
    """Field reduction of a point of PG(n, q^t): the (t-1)-subspace of
    PG(t(n+1)-1, q) spanned by the base expansions of alpha^k * point."""
    ext = alg.ext
    base = alg.base
    t = alg.t
    u = np.asarray(point, dtype=np.int64)
    n1 = len(u)
    alpha = base.order if t > 1 else 1
    rows = np.empty((t, t * n1), dtype=np.int64)
    for k in range(t):
        lam = ext.pow(alpha, k) if t > 1 else 1
        scaled = ext.mul(lam, u)
        for i in range(n1):
            rows[k, i * t : (i + 1) * t] = alg.ext_to_row(int(scaled[i]))
    return Subspace.from_rows(base, rows)


def reduction_spread(alg: CompanionAlgebra, n: int) -> list[Subspace]:
    """Field reduction of every point of PG(n, q^t): a spread of
    (t-1)-subspaces partitioning PG(t(n+1)-1, q)."""
    ext_space = ProjSpace(n, alg.ext)
    return [field_reduce(alg, p) for p in ext_space.points()]


def segre_membership(alg: CompanionAlgebra, n: int, vec) -> bool:
    """Whether a point of PG(t(n+1)-1, q) lies on the rank-one locus: its
    coordinates, reshaped to an (n+1) x t matrix of expansion digits, have
    rank one."""
    from . import linalg

    v = np.asarray(vec, dtype=np.int64)
    t = alg.t
    if len(v) % t:
        raise ValueError("coordinate length is not divisible by t")
    M = v.reshape(-1, t)
    return linalg.rank(alg.base, M) == 1


def barlotti_cofman(
    spec: LinRepSpec, alg: CompanionAlgebra, budget: int = DEFAULT_BUDGET
) -> tuple[GeometryMap, IncidenceStructure, IncidenceStructure]:
    """The correspondence between T*_n(K) over GF(q^t) and the generalised
    linear representation of the field reduction of K over GF(q).

    Points map by expanding each affine coordinate into its t base digits;
    lines with direction u map to lines through the subspace 𝓕(u). Returns
    (map, source, target); the target is exactly build_gen_linrep applied to
    [field_reduce(u) for u in K].
    """
    if spec.field is not alg.ext:
        raise VerificationError("spec field must be the algebra's extension field")
    t = alg.t
    base = alg.base
    q = base.order
    n = spec.n
    source = build_linrep(spec, budget=budget)
    spread = [field_reduce(alg, u) for u in spec.infinity_points]
    target = build_gen_linrep(t, base, spread, budget=budget)

    m = t * (n + 1) - 1
    weights = q ** np.arange(m, -1, -1, dtype=np.int64)
    point_map = np.empty(source.n_points, dtype=np.int64)
    for i, label in enumerate(source.points):
        digits = np.concatenate([alg.ext_to_row(int(x)) for x in label[:-1]])
        idx = int(digits @ weights)
        want = tuple(int(d) for d in digits) + (1,)
        if target.points[idx] != want:
            raise VerificationError("expansion does not match target labels")
        point_map[i] = idx
    line_map = induce_line_map(source, target, point_map)
    for l, (u, _rep) in enumerate(source.lines):
        D = field_reduce(alg, u[:-1])
        emb = tuple(tuple(int(c) for c in row) + (0,) for row in D.basis)
        if target.lines[int(line_map[l])][0] != emb:
            raise VerificationError(
                f"line with direction {u} does not map onto its field reduction"
            )
    gm = GeometryMap("barlotti_cofman", source, target, point_map, line_map)
    rep = gm.verify()
    if not rep["ok"]:
        raise VerificationError(f"barlotti_cofman failed verification: {rep}")
    return gm, source, target
