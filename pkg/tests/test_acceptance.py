"""Acceptance suite: every headline guarantee of the package, checked
end-to-end with exact integer equality and one pass line per check.

The grid used below is n, t in {1, 2, 3} with n + t <= 5 and q in {2, 3, 4};
the four spot triples are the smallest parameter sets where every model
(skew-subspace geometry, matrix coset geometry, linear representation) is
built and compared in full.
"""

import time

import numpy as np
import pytest

import conftest
from test_pointsets import _star_oracle

from fingeo.autcount import (
    automorphism_group_report,
    geometric_order,
    group_order_report,
    order_ratio,
    order_stab_pi,
    order_stab_segre,
    srg_check,
)
from fingeo.coset import (
    _matmul_batch,
    _matmul_batch_right,
    act_permutation,
    all_matrices,
    direction_count_report,
    enumerate_invertible,
    group_op,
    kernel_elements,
    trivial_action_elements,
)
from fingeo.fields import GF
from fingeo.isomaps import (
    barlotti_cofman,
    field_reduce,
    reduction_spread,
    segre_membership,
    x_to_linrep,
)
from fingeo.linrep import LinRepSpec, build_gen_linrep
from fingeo.pointsets import PointSet, closure, has_property_star, random_point_set
from fingeo.projgeom import ProjSpace, standard_frame, subgeometry_points

GRID = [
    (n, t, q)
    for n in (1, 2, 3)
    for t in (1, 2, 3)
    if n + t <= 5
    for q in (2, 3, 4)
]

FOUR = [(1, 2, 2), (1, 2, 3), (2, 2, 2), (1, 3, 2)]


# -- 1: the three models are isomorphic, with verified maps -----------------


@pytest.mark.parametrize("n,t,q", FOUR)
def test_acceptance_1_model_isomorphisms(n, t, q):
    alg = conftest.algebra(q, t)
    start = time.perf_counter()
    res = x_to_linrep(n, t, alg)
    elapsed = time.perf_counter() - start
    for key in ("x_to_coset", "coset_to_linrep", "composite"):
        m = res[key]
        assert m.verified
        assert m.report["ok"]
        assert m.report["flags"] == res["x"].n_flags
    assert res["composite"].source is res["x"]
    assert res["composite"].target is res["linrep"]
    assert elapsed < 10.0
    print(f"ACCEPTANCE 1 ({n},{t},{q}): PASS verified isomorphism chain "
          f"in {elapsed:.2f}s")


# -- 2: stabiliser order identity on the grid, brute-force spot checks ------


def test_acceptance_2_order_identity_on_grid():
    for n, t, q in GRID:
        assert order_stab_pi(n, t, q) == order_stab_segre(n, t, q), (n, t, q)
    print(f"ACCEPTANCE 2: PASS stabiliser orders agree on all "
          f"{len(GRID)} grid triples")


@pytest.mark.parametrize("n,t,q,expected", [(1, 2, 2, 576), (1, 2, 3, 93312)])
def test_acceptance_2_brute_force_automorphisms(n, t, q, expected):
    struct = conftest.x_struct(n, t, q)
    start = time.perf_counter()
    rep = automorphism_group_report(struct)
    elapsed = time.perf_counter() - start
    assert rep["order"] == expected
    assert rep["order"] == order_stab_pi(n, t, q)
    assert elapsed < 60.0
    print(f"ACCEPTANCE 2 ({n},{t},{q}): PASS brute-force group order "
          f"{rep['order']} in {elapsed:.2f}s")


# -- 3: the stabiliser is an exact integer multiple of the geometric group --


def test_acceptance_3_ratio_identity():
    for n, t, q in GRID:
        r = order_ratio(n, t, q)  # raises if the quotient is not integral
        assert order_stab_pi(n, t, q) == geometric_order(n, t, q) * r, (n, t, q)
    assert order_ratio(1, 2, 2) == 1
    assert order_ratio(1, 2, 3) == 3
    print("ACCEPTANCE 3: PASS ratio integral on the grid, "
          "ratio(1,2,2)=1, ratio(1,2,3)=3")


# -- 4: the operator group acts as advertised -------------------------------


def test_acceptance_4_operator_group_mod_kernel_on_grid():
    for n, t, q in GRID:
        rep = group_order_report(n, t, q)
        assert rep["operator_group"] % rep["operator_kernel"] == 0, (n, t, q)
        quotient = rep["operator_group"] // rep["operator_kernel"]
        assert quotient == order_stab_pi(n, t, q), (n, t, q)
    print(f"ACCEPTANCE 4: PASS |operators| / |kernel| = stabiliser order "
          f"on all {len(GRID)} grid triples")


class _OperatorScan:
    """All (A, B, C) operators over a prime field (trivial Frobenius layer),
    their point permutations, and vectorised composition.

    Element e = (ai * Nb + bi) * Nc + ci where ai is the code of A and
    bi, ci index the invertible matrices in code order.
    """

    def __init__(self, n, t, field):
        assert field.h == 1
        q = field.order
        n1 = n + 1
        self.field = field
        self.mats = all_matrices(field, n1, t)
        self.Bs = enumerate_invertible(field, n1)
        self.Cs = enumerate_invertible(field, t)
        Na, Nb, Nc = len(self.mats), len(self.Bs), len(self.Cs)
        self.Na, self.Nb, self.Nc = Na, Nb, Nc
        self.Ne = Na * Nb * Nc
        self.wa = q ** np.arange(n1 * t - 1, -1, -1, dtype=np.int64)
        wb = q ** np.arange(n1 * n1 - 1, -1, -1, dtype=np.int64)
        wc = q ** np.arange(t * t - 1, -1, -1, dtype=np.int64)
        self.wb, self.wc = wb, wc
        self.bidx = np.full(q ** (n1 * n1), -1, dtype=np.int64)
        self.bidx[self.Bs.reshape(Nb, -1) @ wb] = np.arange(Nb)
        self.cidx = np.full(q ** (t * t), -1, dtype=np.int64)
        self.cidx[self.Cs.reshape(Nc, -1) @ wc] = np.arange(Nc)
        perms = np.empty((Na, Nb, Nc, Na), dtype=np.int16)
        for bi, B in enumerate(self.Bs):
            BM = _matmul_batch(field, B, self.mats)
            for ci, C in enumerate(self.Cs):
                BMC = _matmul_batch_right(field, BM, C)
                img = field.add(self.mats[:, None, :, :], BMC[None, :, :, :])
                perms[:, bi, ci, :] = img.reshape(Na, Na, n1 * t) @ self.wa
        self.perms = perms.reshape(self.Ne, Na)
        e = np.arange(self.Ne)
        self.ai_all = e // (Nb * Nc)
        self.bi_all = (e // Nc) % Nb
        self.ci_all = e % Nc
        self.As_all = self.mats[self.ai_all]
        self.Bs_all = self.Bs[self.bi_all]
        self.Cs_all = self.Cs[self.ci_all]
        self.identity = (
            0 * Nb + int(np.flatnonzero(
                (self.Bs == np.eye(n1, dtype=np.int64)).all(axis=(1, 2)))[0])
        ) * Nc + int(np.flatnonzero(
            (self.Cs == np.eye(t, dtype=np.int64)).all(axis=(1, 2)))[0])

    def element(self, e):
        return (
            self.mats[self.ai_all[e]],
            self.Bs[self.bi_all[e]],
            self.Cs[self.ci_all[e]],
            0,
        )

    def index_of(self, g):
        A, B, C, _l = g
        ai = int(np.asarray(A, dtype=np.int64).reshape(-1) @ self.wa)
        bi = int(self.bidx[np.asarray(B, dtype=np.int64).reshape(-1) @ self.wb])
        ci = int(self.cidx[np.asarray(C, dtype=np.int64).reshape(-1) @ self.wc])
        return (ai * self.Nb + bi) * self.Nc + ci

    def compose_with_all(self, e):
        """Index of g_e . x for every element x (x applied first)."""
        field = self.field
        Ag, Bg, Cg, _ = self.element(e)
        A2 = _matmul_batch_right(field, _matmul_batch(field, Bg, self.As_all), Cg)
        A2 = field.add(A2, Ag[None, :, :])
        B2 = _matmul_batch(field, Bg, self.Bs_all)
        C2 = _matmul_batch_right(field, self.Cs_all, Cg)
        ai = A2.reshape(self.Ne, -1) @ self.wa
        bi = self.bidx[B2.reshape(self.Ne, -1) @ self.wb]
        ci = self.cidx[C2.reshape(self.Ne, -1) @ self.wc]
        return (ai * self.Nb + bi) * self.Nc + ci


def _scan_self_check(scan, rng):
    """The tabulated permutations and compositions against the one-at-a-time
    routines, on a random sample."""
    field = scan.field
    for e in rng.integers(0, scan.Ne, size=12):
        g = scan.element(int(e))
        assert np.array_equal(scan.perms[int(e)],
                              act_permutation(field, g, scan.mats))
    for _ in range(12):
        ge, xe = int(rng.integers(0, scan.Ne)), int(rng.integers(0, scan.Ne))
        composed = group_op(field, scan.element(ge), scan.element(xe))
        assert scan.compose_with_all(ge)[xe] == scan.index_of(composed)


def test_acceptance_4_action_axiom_exhaustive_1_2_2():
    """act(g . h, P) = act(g, act(h, P)) over every pair of the 576
    operators and every point, by comparing whole permutations."""
    field = conftest.field(2)
    scan = _OperatorScan(1, 2, field)
    assert scan.Ne == group_order_report(1, 2, 2)["operator_group"] == 576
    _scan_self_check(scan, np.random.default_rng(1))
    for e in range(scan.Ne):
        lhs = scan.perms[scan.compose_with_all(e)]
        rhs = scan.perms[e][scan.perms]
        assert np.array_equal(lhs, rhs), f"axiom fails for left factor {e}"
    print(f"ACCEPTANCE 4 (1,2,2): PASS action axiom on all "
          f"{scan.Ne * scan.Ne} operator pairs")


def test_acceptance_4_action_axiom_generated_1_2_3():
    """The same identity at (1,2,3), where the 186624^2 pairs are covered by
    checking every generator against every element and verifying that the
    generators reach the whole group: if act(g . x) = act(g) . act(x) holds
    for each generator g and arbitrary x, induction on the length of g as a
    word in the generators extends it to arbitrary left factors."""
    field = conftest.field(3)
    scan = _OperatorScan(1, 2, field)
    assert scan.Ne == group_order_report(1, 2, 3)["operator_group"] == 186624
    _scan_self_check(scan, np.random.default_rng(2))

    n1 = t = 2
    gens = []
    for k in range(n1):
        for m in range(t):
            A = np.zeros((n1, t), dtype=np.int64)
            A[k, m] = 1
            gens.append((A, np.eye(n1, dtype=np.int64),
                         np.eye(t, dtype=np.int64), 0))
    shear_u = np.array([[1, 1], [0, 1]], dtype=np.int64)
    shear_l = np.array([[1, 0], [1, 1]], dtype=np.int64)
    scale = np.array([[2, 0], [0, 1]], dtype=np.int64)
    zero = np.zeros((n1, t), dtype=np.int64)
    for M in (shear_u, shear_l, scale):
        gens.append((zero, M, np.eye(t, dtype=np.int64), 0))
        gens.append((zero, np.eye(n1, dtype=np.int64), M, 0))

    maps = []
    for g in gens:
        e = scan.index_of(g)
        comp = scan.compose_with_all(e)
        lhs = scan.perms[comp]
        rhs = scan.perms[e][scan.perms]
        assert np.array_equal(lhs, rhs), "axiom fails for a generator"
        maps.append(comp)

    visited = np.zeros(scan.Ne, dtype=bool)
    visited[scan.identity] = True
    frontier = np.array([scan.identity])
    while frontier.size:
        nxt = np.unique(np.concatenate([m[frontier] for m in maps]))
        nxt = nxt[~visited[nxt]]
        visited[nxt] = True
        frontier = nxt
    assert int(visited.sum()) == scan.Ne, "generators do not reach the group"
    print(f"ACCEPTANCE 4 (1,2,3): PASS action axiom on {len(gens)} generators "
          f"x {scan.Ne} elements, generators reach all {scan.Ne}")


@pytest.mark.parametrize("n,t,q", [(1, 2, 2), (1, 2, 3)])
def test_acceptance_4_kernel_of_action_is_scalar(n, t, q):
    field = conftest.field(q)
    triv = trivial_action_elements(n, t, field)
    ker = kernel_elements(n, t, field)
    assert len(triv) == q - 1
    assert len(ker) == q - 1

    def key(g):
        A, B, C, l = g
        return (A.tobytes(), B.tobytes(), C.tobytes(), l)

    assert {key(g) for g in triv} == {key(g) for g in ker}
    mats = all_matrices(field, n + 1, t)
    ident = np.arange(len(mats))
    for g in ker:
        assert np.array_equal(act_permutation(field, g, mats), ident)
    print(f"ACCEPTANCE 4 ({n},{t},{q}): PASS exactly {q - 1} trivially "
          f"acting operators, all scalar")


@pytest.mark.parametrize("n,t,q", [(1, 2, 2), (1, 2, 3)])
def test_acceptance_4_translations_sharply_transitive(n, t, q):
    field = conftest.field(q)
    n1 = n + 1
    mats = all_matrices(field, n1, t)
    Na = len(mats)
    w = q ** np.arange(n1 * t - 1, -1, -1, dtype=np.int64)
    # trans[a, p] = image of point p under the translation by matrix a
    trans = field.add(mats[:, None, :, :], mats[None, :, :, :])
    trans = trans.reshape(Na, Na, n1 * t) @ w
    for p in range(Na):
        col = np.sort(trans[:, p])
        assert np.array_equal(col, np.arange(Na)), "some point is hit twice"
    # the unique translation taking p to r is the difference r - p
    diff = field.sub(mats[:, None, :, :], mats[None, :, :, :])
    diff = diff.reshape(Na, Na, n1 * t) @ w
    cols = np.broadcast_to(np.arange(Na), (Na, Na))
    assert np.array_equal(trans[diff, cols],
                          np.broadcast_to(np.arange(Na)[:, None], (Na, Na)))
    print(f"ACCEPTANCE 4 ({n},{t},{q}): PASS translations sharply "
          f"transitive on all {Na * Na} ordered point pairs")


# -- 5: field reduction is a spread, and sweeps out the rank-one locus ------


@pytest.mark.parametrize("n,t,q", FOUR)
def test_acceptance_5_spread_and_rank_one_locus(n, t, q):
    alg = conftest.algebra(q, t)
    spread = reduction_spread(alg, n)
    amb = ProjSpace(t * (n + 1) - 1, alg.base)
    all_pts = {tuple(int(c) for c in row) for row in amb.points()}
    covered = []
    for S in spread:
        assert S.pdim == t - 1
        covered.extend(tuple(int(c) for c in row) for row in S.points(alg.base))
    assert len(covered) == len(set(covered)), "spread members overlap"
    assert set(covered) == all_pts, "spread misses points"

    sub = subgeometry_points(ProjSpace(n, alg.ext), q)
    union = set()
    for u in sub:
        union.update(
            tuple(int(c) for c in row)
            for row in field_reduce(alg, u).points(alg.base)
        )
    locus = {p for p in all_pts if segre_membership(alg, n, p)}
    expected = (q ** (n + 1) - 1) * (q**t - 1) // (q - 1) ** 2
    assert union == locus
    assert len(locus) == expected
    print(f"ACCEPTANCE 5 ({n},{t},{q}): PASS spread partitions "
          f"{len(all_pts)} points, rank-one locus has {expected}")


# -- 6: the subgeometry correspondence reproduces the independent build -----


@pytest.mark.parametrize("n,t,q", [(1, 2, 2), (1, 2, 3)])
def test_acceptance_6_barlotti_cofman_labels(n, t, q):
    alg = conftest.algebra(q, t)
    sub = subgeometry_points(ProjSpace(n, alg.ext), q)
    spec = LinRepSpec(n, alg.ext, sub)
    gm, _src, tgt = barlotti_cofman(spec, alg)
    assert gm.verified
    spread = [field_reduce(alg, u) for u in spec.infinity_points]
    indep = build_gen_linrep(t, alg.base, spread)
    assert indep == tgt
    assert indep.points == tgt.points
    assert indep.lines == tgt.lines
    print(f"ACCEPTANCE 6 ({n},{t},{q}): PASS correspondence target is "
          f"label-identical to the independent build")


# -- 7: frame closure and the plane classifier ------------------------------


def test_acceptance_7_frame_closure():
    space = ProjSpace(2, GF.of_order(4))
    cl = closure(PointSet(space, standard_frame(space)))
    sub = {tuple(int(c) for c in p) for p in subgeometry_points(space, 2)}
    assert len(cl) == 7
    assert {tuple(int(c) for c in p) for p in cl} == sub
    assert closure(cl) == cl
    print("ACCEPTANCE 7: PASS standard-frame closure is the 7-point "
          "subgeometry and is idempotent")


@pytest.mark.parametrize("q", [3, 4])
def test_acceptance_7_star_classifier_vs_oracle(q):
    space = ProjSpace(2, GF.of_order(q))
    rng = np.random.default_rng(20260819 + q)
    for _ in range(100):
        size = int(rng.integers(3, 2 * q + 3))
        ps = random_point_set(space, size, rng)
        assert has_property_star(ps) == _star_oracle(ps)
    print(f"ACCEPTANCE 7 (q={q}): PASS classifier agrees with the plane "
          f"oracle on 100 random point sets")


# -- 8: the point graph is strongly regular (frozen parameters) -------------


def test_acceptance_8_point_graph_srg():
    rep = srg_check(conftest.x_struct(1, 2, 2).point_graph())
    assert rep["is_srg"]
    assert (rep["v"], rep["k"], rep["lam"], rep["mu"]) == (16, 9, 4, 6)
    assert rep["identity_ok"]
    print("ACCEPTANCE 8: PASS point graph is srg(16, 9, 4, 6)")


# -- 9: the line-direction report surfaces the count discrepancy ------------


def test_acceptance_9_direction_report():
    rep = direction_count_report(1, 2, 2)
    assert rep["direction_count"] == 3
    assert rep["pencil_formula"] == 3
    assert rep["variant_formula"] == 1
    assert rep["variant_matches"] is False
    print("ACCEPTANCE 9: PASS direction report records 3 directions and "
          "flags the variant count 1 as inconsistent")
