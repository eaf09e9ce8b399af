"""Collineation group orders: closed-form formulas and brute-force counts.

The closed forms are exact integer arithmetic over python ints. The brute
force treats an incidence structure as a 2-coloured bipartite graph (points
before lines), refines the colouring Weisfeiler-Leman style, and then runs an
orbit-stabiliser ladder: level k finds the orbit of the k-th base vertex
under the stabiliser of the previous base points, one first-hit backtracking
search per candidate image, and the group order is the product of the orbit
sizes. Isomorphisms between two structures reuse the same search kernel with
a jointly refined colouring.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceededError
from .incidence import Graph, IncidenceStructure
from .isomaps import GeometryMap
from .kernels import iso_search
from .projgeom import gaussian_binomial

__all__ = [
    "qprod",
    "order_gl",
    "order_pgl",
    "order_pgammal",
    "persp_order",
    "order_stab_pi",
    "order_stab_pi_quotient",
    "order_stab_segre",
    "geometric_order",
    "order_ratio",
    "group_order_report",
    "wl_refinement",
    "automorphism_group_report",
    "automorphism_group_order",
    "enumerate_isomorphisms",
    "point_perm_preserves_lines",
    "srg_check",
]

DEFAULT_NODE_BUDGET = 20_000_000
DEFAULT_MAX_VERTICES = 2048


# -- closed-form orders ------------------------------------------------------


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError("q must be at least 2")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    h = 0
    m = q
    while m % p == 0:
        m //= p
        h += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, h


def qprod(q: int, lo: int, hi: int) -> int:
    """Product of (q^j - 1) for j from lo to hi inclusive (1 when empty)."""
    out = 1
    for j in range(lo, hi + 1):
        out *= q**j - 1
    return out


def order_gl(m: int, q: int) -> int:
    out = 1
    for i in range(m):
        out *= q**m - q**i
    return out


def order_pgl(m: int, q: int) -> int:
    return order_gl(m, q) // (q - 1)


def order_pgammal(m: int, q: int) -> int:
    _, h = _prime_power(q)
    return order_pgl(m, q) * h


def persp_order(m: int, q: int) -> int:
    """Order of the group of perspectivities with a fixed centre and axis in
    a setting with q^m choices of translation part: q^m * (q - 1)."""
    return q**m * (q - 1)


def order_stab_pi(n: int, t: int, q: int) -> int:
    """Order of the stabiliser of a fixed (t-1)-subspace in
    PGammaL(n+t+1, q), as a product of the elation part, the unipotent part
    acting inside the subspace, the reductive part on the subspace, and the
    induced group on the quotient."""
    return (
        q ** (t * (n + 1))
        * q ** (t * (t - 1) // 2)
        * qprod(q, 1, t)
        * order_pgammal(n + 1, q)
    )


def order_stab_pi_quotient(n: int, t: int, q: int) -> int:
    """Same order via orbit counting: |PGammaL(n+t+1, q)| divided by the
    number of (t-1)-subspaces of PG(n+t, q)."""
    top = order_pgammal(n + t + 1, q)
    n_subspaces = gaussian_binomial(n + t + 1, t, q)
    if top % n_subspaces:
        raise ArithmeticError("stabiliser order is not an integer")
    return top // n_subspaces


def order_stab_segre(n: int, t: int, q: int) -> int:
    """Order of the stabiliser of the corresponding Segre-type variety."""
    _, h = _prime_power(q)
    return persp_order(t * (n + 1), q) * order_pgl(n + 1, q) * order_pgl(t, q) * h


def geometric_order(n: int, t: int, q: int) -> int:
    """Order of the automorphism group of the geometry itself:
    q^{t(n+1)} translations, q^t - 1 scalings, t twists, and PGammaL(n+1, q)
    on the directions."""
    return q ** (t * (n + 1)) * (q**t - 1) * t * order_pgammal(n + 1, q)


def order_ratio(n: int, t: int, q: int) -> int:
    """The integer ratio order_stab_pi / geometric_order, simplified to
    q^{t(t-1)/2} * prod_{j<t}(q^j - 1) / t."""
    num = q ** (t * (t - 1) // 2) * qprod(q, 1, t - 1)
    if num % t:
        raise ArithmeticError(f"ratio is not an integer at (n={n}, t={t}, q={q})")
    return num // t


def group_order_report(n: int, t: int, q: int) -> dict:
    """All the order formulas at one parameter triple, with the consistency
    identities between them evaluated."""
    _, h = _prime_power(q)
    pi = order_stab_pi(n, t, q)
    pi_q = order_stab_pi_quotient(n, t, q)
    segre = order_stab_segre(n, t, q)
    geo = geometric_order(n, t, q)
    ratio = order_ratio(n, t, q)
    operator = q ** (t * (n + 1)) * order_gl(n + 1, q) * order_gl(t, q) * h
    kernel = q - 1
    return {
        "n": n,
        "t": t,
        "q": q,
        "h": h,
        "stab_pi": pi,
        "stab_pi_quotient_route": pi_q,
        "stab_segre": segre,
        "geometric": geo,
        "ratio": ratio,
        "operator_group": operator,
        "operator_kernel": kernel,
        "pi_routes_agree": pi == pi_q,
        "segre_equals_pi": segre == pi,
        "pi_equals_geometric_times_ratio": pi == geo * ratio,
        "operator_mod_kernel_equals_pi": operator == pi * kernel,
    }


# -- graph preparation -------------------------------------------------------


def _incidence_graph(struct: IncidenceStructure):
    n = struct.n_points + struct.n_lines
    adj = np.zeros((n, n), dtype=bool)
    for p, l in struct.flags:
        adj[p, struct.n_points + l] = True
        adj[struct.n_points + l, p] = True
    init = np.zeros(n, dtype=np.int64)
    init[struct.n_points :] = 1
    return adj, init


def wl_refinement(adj: np.ndarray, init_colors) -> np.ndarray:
    """Colour refinement to a stable partition. Colours are ranks of sorted
    signatures, so two vertices get equal colours in isomorphic graphs iff
    refinement cannot tell them apart; any automorphism preserves them."""
    n = adj.shape[0]
    nbrs = [np.flatnonzero(adj[v]) for v in range(n)]
    sigs = sorted(set(int(c) for c in init_colors))
    rank = {c: i for i, c in enumerate(sigs)}
    colors = [rank[int(c)] for c in init_colors]
    ncolors = len(sigs)
    while True:
        new_sigs = [
            (colors[v], tuple(sorted(colors[int(w)] for w in nbrs[v])))
            for v in range(n)
        ]
        uniq = sorted(set(new_sigs))
        if len(uniq) == ncolors:
            return np.array(colors, dtype=np.int64)
        rank = {s: i for i, s in enumerate(uniq)}
        colors = [rank[s] for s in new_sigs]
        ncolors = len(uniq)


def _to_bitsets(adj: np.ndarray, width_bits: int) -> np.ndarray:
    n = adj.shape[0]
    W = (width_bits + 63) // 64
    bits = np.zeros((n, W), dtype=np.uint64)
    for v in range(n):
        for w in np.flatnonzero(adj[v]):
            bits[v, int(w) // 64] |= np.uint64(1) << np.uint64(int(w) % 64)
    return bits


def _class_bitsets(colors_s, colors_t, n_target: int) -> np.ndarray:
    W = (n_target + 63) // 64
    by_color: dict[int, np.ndarray] = {}
    for c in set(int(x) for x in colors_s):
        row = np.zeros(W, dtype=np.uint64)
        for w in range(n_target):
            if int(colors_t[w]) == c:
                row[w // 64] |= np.uint64(1) << np.uint64(w % 64)
        by_color[c] = row
    cand = np.zeros((len(colors_s), W), dtype=np.uint64)
    for v in range(len(colors_s)):
        cand[v] = by_color[int(colors_s[v])]
    return cand


def _singleton(w: int, W: int) -> np.ndarray:
    row = np.zeros(W, dtype=np.uint64)
    row[w // 64] = np.uint64(1) << np.uint64(w % 64)
    return row


def _search_order(adj: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Static assignment order: start in the smallest colour class, then
    always pick the unassigned vertex with the most already-assigned
    neighbours, breaking ties by class size and index."""
    n = adj.shape[0]
    class_size = np.bincount(colors)
    assigned = np.zeros(n, dtype=bool)
    assigned_nbrs = np.zeros(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    for step in range(n):
        best = -1
        best_key = None
        for v in range(n):
            if assigned[v]:
                continue
            key = (-int(assigned_nbrs[v]), int(class_size[colors[v]]), v)
            if best < 0 or key < best_key:
                best, best_key = v, key
        order[step] = best
        assigned[best] = True
        assigned_nbrs[adj[best]] += 1
    return order


# -- automorphism group via orbit-stabiliser ladder --------------------------


def automorphism_group_report(
    struct: IncidenceStructure,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> dict:
    """Exact |Aut| of an incidence structure (automorphisms preserve the
    point and line parts), with a strong generating set.

    Returns a dict with the order, the orbit sizes along the base, the
    generators as whole-vertex permutations, and their restrictions to
    points. Raises BudgetExceededError if the structure is too large or a
    search exceeds the node budget.
    """
    N = struct.n_points + struct.n_lines
    if N > max_vertices:
        raise BudgetExceededError(
            f"structure has {N} vertices, over the limit of {max_vertices}"
        )
    adj, init = _incidence_graph(struct)
    colors = wl_refinement(adj, init)
    bits = _to_bitsets(adj, N)
    order_seq = _search_order(adj, colors)
    cand_base = _class_bitsets(colors, colors, N)
    W = bits.shape[1]

    total = 1
    orbit_sizes = []
    gens: list[np.ndarray] = []
    class_members = {
        c: [w for w in range(N) if int(colors[w]) == c]
        for c in set(int(x) for x in colors)
    }
    for k in range(N):
        v = int(order_seq[k])
        orbit = {v}
        level_gens: list[np.ndarray] = []
        for w in class_members[int(colors[v])]:
            if w in orbit:
                continue
            cand = cand_base.copy()
            for i in range(k):
                u = int(order_seq[i])
                cand[u] = _singleton(u, W)
            cand[v] = _singleton(w, W)
            status, res = iso_search(bits, bits, order_seq, cand, False, 1, node_budget)
            if status == 1:
                raise BudgetExceededError(
                    f"node budget {node_budget} exhausted at level {k}"
                )
            if len(res):
                g = res[0].copy()
                level_gens.append(g)
                gens.append(g)
                frontier = list(orbit)
                while frontier:
                    x = frontier.pop()
                    for h in level_gens:
                        y = int(h[x])
                        if y not in orbit:
                            orbit.add(y)
                            frontier.append(y)
        orbit_sizes.append(len(orbit))
        total *= len(orbit)
    return {
        "order": total,
        "orbit_sizes": orbit_sizes,
        "generators": gens,
        "point_generators": [g[: struct.n_points] for g in gens],
        "n_points": struct.n_points,
        "n_lines": struct.n_lines,
    }


def automorphism_group_order(
    struct: IncidenceStructure,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> int:
    return automorphism_group_report(struct, node_budget, max_vertices)["order"]


def enumerate_isomorphisms(
    s1: IncidenceStructure,
    s2: IncidenceStructure,
    max_results: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> list[GeometryMap]:
    """All isomorphisms from s1 to s2 (point part to point part, line part
    to line part), as unverified GeometryMaps. Colour classes come from a
    joint refinement of the disjoint union, so compatible candidates are
    pruned before the search starts."""
    if s1.n_points != s2.n_points or s1.n_lines != s2.n_lines:
        return []
    if s1.n_flags != s2.n_flags:
        return []
    N = s1.n_points + s1.n_lines
    if 2 * N > max_vertices:
        raise BudgetExceededError(
            f"union has {2 * N} vertices, over the limit of {max_vertices}"
        )
    adj1, init1 = _incidence_graph(s1)
    adj2, init2 = _incidence_graph(s2)
    union = np.zeros((2 * N, 2 * N), dtype=bool)
    union[:N, :N] = adj1
    union[N:, N:] = adj2
    colors = wl_refinement(union, np.concatenate([init1, init2]))
    colors_s, colors_t = colors[:N], colors[N:]
    counts_s = {}
    counts_t = {}
    for c in colors_s:
        counts_s[int(c)] = counts_s.get(int(c), 0) + 1
    for c in colors_t:
        counts_t[int(c)] = counts_t.get(int(c), 0) + 1
    if counts_s != counts_t:
        return []
    bits_s = _to_bitsets(adj1, N)
    bits_t = _to_bitsets(adj2, N)
    order_seq = _search_order(adj1, colors_s)
    cand0 = _class_bitsets(colors_s, colors_t, N)
    cap = max_results if max_results is not None else 2**62
    status, res = iso_search(bits_s, bits_t, order_seq, cand0, True, cap, node_budget)
    if status == 1:
        raise BudgetExceededError(f"node budget {node_budget} exhausted")
    maps = []
    for k in range(len(res)):
        perm = res[k]
        maps.append(
            GeometryMap(
                f"iso_{k}",
                s1,
                s2,
                perm[: s1.n_points],
                perm[s1.n_points :] - s1.n_points,
            )
        )
    return maps


def point_perm_preserves_lines(struct: IncidenceStructure, point_perm) -> bool:
    """Whether a permutation of the point indices maps every line of the
    structure onto a line of the structure (as point sets)."""
    point_perm = np.asarray(point_perm, dtype=np.int64)
    linesets = set(struct.line_pointsets())
    for ls in linesets:
        image = frozenset(int(point_perm[p]) for p in ls)
        if image not in linesets:
            return False
    return True


# -- strongly regular graph check --------------------------------------------


def srg_check(graph: Graph) -> dict:
    """Decide whether a graph is strongly regular and report (v, k, lam, mu).

    Complete and edgeless graphs are flagged degenerate rather than srg.
    On failure the report carries a witness: a vertex pair whose common
    neighbour count deviates from the first value seen for its adjacency
    type.
    """
    A = graph.adj
    n = graph.n
    report: dict = {"v": n, "is_srg": False, "degenerate": False}
    deg = A.sum(axis=1)
    if n == 0:
        report["degenerate"] = True
        report["reason"] = "empty graph"
        return report
    if deg.min() != deg.max():
        u = int(np.argmin(deg))
        w = int(np.argmax(deg))
        report["reason"] = "not regular"
        report["witness"] = {"pair": [u, w], "degrees": [int(deg[u]), int(deg[w])]}
        return report
    k = int(deg[0])
    report["k"] = k
    if k == 0 or k == n - 1:
        report["degenerate"] = True
        report["reason"] = "complete or edgeless"
        return report
    A2 = A.astype(np.int64) @ A.astype(np.int64)
    off = ~np.eye(n, dtype=bool)
    lam_vals = A2[A]
    mu_vals = A2[off & ~A]
    lam = int(lam_vals[0])
    mu = int(mu_vals[0])
    if (lam_vals != lam).any():
        i, j = np.argwhere(A & (A2 != lam))[0]
        report["reason"] = "common neighbours vary on adjacent pairs"
        report["witness"] = {"pair": [int(i), int(j)], "count": int(A2[i, j]),
                             "expected": lam}
        return report
    if (mu_vals != mu).any():
        i, j = np.argwhere((off & ~A) & (A2 != mu))[0]
        report["reason"] = "common neighbours vary on non-adjacent pairs"
        report["witness"] = {"pair": [int(i), int(j)], "count": int(A2[i, j]),
                             "expected": mu}
        return report
    report["is_srg"] = True
    report["lam"] = lam
    report["mu"] = mu
    report["identity_ok"] = k * (k - lam - 1) == (n - k - 1) * mu
    return report
