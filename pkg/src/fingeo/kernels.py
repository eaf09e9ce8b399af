"""Hot numeric kernels.

Everything here is written as plain loops over numpy arrays so the same source
compiles under numba (default) or runs interpreted (``FINGEO_NO_JIT=1``); see
:mod:`fingeo._jit`.

Finite-field arithmetic enters as dense lookup tables: ``add[a, b]``,
``mul[a, b]``, ``neg[a]``, ``inv[a]`` index field element codes. Graphs enter
as uint64 bitset rows: bit ``w`` of ``adj[v, w // 64]`` is set iff ``v`` and
``w`` are adjacent.
"""

import numpy as np

from ._jit import JIT_ENABLED, njit  # noqa: F401

__all__ = ["JIT_ENABLED", "rref", "rank_batch", "iso_search"]


@njit(cache=True)
def rref(mat, add, mul, neg, inv):
    """Reduce ``mat`` (int64 matrix of field codes) in place; return its rank.

    Full reduced row echelon form: pivots are 1, pivot columns are cleared
    above and below, rows ordered by pivot column.
    """
    rows, cols = mat.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if mat[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = mat[r, j]
                mat[r, j] = mat[piv, j]
                mat[piv, j] = tmp
        if mat[r, c] != 1:
            s = inv[mat[r, c]]
            for j in range(c, cols):
                mat[r, j] = mul[mat[r, j], s]
        for i in range(rows):
            if i != r and mat[i, c] != 0:
                f = neg[mat[i, c]]
                for j in range(c, cols):
                    mat[i, j] = add[mat[i, j], mul[f, mat[r, j]]]
        r += 1
    return r


@njit(cache=True)
def rank_batch(mats, add, mul, neg, inv, out):
    """Rank of every matrix in ``mats`` (int64[k, rows, cols]) into ``out``."""
    for k in range(mats.shape[0]):
        m = mats[k].copy()
        out[k] = rref(m, add, mul, neg, inv)


@njit(cache=True)
def iso_search(adj_s, adj_t, order, cand0, enumerate_all, max_results, node_budget):
    """Backtracking search for adjacency-preserving bijections.

    Source vertices are assigned in the sequence ``order``; candidate images
    for each source vertex start from the bitsets ``cand0`` (colour classes,
    with any pinned prefix encoded as singleton rows). Forward checking prunes
    the candidate sets of unassigned vertices after every assignment, so any
    completed assignment is a genuine isomorphism from ``adj_s`` to ``adj_t``
    restricted to ``cand0``.

    Returns ``(status, results)``: status 0 means the search space was
    exhausted (or the first hit was found when ``enumerate_all`` is false),
    1 means ``node_budget`` ran out, 2 means ``max_results`` completions were
    collected before exhaustion. ``results[k, v]`` is the image of source
    vertex ``v`` in the k-th completion found.
    """
    N = adj_s.shape[0]
    W = adj_s.shape[1]
    one = np.uint64(1)
    zero = np.uint64(0)

    results = np.empty((16 if max_results > 16 else max_results, N), np.int64)
    count = 0
    status = 0
    if N == 0:
        return status, results[:0]

    # allowed[d] holds candidate bitsets for vertices not yet assigned at depth d
    allowed = np.empty((N + 1, N, W), np.uint64)
    for v in range(N):
        for ww in range(W):
            allowed[0, v, ww] = cand0[v, ww]
    remaining = np.zeros((N, W), np.uint64)
    img = np.full(N, -1, np.int64)
    nodes = 0

    depth = 0
    for ww in range(W):
        remaining[0, ww] = allowed[0, order[0], ww]

    while depth >= 0:
        if depth == N:
            if count == results.shape[0]:
                newcap = results.shape[0] * 2
                if newcap > max_results:
                    newcap = max_results
                tmp = np.empty((newcap, N), np.int64)
                tmp[:count] = results[:count]
                results = tmp
            for v2 in range(N):
                results[count, v2] = img[v2]
            count += 1
            if not enumerate_all:
                break
            if count >= max_results:
                status = 2
                break
            depth -= 1
            img[order[depth]] = -1
            continue

        # lowest untried candidate bit for the vertex at this depth
        wword = -1
        for ww in range(W):
            if remaining[depth, ww] != zero:
                wword = ww
                break
        if wword < 0:
            depth -= 1
            if depth >= 0:
                img[order[depth]] = -1
            continue
        word = remaining[depth, wword]
        bit = 0
        while (word >> np.uint64(bit)) & one == zero:
            bit += 1
        remaining[depth, wword] = word & ~(one << np.uint64(bit))
        w = wword * 64 + bit

        nodes += 1
        if node_budget > 0 and nodes > node_budget:
            status = 1
            break

        v = order[depth]
        ok = True
        for j in range(depth + 1, N):
            u = order[j]
            vu_adj = (adj_s[v, u >> 6] >> np.uint64(u & 63)) & one
            empty = True
            for ww in range(W):
                a = allowed[depth, u, ww]
                if vu_adj == one:
                    a = a & adj_t[w, ww]
                else:
                    a = a & ~adj_t[w, ww]
                if ww == wword:
                    a = a & ~(one << np.uint64(bit))
                allowed[depth + 1, u, ww] = a
                if a != zero:
                    empty = False
            if empty:
                ok = False
                break
        if not ok:
            continue

        img[v] = w
        depth += 1
        if depth < N:
            for ww in range(W):
                remaining[depth, ww] = allowed[depth, order[depth], ww]

    return status, results[:count]
