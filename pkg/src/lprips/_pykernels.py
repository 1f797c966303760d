"""Pure-Python reference kernels.

Same signatures and the same floating-point operation order as the compiled
``_kernels`` extension, so both backends return bit-identical results.
"""

from __future__ import annotations

import math

import numpy as np

INF = math.inf


def _powers(dist, idx, p):
    k = len(idx)
    if p == 1.0:
        return [[float(dist[idx[i], idx[j]]) for j in range(k)] for i in range(k)]
    return [[float(dist[idx[i], idx[j]]) ** p for j in range(k)] for i in range(k)]


def _path_power(w, k):
    # longest path over the DAG i<j with edge weights w[i][j]
    best = [0.0] * k
    top = 0.0
    for j in range(1, k):
        b = 0.0
        for i in range(j):
            c = best[i] + w[i][j]
            if c > b:
                b = c
        best[j] = b
        if b > top:
            top = b
    return top


def _cycle_power(w, k):
    top = 0.0
    for s in range(k):
        g = [0.0] * k
        for j in range(s + 1, k):
            b = 0.0
            for i in range(s, j):
                c = g[i] + w[i][j]
                if c > b:
                    b = c
            g[j] = b
            c = b + w[j][s]
            if c > top:
                top = c
    return top


def _diam(dist, idx):
    k = len(idx)
    top = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            v = float(dist[idx[i], idx[j]])
            if v > top:
                top = v
    return top


def _finish(s, p, cyclic):
    if p == 1.0:
        return s * 0.5 if cyclic else s
    if cyclic:
        return (s * 0.5) ** (1.0 / p)
    return s ** (1.0 / p)


def _power_weight(dist, idx, p, cyclic):
    w = _powers(dist, idx, p)
    k = len(idx)
    return _cycle_power(w, k) if cyclic else _path_power(w, k)


def tuple_weights(dist, tuples, p, cyclic):
    """Non-symmetric weight of every row of ``tuples``."""
    dist = np.asarray(dist, dtype=np.float64)
    tuples = np.asarray(tuples, dtype=np.int64)
    out = np.empty(tuples.shape[0], dtype=np.float64)
    for r in range(tuples.shape[0]):
        idx = tuples[r]
        if p == INF:
            out[r] = _diam(dist, idx)
        else:
            out[r] = _finish(_power_weight(dist, idx, p, cyclic), p, cyclic)
    return out


def _search(dist, subset, p, cyclic):
    k = len(subset)
    if p == INF:
        return _diam(dist, subset), list(range(k))
    w = _powers(dist, subset, p)
    best_val = INF
    best_order = list(range(k))
    order = []
    used = [False] * k
    ends = []

    def prefix_value(pref_top, e):
        # incremental path weight after appending e
        if cyclic:
            m = len(order)
            sub = [[w[order[a]][order[b]] for b in range(m)] for a in range(m)]
            return _cycle_power(sub, m), 0.0
        b = 0.0
        for i, v in enumerate(order[:-1]):
            c = ends[i] + w[v][e]
            if c > b:
                b = c
        return (b if b > pref_top else pref_top), b

    def dfs(pref_top):
        nonlocal best_val, best_order
        if len(order) == k:
            if pref_top < best_val:
                best_val = pref_top
                best_order = list(order)
            return
        for e in range(k):
            if used[e]:
                continue
            used[e] = True
            order.append(e)
            top, end = prefix_value(pref_top, e)
            if top < best_val:
                ends.append(end)
                dfs(top)
                ends.pop()
            order.pop()
            used[e] = False

    dfs(0.0)
    return _finish(best_val, p, cyclic), best_order


def subset_weights(dist, subsets, p, cyclic):
    """Minimum over orderings of each row; returns (weights, argmin orders)."""
    dist = np.asarray(dist, dtype=np.float64)
    subsets = np.asarray(subsets, dtype=np.int64)
    n, k = subsets.shape
    out = np.empty(n, dtype=np.float64)
    orders = np.empty((n, k), dtype=np.int64)
    for r in range(n):
        val, order = _search(dist, [int(v) for v in subsets[r]], p, cyclic)
        out[r] = val
        orders[r] = order
    return out, orders


def _pack(cols, n):
    indptr = np.zeros(n + 1, dtype=np.int64)
    for j, c in enumerate(cols):
        indptr[j + 1] = indptr[j] + len(c)
    indices = np.empty(indptr[-1], dtype=np.int64)
    data = np.empty(indptr[-1], dtype=np.int64)
    for j, c in enumerate(cols):
        rows = sorted(c)
        a = indptr[j]
        indices[a:a + len(rows)] = rows
        data[a:a + len(rows)] = [c[r] for r in rows] if isinstance(c, dict) else 1
    return indptr, indices, data


def reduce_columns(indptr, indices, data, p, clear=None, track=False):
    """Standard left-to-right column reduction over Z/p.

    Returns ``(low, R, V)`` with ``R`` and ``V`` as ``(indptr, indices, data)``
    triples; ``V`` is empty unless ``track``.  Columns flagged in ``clear`` are
    treated as already zero.
    """
    ncols = len(indptr) - 1
    low = np.full(ncols, -1, dtype=np.int64)
    pivot = {}
    R = []
    V = []
    for j in range(ncols):
        a, b = indptr[j], indptr[j + 1]
        if clear is not None and clear[j]:
            R.append({} if p != 2 else set())
            V.append({} if p != 2 else set())
            continue
        if p == 2:
            col = set()
            for r, v in zip(indices[a:b], data[a:b]):
                if v % 2:
                    col ^= {int(r)}
            vc = {j} if track else None
            while col:
                lo = max(col)
                k = pivot.get(lo)
                if k is None:
                    break
                col ^= R[k]
                if track:
                    vc ^= V[k]
            R.append(col)
            V.append(vc if track else set())
        else:
            col = {}
            for r, v in zip(indices[a:b], data[a:b]):
                v = int(v) % p
                if v:
                    col[int(r)] = (col.get(int(r), 0) + v) % p
                    if not col[int(r)]:
                        del col[int(r)]
            vc = {j: 1} if track else None
            while col:
                lo = max(col)
                k = pivot.get(lo)
                if k is None:
                    break
                rk = R[k]
                f = (-col[lo] * pow(rk[lo], -1, p)) % p
                for r, v in rk.items():
                    nv = (col.get(r, 0) + f * v) % p
                    if nv:
                        col[r] = nv
                    else:
                        col.pop(r, None)
                if track:
                    for r, v in V[k].items():
                        nv = (vc.get(r, 0) + f * v) % p
                        if nv:
                            vc[r] = nv
                        else:
                            vc.pop(r, None)
            R.append(col)
            V.append(vc if track else {})
        if R[j]:
            lo = max(R[j])
            low[j] = lo
            pivot[lo] = j
    return low, _pack(R, ncols), _pack(V, ncols) if track else _pack([set()] * ncols, ncols)


def stacked_weights(mats, p, cyclic, symmetric):
    """Weight of each matrix in an ``(M, k, k)`` stack (order ``0..k-1``, or min over orders)."""
    mats = np.asarray(mats, dtype=np.float64)
    n, k = mats.shape[0], mats.shape[1]
    out = np.empty(n, dtype=np.float64)
    idx = list(range(k))
    for r in range(n):
        if symmetric:
            out[r] = _search(mats[r], idx, p, cyclic)[0]
        elif p == INF:
            out[r] = _diam(mats[r], idx)
        else:
            out[r] = _finish(_power_weight(mats[r], idx, p, cyclic), p, cyclic)
    return out
