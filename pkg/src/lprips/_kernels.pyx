# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: batch weights, permutation search, column reduction.

Mirrors ``lprips._pykernels`` operation for operation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, INFINITY
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from cython.operator cimport dereference as deref

cnp.import_array()

ctypedef long long i64


cdef inline double _diam(const double[:, :] dist, const i64* idx, int k) noexcept nogil:
    cdef double top = 0.0, v
    cdef int i, j
    for i in range(k):
        for j in range(i + 1, k):
            v = dist[idx[i], idx[j]]
            if v > top:
                top = v
    return top


cdef inline void _fill_powers(const double[:, :] dist, const i64* idx, int k, double p, double* w) noexcept nogil:
    cdef int i, j
    for i in range(k):
        for j in range(k):
            if p == 1.0:
                w[i * k + j] = dist[idx[i], idx[j]]
            else:
                w[i * k + j] = pow(dist[idx[i], idx[j]], p)


cdef inline double _path_power(const double* w, int k, int stride, double* best) noexcept nogil:
    cdef double top = 0.0, b, c
    cdef int i, j
    best[0] = 0.0
    for j in range(1, k):
        b = 0.0
        for i in range(j):
            c = best[i] + w[i * stride + j]
            if c > b:
                b = c
        best[j] = b
        if b > top:
            top = b
    return top


cdef inline double _cycle_power(const double* w, int k, int stride, double* g) noexcept nogil:
    cdef double top = 0.0, b, c
    cdef int s, i, j
    for s in range(k):
        for j in range(k):
            g[j] = 0.0
        for j in range(s + 1, k):
            b = 0.0
            for i in range(s, j):
                c = g[i] + w[i * stride + j]
                if c > b:
                    b = c
            g[j] = b
            c = b + w[j * stride + s]
            if c > top:
                top = c
    return top


cdef inline double _finish(double s, double p, bint cyclic) noexcept nogil:
    if p == 1.0:
        return s * 0.5 if cyclic else s
    if cyclic:
        return pow(s * 0.5, 1.0 / p)
    return pow(s, 1.0 / p)


def tuple_weights(dist, tuples, double p, bint cyclic):
    cdef const double[:, :] D = np.ascontiguousarray(dist, dtype=np.float64)
    cdef const i64[:, :] T = np.ascontiguousarray(tuples, dtype=np.int64)
    cdef Py_ssize_t n = T.shape[0], r
    cdef int k = <int>T.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[:] o = out
    cdef vector[double] w = vector[double](max(k * k, 1))
    cdef vector[double] scratch = vector[double](max(k, 1))
    cdef vector[i64] idx = vector[i64](max(k, 1))
    cdef int i
    cdef double s
    with nogil:
        for r in range(n):
            for i in range(k):
                idx[i] = T[r, i]
            if p == INFINITY:
                o[r] = _diam(D, idx.data(), k)
                continue
            _fill_powers(D, idx.data(), k, p, w.data())
            if cyclic:
                s = _cycle_power(w.data(), k, k, scratch.data())
            else:
                s = _path_power(w.data(), k, k, scratch.data())
            o[r] = _finish(s, p, cyclic)
    return out


cdef struct Search:
    int k
    bint cyclic
    double* w          # k*k powers in subset order
    double* sub        # k*k scratch for cyclic prefixes
    double* g          # k scratch
    double* ends       # k incremental path ends
    int* order
    int* used
    int* best_order
    double best_val


cdef void _dfs(Search* S, int depth, double pref_top) noexcept nogil:
    cdef int e, i, a, b
    cdef double top, end, c
    cdef int k = S.k
    if depth == k:
        if pref_top < S.best_val:
            S.best_val = pref_top
            for i in range(k):
                S.best_order[i] = S.order[i]
        return
    for e in range(k):
        if S.used[e]:
            continue
        S.used[e] = 1
        S.order[depth] = e
        if S.cyclic:
            for a in range(depth + 1):
                for b in range(depth + 1):
                    S.sub[a * k + b] = S.w[S.order[a] * k + S.order[b]]
            top = _cycle_power(S.sub, depth + 1, k, S.g)
            end = 0.0
        else:
            end = 0.0
            for i in range(depth):
                c = S.ends[i] + S.w[S.order[i] * k + e]
                if c > end:
                    end = c
            top = end if end > pref_top else pref_top
        if top < S.best_val:
            S.ends[depth] = end
            _dfs(S, depth + 1, top)
        S.used[e] = 0


def subset_weights(dist, subsets, double p, bint cyclic):
    cdef const double[:, :] D = np.ascontiguousarray(dist, dtype=np.float64)
    cdef const i64[:, :] T = np.ascontiguousarray(subsets, dtype=np.int64)
    cdef Py_ssize_t n = T.shape[0], r
    cdef int k = <int>T.shape[1]
    out = np.empty(n, dtype=np.float64)
    orders = np.empty((n, k), dtype=np.int64)
    cdef double[:] o = out
    cdef i64[:, :] od = orders
    cdef int kk = max(k, 1)
    cdef vector[double] w = vector[double](kk * kk)
    cdef vector[double] sub = vector[double](kk * kk)
    cdef vector[double] g = vector[double](kk)
    cdef vector[double] ends = vector[double](kk)
    cdef vector[int] order = vector[int](kk)
    cdef vector[int] used = vector[int](kk)
    cdef vector[int] best_order = vector[int](kk)
    cdef vector[i64] idx = vector[i64](kk)
    cdef Search S
    cdef int i
    S.k = k
    S.cyclic = cyclic
    S.w = w.data()
    S.sub = sub.data()
    S.g = g.data()
    S.ends = ends.data()
    S.order = order.data()
    S.used = used.data()
    S.best_order = best_order.data()
    with nogil:
        for r in range(n):
            for i in range(k):
                idx[i] = T[r, i]
            if p == INFINITY:
                o[r] = _diam(D, idx.data(), k)
                for i in range(k):
                    od[r, i] = i
                continue
            _fill_powers(D, idx.data(), k, p, S.w)
            for i in range(k):
                used[i] = 0
                best_order[i] = i
            S.best_val = INFINITY
            _dfs(&S, 0, 0.0)
            o[r] = _finish(S.best_val, p, cyclic)
            for i in range(k):
                od[r, i] = best_order[i]
    return out, orders


cdef inline i64 _mod(i64 a, i64 p) noexcept nogil:
    a = a % p
    return a + p if a < 0 else a


cdef i64 _inv(i64 a, i64 p) noexcept nogil:
    # extended Euclid; p prime, a != 0 mod p
    cdef i64 t = 0, nt = 1, r = p, nr = _mod(a, p), q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    return _mod(t, p)


cdef void _axpy(vector[i64]& ai, vector[i64]& av,
                const vector[i64]& bi, const vector[i64]& bv,
                i64 f, i64 p,
                vector[i64]& ti, vector[i64]& tv) noexcept nogil:
    # a <- a + f*b on sorted sparse columns, via scratch t
    cdef size_t x = 0, y = 0, na = ai.size(), nb = bi.size()
    cdef i64 v
    ti.clear()
    tv.clear()
    while x < na or y < nb:
        if y >= nb or (x < na and ai[x] < bi[y]):
            ti.push_back(ai[x])
            tv.push_back(av[x])
            x += 1
        elif x >= na or bi[y] < ai[x]:
            v = (f * bv[y]) % p
            if v != 0:
                ti.push_back(bi[y])
                tv.push_back(v)
            y += 1
        else:
            v = (av[x] + f * bv[y]) % p
            if v != 0:
                ti.push_back(ai[x])
                tv.push_back(v)
            x += 1
            y += 1
    ai.swap(ti)
    av.swap(tv)


cdef tuple _pack(vector[vector[i64]]& I, vector[vector[i64]]& X):
    cdef Py_ssize_t n = I.size(), j, t, pos = 0, total = 0
    for j in range(n):
        total += I[j].size()
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(total, dtype=np.int64)
    data = np.empty(total, dtype=np.int64)
    cdef i64[:] ip = indptr
    cdef i64[:] ix = indices
    cdef i64[:] dx = data
    for j in range(n):
        for t in range(<Py_ssize_t>I[j].size()):
            ix[pos] = I[j][t]
            dx[pos] = X[j][t]
            pos += 1
        ip[j + 1] = pos
    return indptr, indices, data


def reduce_columns(indptr, indices, data, i64 p, clear=None, bint track=False):
    cdef const i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[:] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const i64[:] dx = np.ascontiguousarray(data, dtype=np.int64)
    cdef Py_ssize_t ncols = ip.shape[0] - 1, j, t
    cdef bint has_clear = clear is not None
    cdef const cnp.uint8_t[:] cl
    if has_clear:
        cl = np.ascontiguousarray(clear, dtype=np.uint8)
    low = np.full(ncols, -1, dtype=np.int64)
    cdef i64[:] lo = low
    cdef vector[vector[i64]] RI = vector[vector[i64]](ncols)
    cdef vector[vector[i64]] RX = vector[vector[i64]](ncols)
    cdef vector[vector[i64]] VI = vector[vector[i64]](ncols)
    cdef vector[vector[i64]] VX = vector[vector[i64]](ncols)
    cdef unordered_map[i64, i64] pivot
    cdef unordered_map[i64, i64].iterator it
    cdef vector[i64] ti, tv, ci, cv, wi, wv
    cdef i64 v, last, k, f
    with nogil:
        for j in range(ncols):
            if has_clear and cl[j]:
                continue
            ci.clear()
            cv.clear()
            # entries are sorted by row; merge duplicates
            for t in range(ip[j], ip[j + 1]):
                v = _mod(dx[t], p)
                if v == 0:
                    continue
                if ci.size() > 0 and ci.back() == ix[t]:
                    v = (cv.back() + v) % p
                    if v == 0:
                        ci.pop_back()
                        cv.pop_back()
                    else:
                        cv[cv.size() - 1] = v
                else:
                    ci.push_back(ix[t])
                    cv.push_back(v)
            wi.clear()
            wv.clear()
            if track:
                wi.push_back(j)
                wv.push_back(1)
            while ci.size() > 0:
                last = ci.back()
                it = pivot.find(last)
                if it == pivot.end():
                    break
                k = deref(it).second
                f = _mod(-cv.back() * _inv(RX[k].back(), p), p)
                _axpy(ci, cv, RI[k], RX[k], f, p, ti, tv)
                if track:
                    _axpy(wi, wv, VI[k], VX[k], f, p, ti, tv)
            RI[j].swap(ci)
            RX[j].swap(cv)
            if track:
                VI[j].swap(wi)
                VX[j].swap(wv)
            if RI[j].size() > 0:
                lo[j] = RI[j].back()
                pivot[RI[j].back()] = j
    return low, _pack(RI, RX), _pack(VI, VX)


cdef inline double _subset_min(Search* S) noexcept nogil:
    cdef int i
    for i in range(S.k):
        S.used[i] = 0
        S.best_order[i] = i
    S.best_val = INFINITY
    _dfs(S, 0, 0.0)
    return S.best_val


def stacked_weights(mats, double p, bint cyclic, bint symmetric):
    """Weight of each matrix in an ``(M, k, k)`` stack (order ``0..k-1``, or min over orders)."""
    cdef const double[:, :, :] A = np.ascontiguousarray(mats, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], r
    cdef int k = <int>A.shape[1]
    cdef int kk = max(k, 1)
    out = np.empty(n, dtype=np.float64)
    cdef double[:] o = out
    cdef vector[double] w = vector[double](kk * kk)
    cdef vector[double] sub = vector[double](kk * kk)
    cdef vector[double] g = vector[double](kk)
    cdef vector[double] ends = vector[double](kk)
    cdef vector[int] order = vector[int](kk)
    cdef vector[int] used = vector[int](kk)
    cdef vector[int] best_order = vector[int](kk)
    cdef Search S
    cdef int i, j
    cdef double top, v, s
    S.k = k
    S.cyclic = cyclic
    S.w = w.data()
    S.sub = sub.data()
    S.g = g.data()
    S.ends = ends.data()
    S.order = order.data()
    S.used = used.data()
    S.best_order = best_order.data()
    with nogil:
        for r in range(n):
            if p == INFINITY:
                top = 0.0
                for i in range(k):
                    for j in range(i + 1, k):
                        v = A[r, i, j]
                        if v > top:
                            top = v
                o[r] = top
                continue
            for i in range(k):
                for j in range(k):
                    if p == 1.0:
                        w[i * k + j] = A[r, i, j]
                    else:
                        w[i * k + j] = pow(A[r, i, j], p)
            if symmetric:
                s = _subset_min(&S)
            elif cyclic:
                s = _cycle_power(w.data(), k, k, g.data())
            else:
                s = _path_power(w.data(), k, k, g.data())
            o[r] = _finish(s, p, cyclic)
    return out
