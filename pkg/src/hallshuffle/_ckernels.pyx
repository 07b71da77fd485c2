# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernels; API mirrors ``_kernels_py``."""

import numpy as np

BACKEND = "cython"

cdef enum:
    MAXN = 24


cdef int _neg(int q, const long[:] add, int a) nogil:
    cdef int b
    for b in range(q):
        if add[a * q + b] == 0:
            return b
    return 0


cdef int _rank_inplace(long[:, :] m, int nrows, int ncols, int q,
                       const long[:] add, const long[:] mul, const long[:] inv,
                       const long[:] neg) nogil:
    cdef int rank = 0, col, r, c, piv, f, nf, s
    cdef long tmp
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if m[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for c in range(ncols):
                tmp = m[rank, c]
                m[rank, c] = m[piv, c]
                m[piv, c] = tmp
        s = inv[m[rank, col]]
        if s != 1:
            for c in range(col, ncols):
                m[rank, c] = mul[m[rank, c] * q + s]
        for r in range(nrows):
            if r != rank:
                f = m[r, col]
                if f != 0:
                    nf = neg[f]
                    for c in range(col, ncols):
                        if m[rank, c] != 0:
                            m[r, c] = add[m[r, c] * q + mul[m[rank, c] * q + nf]]
        rank += 1
    return rank


def _as_tables(q, add, mul, inv):
    a = np.ascontiguousarray(add, dtype=np.int_)
    m = np.ascontiguousarray(mul, dtype=np.int_)
    i = np.ascontiguousarray(inv, dtype=np.int_)
    neg = np.zeros(q, dtype=np.int_)
    for x in range(q):
        for y in range(q):
            if a[x * q + y] == 0:
                neg[x] = y
                break
    return a, m, i, neg


def gf_rank(int q, add, mul, inv, matrix):
    a, m, i, neg = _as_tables(q, add, mul, inv)
    mat = np.array(matrix, dtype=np.int_, ndmin=2, copy=True)
    if mat.size == 0:
        return 0
    cdef long[:, :] mv = mat
    return _rank_inplace(mv, mat.shape[0], mat.shape[1], q, a, m, i, neg)


def subspace_census(int q, add, mul, inv, int n, pi_next, depth):
    if n > MAXN:
        raise ValueError("dimension too large")
    a_np, m_np, i_np, neg_np = _as_tables(q, add, mul, inv)
    cdef const long[:] A = a_np
    cdef const long[:] M = m_np
    cdef const long[:] I = i_np
    cdef const long[:] NEG = neg_np
    pn_np = np.ascontiguousarray(pi_next, dtype=np.int_)
    dp_np = np.ascontiguousarray(depth, dtype=np.int_)
    cdef const long[:] PN = pn_np
    cdef const long[:] DP = dp_np
    rows_np = np.zeros((MAXN, MAXN), dtype=np.int_)
    work_np = np.zeros((MAXN, MAXN), dtype=np.int_)
    cdef long[:, :] rows = rows_np
    cdef long[:, :] work = work_np
    cdef long w[MAXN]
    cdef int pivots[MAXN]
    cdef int free_r[MAXN * MAXN]
    cdef int free_c[MAXN * MAXN]
    cdef int vals[MAXN * MAXN]
    cdef int mask, k, nfree, r, c, j, idx, f, nf, i, cnt, rk, stable, p, nkeep
    cdef int sub[MAXN + 1]
    cdef int quot[MAXN + 1]
    cdef int ispiv[MAXN]
    out = {}
    for mask in range(1 << n):
        k = 0
        for c in range(n):
            ispiv[c] = 0
            if (mask >> c) & 1:
                pivots[k] = c
                ispiv[c] = 1
                k += 1
        nfree = 0
        for r in range(k):
            for c in range(pivots[r] + 1, n):
                if not ispiv[c]:
                    free_r[nfree] = r
                    free_c[nfree] = c
                    nfree += 1
        for j in range(nfree):
            vals[j] = 0
        while True:
            # build RREF rows
            for r in range(k):
                for c in range(n):
                    rows[r, c] = 0
                rows[r, pivots[r]] = 1
            for j in range(nfree):
                rows[free_r[j], free_c[j]] = vals[j]
            # pi-stability
            stable = 1
            for r in range(k):
                for c in range(n):
                    w[c] = 0
                for c in range(n):
                    if rows[r, c] != 0 and PN[c] >= 0:
                        w[PN[c]] = rows[r, c]
                for i in range(k):
                    p = pivots[i]
                    f = w[p]
                    if f != 0:
                        nf = NEG[f]
                        for c in range(n):
                            if rows[i, c] != 0:
                                w[c] = A[w[c] * q + M[rows[i, c] * q + nf]]
                for c in range(n):
                    if w[c] != 0:
                        stable = 0
                        break
                if not stable:
                    break
            if stable:
                # dims of pi^i N
                for r in range(k):
                    for c in range(n):
                        work[r, c] = rows[r, c]
                cnt = k
                sub[0] = k
                for i in range(1, n + 1):
                    for r in range(cnt):
                        for c in range(n):
                            w[c] = 0
                        for c in range(n):
                            if work[r, c] != 0 and PN[c] >= 0:
                                w[PN[c]] = work[r, c]
                        for c in range(n):
                            work[r, c] = w[c]
                    if cnt > 0:
                        cnt = _rank_inplace(work, cnt, n, q, A, M, I, NEG)
                    sub[i] = cnt
                # dims of pi^i (M/N)
                for i in range(n + 1):
                    nkeep = 0
                    for c in range(n):
                        if DP[c] < i:
                            nkeep += 1
                    for r in range(k):
                        idx = 0
                        for c in range(n):
                            if DP[c] < i:
                                work[r, idx] = rows[r, c]
                                idx += 1
                    if k > 0 and nkeep > 0:
                        rk = _rank_inplace(work, k, nkeep, q, A, M, I, NEG)
                    else:
                        rk = 0
                    quot[i] = n - nkeep + rk - k
                key = (tuple([sub[i] for i in range(n + 1)]), tuple([quot[i] for i in range(n + 1)]))
                out[key] = out.get(key, 0) + 1
            # next assignment of free entries
            j = 0
            while j < nfree:
                vals[j] += 1
                if vals[j] < q:
                    break
                vals[j] = 0
                j += 1
            if j == nfree:
                break
    return out


def ext_census(int q, add, mul, inv, int ncoords, blocks, projective=True):
    a_np, m_np, i_np, neg_np = _as_tables(q, add, mul, inv)
    cdef const long[:] A = a_np
    cdef const long[:] M = m_np
    cdef const long[:] I = i_np
    cdef const long[:] NEG = neg_np
    cdef int nb = len(blocks)
    nr_np = np.array([blk[0] for blk in blocks], dtype=np.int_)
    nc_np = np.array([blk[1] for blk in blocks], dtype=np.int_)
    off = [0]
    total = 0
    for blk in blocks:
        total += int(blk[0]) * int(blk[1])
        off.append(total)
    off_np = np.array(off, dtype=np.int_)
    idx_np = np.array([x for blk in blocks for x in blk[2]] + [0], dtype=np.int_)
    cdef const long[:] NR = nr_np
    cdef const long[:] NC = nc_np
    cdef const long[:] OFF = off_np
    cdef const long[:] IDX = idx_np
    maxr = max([int(blk[0]) for blk in blocks] + [1])
    maxc = max([int(blk[1]) for blk in blocks] + [1])
    mat_np = np.zeros((maxr, maxc), dtype=np.int_)
    cdef long[:, :] mat = mat_np
    e_np = np.zeros(max(ncoords, 1), dtype=np.int_)
    cdef long[:] e = e_np
    prof_np = np.zeros(max(nb, 1), dtype=np.int_)
    cdef long[:] prof = prof_np
    cdef int b, r, c, x, j, lead, weight
    out = {}
    # profile of e = 0
    key = tuple(int(NC[b]) for b in range(nb))
    out[key] = 1
    if ncoords == 0:
        return out
    weight = (q - 1) if projective else 1
    for lead in range(ncoords):
        for j in range(ncoords):
            e[j] = 0
        e[lead] = 1
        while True:
            if projective:
                for b in range(nb):
                    for r in range(NR[b]):
                        for c in range(NC[b]):
                            x = IDX[OFF[b] + r * NC[b] + c]
                            mat[r, c] = e[x] if x >= 0 else 0
                    if NR[b] == 0 or NC[b] == 0:
                        prof[b] = NC[b]
                    else:
                        prof[b] = NC[b] - _rank_inplace(mat, NR[b], NC[b], q, A, M, I, NEG)
                key = tuple([prof[b] for b in range(nb)])
                out[key] = out.get(key, 0) + weight
            else:
                for x in range(1, q):
                    e[lead] = x
                    for b in range(nb):
                        for r in range(NR[b]):
                            for c in range(NC[b]):
                                j = IDX[OFF[b] + r * NC[b] + c]
                                mat[r, c] = e[j] if j >= 0 else 0
                        if NR[b] == 0 or NC[b] == 0:
                            prof[b] = NC[b]
                        else:
                            prof[b] = NC[b] - _rank_inplace(mat, NR[b], NC[b], q, A, M, I, NEG)
                    key = tuple([prof[b] for b in range(nb)])
                    out[key] = out.get(key, 0) + 1
                e[lead] = 1
            j = lead + 1
            while j < ncoords:
                e[j] += 1
                if e[j] < q:
                    break
                e[j] = 0
                j += 1
            if j >= ncoords:
                break
    return out


def irreducible_sieve(int q, add, mul, int D):
    a_np = np.ascontiguousarray(add, dtype=np.int_)
    m_np = np.ascontiguousarray(mul, dtype=np.int_)
    cdef const long[:] A = a_np
    cdef const long[:] M = m_np
    cdef long d, e, size, gi, k, i, ck, code, qk, lo, hi, gsize
    cdef long f[64]
    cdef long g[64]
    cdef long[:] irr
    cdef unsigned char[:] red
    cdef Py_ssize_t fi
    res = [np.zeros(0, dtype=np.int_)]
    for d in range(1, D + 1):
        size = q ** d
        red_np = np.zeros(size, dtype=np.uint8)
        red = red_np
        for e in range(1, d // 2 + 1):
            irr = res[e]
            gsize = q ** (d - e)
            for fi in range(irr.shape[0]):
                code = irr[fi]
                for i in range(e + 1):
                    f[i] = code % q
                    code //= q
                for gi in range(gsize):
                    code = gi
                    for i in range(d - e):
                        g[i] = code % q
                        code //= q
                    g[d - e] = 1
                    code = 0
                    qk = 1
                    for k in range(d):
                        ck = 0
                        lo = k - (d - e)
                        if lo < 0:
                            lo = 0
                        hi = k if k < e else e
                        for i in range(lo, hi + 1):
                            if f[i] != 0 and g[k - i] != 0:
                                ck = A[ck * q + M[f[i] * q + g[k - i]]]
                        code += ck * qk
                        qk *= q
                    red[code] = 1
        lower = np.nonzero(red_np == 0)[0].astype(np.int_)
        res.append(lower + size)
    return res
