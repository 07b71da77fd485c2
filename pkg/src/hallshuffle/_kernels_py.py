"""Pure-Python/numpy implementations of the enumeration kernels.

Same API as the compiled ``_ckernels`` module.  Field elements are integer
codes ``0..q-1``; ``add`` and ``mul`` are flat ``q*q`` tables and ``inv`` is a
length-``q`` table (``inv[0]`` unused).
"""

from __future__ import annotations

import itertools

import numpy as np

BACKEND = "python"


def _tables(q, add, mul, inv):
    add = [int(x) for x in add]
    mul = [int(x) for x in mul]
    inv = [int(x) for x in inv]
    return add, mul, inv


def _neg_table(q, add):
    neg = [0] * q
    for a in range(q):
        for b in range(q):
            if add[a * q + b] == 0:
                neg[a] = b
                break
    return neg


def _rank(rows, ncols, q, add, mul, inv, neg):
    """Rank of a list of row lists (destroyed)."""
    rank = 0
    nrows = len(rows)
    for col in range(ncols):
        piv = -1
        for r in range(rank, nrows):
            if rows[r][col]:
                piv = r
                break
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        s = inv[prow[col]]
        if s != 1:
            for c in range(col, ncols):
                prow[c] = mul[prow[c] * q + s]
        for r in range(nrows):
            if r != rank:
                row = rows[r]
                f = row[col]
                if f:
                    nf = neg[f]
                    for c in range(col, ncols):
                        if prow[c]:
                            row[c] = add[row[c] * q + mul[prow[c] * q + nf]]
        rank += 1
        if rank == nrows:
            break
    return rank


def gf_rank(q, add, mul, inv, matrix):
    """Rank over F_q of a 2-D integer array of field codes."""
    add, mul, inv = _tables(q, add, mul, inv)
    neg = _neg_table(q, add)
    m = np.asarray(matrix, dtype=np.int64)
    if m.size == 0:
        return 0
    rows = [list(map(int, r)) for r in m]
    return _rank(rows, m.shape[1], q, add, mul, inv, neg)


def _rref_subspaces(n, q):
    """Yield every subspace of F_q^n as a list of RREF rows (pivot, row)."""
    field = range(q)
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            pset = set(pivots)
            free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pset]
            for vals in itertools.product(field, repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, p in enumerate(pivots):
                    rows[r][p] = 1
                for (r, c), x in zip(free, vals):
                    rows[r][c] = x
                yield pivots, rows


def subspace_census(q, add, mul, inv, n, pi_next, depth):
    """Histogram of pi-stable subspaces N of F_q^n.

    ``pi_next[j]`` is the basis index hit by pi from basis vector j (or -1);
    ``depth[j]`` is the largest i with e_j in pi^i M.  Returns a dict
    ``(sub_dims, quot_dims) -> count`` with ``sub_dims[i] = dim pi^i N`` and
    ``quot_dims[i] = dim pi^i(M/N)`` for i = 0..n.
    """
    add, mul, inv = _tables(q, add, mul, inv)
    neg = _neg_table(q, add)
    pi_next = [int(x) for x in pi_next]
    depth = [int(x) for x in depth]
    out: dict = {}

    def apply_pi(vec):
        w = [0] * n
        for j, x in enumerate(vec):
            if x and pi_next[j] >= 0:
                w[pi_next[j]] = x
        return w

    for pivots, rows in _rref_subspaces(n, q):
        stable = True
        for row in rows:
            w = apply_pi(row)
            for r, p in enumerate(pivots):
                f = w[p]
                if f:
                    nf = neg[f]
                    base = rows[r]
                    for c in range(n):
                        if base[c]:
                            w[c] = add[w[c] * q + mul[base[c] * q + nf]]
            if any(w):
                stable = False
                break
        if not stable:
            continue
        k = len(rows)
        sub = [k]
        cur = [list(r) for r in rows]
        for _ in range(n):
            cur = [apply_pi(r) for r in cur]
            cur = [r for r in cur if any(r)]
            if cur:
                tmp = [list(r) for r in cur]
                rk = _rank(tmp, n, q, add, mul, inv, neg)
                # keep an independent spanning set
                cur = tmp[:rk]
            sub.append(len(cur))
        quot = []
        for i in range(n + 1):
            keep = [c for c in range(n) if depth[c] < i]
            proj = [[r[c] for c in keep] for r in rows]
            rk = _rank(proj, len(keep), q, add, mul, inv, neg) if keep else 0
            # dim(pi^i M + N) - dim N
            quot.append(n - len(keep) + rk - k)
        key = (tuple(sub), tuple(quot))
        out[key] = out.get(key, 0) + 1
    return out


def ext_census(q, add, mul, inv, ncoords, blocks, projective=True):
    """Histogram of nullity profiles of coordinate-pattern matrices.

    Each block is ``(nrows, ncols, idx)`` with ``idx`` a flat row-major list:
    entry = e[idx] (or 0 when idx < 0).  For every e in F_q^ncoords the tuple of
    nullities (ncols - rank) over all blocks is recorded.  With ``projective``
    only normalized representatives are visited and weighted by q-1.
    """
    add, mul, inv = _tables(q, add, mul, inv)
    neg = _neg_table(q, add)
    blocks = [(int(a), int(b), [int(x) for x in idx]) for a, b, idx in blocks]
    out: dict = {}

    def profile(e):
        prof = []
        for nr, nc, idx in blocks:
            if nr == 0 or nc == 0:
                prof.append(nc)
                continue
            rows = [[e[idx[r * nc + c]] if idx[r * nc + c] >= 0 else 0 for c in range(nc)] for r in range(nr)]
            prof.append(nc - _rank(rows, nc, q, add, mul, inv, neg))
        return tuple(prof)

    zero = [0] * ncoords
    key = profile(zero)
    out[key] = 1
    if ncoords == 0:
        return out
    if not projective:
        for vals in itertools.product(range(q), repeat=ncoords):
            if not any(vals):
                continue
            key = profile(list(vals))
            out[key] = out.get(key, 0) + 1
        return out
    for lead in range(ncoords):
        for vals in itertools.product(range(q), repeat=ncoords - lead - 1):
            e = [0] * lead + [1] + list(vals)
            key = profile(e)
            out[key] = out.get(key, 0) + (q - 1)
    return out


def irreducible_sieve(q, add, mul, D):
    """Monic irreducible polynomials over F_q of degree 1..D.

    Polynomials are encoded as integers sum(code_i * q^i).  Returns a list
    ``res`` with ``res[d]`` a sorted numpy array of codes (``res[0]`` empty).
    """
    add_t = np.asarray(add, dtype=np.int64).reshape(q, q)
    mul_t = np.asarray(mul, dtype=np.int64).reshape(q, q)
    res = [np.zeros(0, dtype=np.int64)]
    digits_cache = {}

    def digits(m):
        # all q^m digit vectors of length m, row i = base-q digits of i
        if m not in digits_cache:
            idx = np.arange(q ** m, dtype=np.int64)
            cols = [(idx // q ** j) % q for j in range(m)]
            digits_cache[m] = np.stack(cols, axis=1) if m else np.zeros((1, 0), dtype=np.int64)
        return digits_cache[m]

    for d in range(1, D + 1):
        reducible = np.zeros(q ** d, dtype=bool)
        for e in range(1, d // 2 + 1):
            g = digits(d - e)  # lower digits of monic g, top digit 1
            gfull = np.concatenate([g, np.ones((g.shape[0], 1), dtype=np.int64)], axis=1)
            for fcode in res[e]:
                f = [(int(fcode) // q ** j) % q for j in range(e + 1)]
                code = np.zeros(g.shape[0], dtype=np.int64)
                for k in range(d):
                    ck = np.zeros(g.shape[0], dtype=np.int64)
                    for i in range(max(0, k - (d - e)), min(e, k) + 1):
                        if f[i]:
                            ck = add_t[ck, mul_t[f[i], gfull[:, k - i]]]
                    code += ck * q ** k
                reducible[code] = True
        lower = np.nonzero(~reducible)[0].astype(np.int64)
        res.append(lower + q ** d)
    return res
