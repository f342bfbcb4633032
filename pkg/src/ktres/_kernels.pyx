# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot kernels; semantics match ``_kernels_py``."""
from math import gcd


def mono_mul(tuple a, tuple b, odd):
    cdef Py_ssize_t i = 0, j = 0, na = len(a), nb = len(b)
    cdef long swaps = 0, passed_odd = 0, total_odd_a = 0
    cdef list out
    if na == 0:
        return 1, b
    if nb == 0:
        return 1, a
    for pair in a:
        if pair[0] in odd:
            total_odd_a += 1
    out = []
    while i < na and j < nb:
        pa = <tuple>a[i]
        pb = <tuple>b[j]
        va = pa[0]
        vb = pb[0]
        if va < vb:
            out.append(pa)
            if va in odd:
                passed_odd += 1
            i += 1
        elif vb < va:
            if vb in odd:
                swaps += total_odd_a - passed_odd
            out.append(pb)
            j += 1
        else:
            if va in odd:
                return 0, None
            out.append((va, pa[1] + pb[1]))
            i += 1
            j += 1
    while i < na:
        out.append(a[i])
        i += 1
    while j < nb:
        out.append(b[j])
        j += 1
    return (-1 if swaps & 1 else 1), tuple(out)


cdef dict _content_normalize(dict row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def sparse_rank(rows):
    cdef dict pivots = {}
    cdef dict row, p, new
    cdef long rank = 0
    for r0 in sorted((r for r in rows if r), key=len):
        row = {k: v for k, v in (<dict>r0).items() if v}
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _content_normalize(row)
                rank += 1
                break
            a = p[c]
            b = row[c]
            g = gcd(a, b)
            a = a // g
            b = b // g
            new = {}
            for k, v in row.items():
                new[k] = a * v
            for k, v in p.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            row = _content_normalize(new) if new else new
    return rank


def bareiss_rank(matrix):
    cdef list m = [list(src) for src in matrix]
    cdef Py_ssize_t nrows = len(m), ncols, rank = 0, col, r, c, piv
    cdef list pr, row
    if nrows == 0:
        return 0
    ncols = len(m[0])
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if (<list>m[r])[col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        pv = pr[col]
        for r in range(rank + 1, nrows):
            row = m[r]
            f = row[col]
            for c in range(col + 1, ncols):
                row[c] = (pv * row[c] - f * pr[c]) // prev
            row[col] = 0
        prev = pv
        rank += 1
    return rank
