"""Pure-Python reference versions of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; ``ktres.kernels`` picks one.
"""
from math import gcd


def mono_mul(a, b, odd):
    """Multiply two sorted sparse monomials of a graded-commutative algebra.

    ``a`` and ``b`` are tuples of ``(var, exp)`` pairs sorted by ``var``;
    ``odd`` is a container of odd variables. Returns ``(sign, monomial)``,
    with sign 0 (and monomial None) when an odd variable would be squared.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    total_odd_a = 0
    for v, _ in a:
        if v in odd:
            total_odd_a += 1
    out = []
    swaps = 0
    passed_odd = 0
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        va, ea = a[i]
        vb, eb = b[j]
        if va < vb:
            out.append(a[i])
            if va in odd:
                passed_odd += 1
            i += 1
        elif vb < va:
            if vb in odd:
                swaps += total_odd_a - passed_odd
            out.append(b[j])
            j += 1
        else:
            if va in odd:
                return 0, None
            out.append((va, ea + eb))
            i += 1
            j += 1
    if i < na:
        out.extend(a[i:])
    if j < nb:
        # Remaining b variables exceed every a variable: no swaps.
        out.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


def _content_normalize(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def sparse_rank(rows):
    """Rank of integer sparse rows (dicts col -> int) by fraction-free elimination.

    Each incoming row is cross-multiplied against the stored pivot row that
    owns its leading column, then divided by its content, so entries stay
    integral and small.
    """
    pivots = {}
    rank = 0
    for row in sorted((r for r in rows if r), key=len):
        row = {k: v for k, v in row.items() if v}
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
            a //= g
            b //= g
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
    """Rank of a dense integer matrix (list of lists) by one-step Bareiss elimination."""
    m = [list(r) for r in matrix]
    nrows = len(m)
    if nrows == 0:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = None
        for r in range(rank, nrows):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
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
