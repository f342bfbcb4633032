"""Exact sparse linear algebra over Q.

Vectors are dicts ``index -> Fraction`` (zero entries absent). Ranks go
through the fraction-free integer kernel; everything that needs actual
vectors (kernels, echelon forms, solving) runs over ``Fraction`` here.
"""
from fractions import Fraction
from math import lcm

from . import kernels


def integerize(vec):
    """Scale a rational vector to a primitive-free integer vector of the same span."""
    if not vec:
        return {}
    den = 1
    for v in vec.values():
        den = lcm(den, Fraction(v).denominator)
    return {k: int(Fraction(v) * den) for k, v in vec.items() if v}


def rank(vectors):
    return kernels.sparse_rank([integerize(v) for v in vectors if v])


def _axpy(target, scale, src):
    """target += scale * src, in place."""
    for k, v in src.items():
        w = target.get(k, 0) + scale * v
        if w:
            target[k] = w
        else:
            target.pop(k, None)


class Echelon:
    """Incrementally built row echelon form with combination tracking.

    Pivot of a row is its smallest index; ``tags`` records which input
    combination produced each stored row.
    """

    def __init__(self):
        self.rows = {}  # pivot -> (row, tag)

    def reduce(self, vec, tag=None):
        vec = dict(vec)
        tag = dict(tag or {})
        while vec:
            c = min(vec)
            hit = self.rows.get(c)
            if hit is None:
                break
            row, rtag = hit
            f = -vec[c]
            _axpy(vec, f, row)
            _axpy(tag, f, rtag)
        return vec, tag

    def add(self, vec, tag=None):
        """Insert ``vec``; return its reduced form (empty if it was dependent) and tag."""
        vec, tag = self.reduce(vec, tag)
        if vec:
            c = min(vec)
            inv = 1 / Fraction(vec[c])
            vec = {k: v * inv for k, v in vec.items()}
            tag = {k: v * inv for k, v in tag.items()}
            self.rows[c] = (vec, tag)
        return vec, tag

    def __len__(self):
        return len(self.rows)

    def fully_reduce(self, vec):
        """Eliminate every pivot column from ``vec`` (not just the leading one)."""
        vec = dict(vec)
        for c in sorted(self.rows):
            if c in vec:
                row, _ = self.rows[c]
                _axpy(vec, -vec[c], row)
        return vec


def rref(vectors):
    """Reduced row echelon basis of the span of ``vectors``, sorted by pivot."""
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    pivots = sorted(ech.rows)
    out = []
    for c in reversed(pivots):
        row = dict(ech.rows[c][0])
        for c2 in pivots:
            if c2 > c and c2 in row:
                _axpy(row, -row[c2], ech.rows[c2][0])
        ech.rows[c] = (row, ech.rows[c][1])
        out.append(row)
    out.reverse()
    return out


def nullspace(vectors):
    """Basis (in RREF over input positions) of ``{c : sum_i c_i vectors[i] = 0}``."""
    ech = Echelon()
    kernel = []
    for i, v in enumerate(vectors):
        red, tag = ech.add(v, {i: Fraction(1)})
        if not red:
            kernel.append(tag)
    return rref(kernel)


def solve(vectors, target):
    """Some ``c`` with ``sum_i c_i vectors[i] == target``, or None."""
    ech = Echelon()
    for i, v in enumerate(vectors):
        ech.add(v, {i: Fraction(1)})
    rest, tag = ech.reduce(target, {})
    if rest:
        return None
    return {k: -v for k, v in tag.items() if v}


def matvec(vectors, coeffs):
    """``sum_i coeffs[i] * vectors[i]``."""
    out = {}
    for i, c in coeffs.items():
        _axpy(out, c, vectors[i])
    return out
