"""Gröbner bases (Buchberger with Gebauer–Möller pair pruning), ideals, quotient rings."""
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement

from .errors import StructuralError
from .poly import Poly, grevlex_key, mono_div, mono_divides, mono_lcm

ORDER = "grevlex"


def _coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def reduce_full(p, basis):
    """Fully reduce ``p`` by ``basis``, a list of ``(leading monomial, monic poly)``."""
    if not basis or not p.terms:
        return p
    n = p.nvars
    t = dict(p.terms)
    rem = {}
    while t:
        m = max(t, key=grevlex_key)
        c = t.pop(m)
        for lm, g in basis:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    k = tuple(a + b for a, b in zip(gm, q))
                    v = t.get(k, 0) - c * gc
                    if v:
                        t[k] = v
                    else:
                        t.pop(k, None)
                break
        else:
            rem[m] = c
    return Poly._raw(n, rem)


def _spoly(f, g, lf, lg):
    L = mono_lcm(lf, lg)
    return f.mul_term(mono_div(L, lf), 1) - g.mul_term(mono_div(L, lg), 1)


def buchberger(gens, order=ORDER):
    """Reduced Gröbner basis of ``gens`` as a tuple of monic polys, descending by leading monomial."""
    if order != ORDER:
        raise ValueError(f"unsupported monomial order {order!r}")
    polys = [g.monic() for g in gens if g]
    if not polys:
        return ()
    nvars = polys[0].nvars
    if any(p.nvars != nvars for p in polys):
        raise StructuralError("generators have different variable counts")

    store = []  # (lm, poly) for every basis element ever added
    active = []  # indices into store
    pairs = set()

    def update(h_idx):
        nonlocal active, pairs
        lh = store[h_idx][0]
        C = list(active)
        D = []
        while C:
            g1 = C.pop(0)
            l1 = mono_lcm(lh, store[g1][0])
            if _coprime(lh, store[g1][0]) or not any(
                mono_divides(mono_lcm(lh, store[g2][0]), l1) for g2 in C + D
            ):
                D.append(g1)
        E = [g for g in D if not _coprime(lh, store[g][0])]
        kept = set()
        for a, b in pairs:
            lab = mono_lcm(store[a][0], store[b][0])
            if (
                not mono_divides(lh, lab)
                or mono_lcm(store[a][0], lh) == lab
                or mono_lcm(lh, store[b][0]) == lab
            ):
                kept.add((a, b))
        for g in E:
            kept.add((g, h_idx))
        pairs = kept
        active = [g for g in active if not mono_divides(lh, store[g][0])] + [h_idx]

    for p in sorted(polys, key=lambda q: grevlex_key(q.leading()[0])):
        p = reduce_full(p, [store[i] for i in active])
        if p:
            p = p.monic()
            store.append((p.leading()[0], p))
            update(len(store) - 1)

    while pairs:
        a, b = min(
            pairs,
            key=lambda ab: (grevlex_key(mono_lcm(store[ab[0]][0], store[ab[1]][0])), ab),
        )
        pairs.discard((a, b))
        s = _spoly(store[a][1], store[b][1], store[a][0], store[b][0])
        h = reduce_full(s, [store[i] for i in active])
        if h:
            h = h.monic()
            store.append((h.leading()[0], h))
            update(len(store) - 1)

    basis = [store[i] for i in active]
    # minimal then reduced
    basis = [
        (lm, g)
        for k, (lm, g) in enumerate(basis)
        if not any(mono_divides(l2, lm) and (l2 != lm or j < k) for j, (l2, _) in enumerate(basis) if j != k)
    ]
    reduced = []
    for k, (lm, g) in enumerate(basis):
        others = [b for j, b in enumerate(basis) if j != k]
        tail = reduce_full(g - Poly.monomial(nvars, lm), others)
        reduced.append((lm, Poly.monomial(nvars, lm) + tail))
    reduced.sort(key=lambda b: grevlex_key(b[0]), reverse=True)
    return tuple(g for _, g in reduced)


def is_groebner(basis):
    """Every S-polynomial of ``basis`` reduces to zero (Buchberger criterion)."""
    pairs = [(g.leading()[0], g.monic()) for g in basis if g]
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            s = _spoly(pairs[i][1], pairs[j][1], pairs[i][0], pairs[j][0])
            if reduce_full(s, pairs):
                return False
    return True


class Ideal:
    """Finitely generated ideal of ``Q[x1..xn]`` with a lazily cached reduced Gröbner basis."""

    def __init__(self, nvars, generators=(), order=ORDER):
        gens = tuple(generators)
        for g in gens:
            if g.nvars != nvars:
                raise StructuralError(f"generator {g} has {g.nvars} variables, expected {nvars}")
        self.nvars = nvars
        self.generators = gens
        self.order = order

    @cached_property
    def groebner(self):
        return buchberger(self.generators, self.order)

    @cached_property
    def _reducers(self):
        return [(g.leading()[0], g) for g in self.groebner]

    @cached_property
    def leading_monomials(self):
        return tuple(lm for lm, _ in self._reducers)

    def normal_form(self, p):
        if p.nvars != self.nvars:
            raise StructuralError(f"polynomial has {p.nvars} variables, ideal has {self.nvars}")
        return reduce_full(p, self._reducers)

    def contains(self, p):
        return not self.normal_form(p)

    def is_zero(self):
        return not self.groebner

    def is_unit(self):
        return any(g.is_constant() for g in self.groebner)

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.groebner)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.nvars == other.nvars and self.order == other.order and self.groebner == other.groebner

    def __hash__(self):
        return hash((self.nvars, self.order, self.groebner))

    def __repr__(self):
        return f"Ideal({self.nvars}, [{', '.join(map(str, self.generators))}])"

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.generators
        return Ideal(self.nvars, self.generators + tuple(other), self.order)


def normal_form(p, ring):
    """Remainder of ``p`` modulo ``ring.modulus``; accepts a QuotientRing or an Ideal."""
    if isinstance(ring, Ideal):
        return ring.normal_form(p)
    return ring.nf(p)


def ideal_member(p, ideal):
    return ideal.contains(p)


def monomials_of_degree(nvars, d):
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        m = [0] * nvars
        for i in combo:
            m[i] += 1
        out.append(tuple(m))
    out.sort(key=grevlex_key, reverse=True)
    return out


class QuotientRing:
    """``Q[x1..xn] / modulus``; elements are ``Poly`` values kept in normal form."""

    def __init__(self, nvars, modulus=()):
        if not isinstance(modulus, Ideal):
            modulus = Ideal(nvars, tuple(modulus))
        if modulus.nvars != nvars:
            raise StructuralError("modulus variable count differs from ring")
        self.nvars = nvars
        self.modulus = modulus
        self.order = modulus.order
        self._std_cache = {}

    def nf(self, p):
        if isinstance(p, (int, Fraction)):
            p = Poly.const(self.nvars, p)
        return self.modulus.normal_form(p)

    def zero(self):
        return Poly.zero(self.nvars)

    def one(self):
        return self.nf(Poly.one(self.nvars))

    def var(self, i):
        return self.nf(Poly.var(self.nvars, i))

    def parse(self, text, line=None):
        return self.nf(Poly.parse(text, self.nvars, line))

    def is_graded(self):
        return self.modulus.is_homogeneous()

    def is_zero_ring(self):
        return self.modulus.is_unit()

    def is_standard(self, mono):
        return not any(mono_divides(lm, mono) for lm in self.modulus.leading_monomials)

    def standard_monomials(self, d):
        """Standard monomials of exact degree ``d`` (a basis of the degree-d piece when graded)."""
        got = self._std_cache.get(d)
        if got is None:
            got = tuple(m for m in monomials_of_degree(self.nvars, d) if self.is_standard(m))
            self._std_cache[d] = got
        return got

    def standard_monomial_count(self, d):
        return len(self.standard_monomials(d))

    def quotient_by(self, elements):
        """The ring ``self / (elements)`` as a new QuotientRing over the same variables."""
        return QuotientRing(self.nvars, self.modulus + tuple(elements))

    def __eq__(self, other):
        if not isinstance(other, QuotientRing):
            return NotImplemented
        return self.nvars == other.nvars and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.nvars, self.modulus))

    def describe(self):
        gens = "; ".join(str(g) for g in self.modulus.groebner)
        names = {0: "Q", 1: "Q[x1]"}.get(self.nvars, f"Q[x1..x{self.nvars}]")
        return names + (f"/({gens})" if gens else "")

    def __repr__(self):
        return f"QuotientRing({self.describe()})"
