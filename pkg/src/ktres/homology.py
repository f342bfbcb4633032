"""Homology of a free graded-commutative complex in finite (degree, weight) slices.

In graded mode the slice ``(n, w)`` is spanned by monomials of homological
degree ``n`` and weight exactly ``w``. In filtered mode it is the cumulative
span of weights ``<= w``; boundaries are then searched up to ``w + headroom``
and the resulting numbers are only one-sided (upper bounds).
"""
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import CapExceeded, ContractViolation
from .gca import GcaElement, _mono_sort_key
from .groebner import monomials_of_degree
from .poly import Poly, grevlex_key

MAX_SLICE_DIM = 20000
MAX_WEIGHT = 16

GRADED = "GRADED"
FILTERED = "FILTERED"
VERIFIED = "VERIFIED"
ONE_SIDED = "VERIFIED-ONE-SIDED"


@dataclass
class WeightSlice:
    n: int
    w: int
    basis: list  # [(generator monomial, ring exponent)]
    index: dict = field(repr=False)
    cumulative: bool = False

    def __len__(self):
        return len(self.basis)

    def element(self, vec, algebra):
        """GcaElement with coordinates ``vec`` in this slice's basis."""
        nv = algebra.ring.nvars
        terms = {}
        for pos, c in vec.items():
            m, k = self.basis[pos]
            terms.setdefault(m, {})[k] = Fraction(c)
        return GcaElement(algebra, {m: algebra.ring.nf(Poly(nv, t)) for m, t in terms.items()})

    def vector(self, elem):
        vec = {}
        for m, c in elem.terms.items():
            for k, v in c.terms.items():
                pos = self.index.get((m, k))
                if pos is None:
                    raise ContractViolation(f"term {k}*{m} lies outside slice ({self.n}, {self.w})")
                vec[pos] = vec.get(pos, 0) + v
        return {p: v for p, v in vec.items() if v}


@dataclass
class BettiWindow:
    entries: dict  # (n, w) -> int
    max_n: int
    max_w: int
    mode: str = GRADED
    min_n: int = 0

    @property
    def label(self):
        return VERIFIED if self.mode == GRADED else ONE_SIDED

    def __getitem__(self, key):
        return self.entries[key]

    def nonzero(self):
        return {k: v for k, v in self.entries.items() if v}

    def to_tsv(self):
        lines = [f"# bounds: n={self.min_n}..{self.max_n} w=0..{self.max_w} mode={self.mode} status={self.label}"]
        lines.append("n\\w\t" + "\t".join(str(w) for w in range(self.max_w + 1)))
        for n in range(self.min_n, self.max_n + 1):
            lines.append(f"{n}\t" + "\t".join(str(self.entries[(n, w)]) for w in range(self.max_w + 1)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = dict(tok.split("=", 1) for tok in lines[0][len("# bounds:"):].split())
        n0, n1 = map(int, head["n"].split(".."))
        w1 = int(head["w"].split("..")[1])
        entries = {}
        for ln in lines[2:]:
            cells = ln.split("\t")
            n = int(cells[0])
            for w, v in enumerate(cells[1:]):
                entries[(n, w)] = int(v)
        return cls(entries, n1, w1, head["mode"], n0)


def _cache(state):
    c = getattr(state, "_homology_cache", None)
    if c is None:
        c = {"slices": {}, "images": {}, "out": {}, "rank": {}, "dmono": {}}
        state._homology_cache = c
    return c


def _gen_monomials(algebra, n, wmax):
    """Generator monomials of homological degree n and weight <= wmax."""
    gens = algebra.generators
    out = []

    def rec(i, deg_left, w_left, acc):
        if deg_left == 0:
            out.append(tuple(acc))
            return
        if i == len(gens):
            return
        g = gens[i]
        rec(i + 1, deg_left, w_left, acc)
        max_e = 1 if g.parity else deg_left // g.degree
        for e in range(1, max_e + 1):
            if g.degree * e > deg_left or g.weight * e > w_left:
                break
            acc.append((i, e))
            rec(i + 1, deg_left - g.degree * e, w_left - g.weight * e, acc)
            acc.pop()

    rec(0, n, wmax, [])
    return out


def slice_basis(state, n, w, cap=None, cumulative=None):
    """Enumerate the slice; cumulative (weights <= w) by default in filtered mode."""
    cap = MAX_SLICE_DIM if cap is None else cap
    if cumulative is None:
        cumulative = not state.graded
    key = (n, w, cumulative)
    cache = _cache(state)["slices"]
    if key in cache:
        return cache[key]
    if w > MAX_WEIGHT:
        raise CapExceeded(f"weight {w} exceeds cap {MAX_WEIGHT}")
    alg = state.algebra
    ring = alg.ring
    basis = []
    if n >= 0 and w >= 0:
        for gm in _gen_monomials(alg, n, w):
            gw = alg.mono_weight(gm)
            degs = range(0, w - gw + 1) if cumulative else [w - gw]
            for d in degs:
                for k in ring.standard_monomials(d):
                    basis.append((gm, k))
                    if len(basis) > cap:
                        raise CapExceeded(f"slice ({n}, {w}) exceeds dimension cap {cap}")
    basis.sort(key=lambda mk: (_mono_sort_key(mk[0]), grevlex_key(mk[1])), reverse=True)
    sl = WeightSlice(n, w, basis, {b: i for i, b in enumerate(basis)}, cumulative)
    cache[key] = sl
    return sl


def _d_of_monomial(state, gm):
    cache = _cache(state)["dmono"]
    got = cache.get(gm)
    if got is None:
        alg = state.algebra
        got = state.differential.apply(GcaElement(alg, {gm: alg.ring.one()}))
        cache[gm] = got
    return got


def _images(state, sl):
    """Images under d of the basis of ``sl``, in coordinates of the target slice."""
    key = (sl.n, sl.w, sl.cumulative)
    cache = _cache(state)["images"]
    if key in cache:
        return cache[key]
    target = slice_basis(state, sl.n - 1, sl.w, cumulative=sl.cumulative)
    ring = state.algebra.ring
    nv = ring.nvars
    vecs = []
    for gm, k in sl.basis:
        dg = _d_of_monomial(state, gm)
        vec = {}
        for m, c in dg.terms.items():
            cc = ring.nf(c.mul_term(k, 1)) if any(k) else c
            for kk, v in cc.terms.items():
                pos = target.index.get((m, kk))
                if pos is None:
                    raise ContractViolation(
                        f"differential leaves slice ({sl.n - 1}, {sl.w}); complex is not weight-graded"
                    )
                vec[pos] = vec.get(pos, 0) + v
        vecs.append({p: v for p, v in vec.items() if v})
    cache[key] = vecs
    return vecs


def _rank(state, n, w, cumulative):
    key = (n, w, cumulative)
    cache = _cache(state)["rank"]
    if key not in cache:
        sl = slice_basis(state, n, w, cumulative=cumulative)
        cache[key] = 0 if n <= 0 or not len(sl) else linalg.rank(_images(state, sl))
    return cache[key]


def _headroom(state):
    return max((g.weight for g in state.algebra.generators), default=0)


def _boundary_vectors(state, n, w):
    """Vectors (in slice (n, w) coordinates) spanning the boundaries landing in the slice."""
    if state.graded:
        return [v for v in _images(state, slice_basis(state, n + 1, w, cumulative=False)) if v]
    big = slice_basis(state, n, w + _headroom(state), cumulative=True)
    src = slice_basis(state, n + 1, w + _headroom(state), cumulative=True)
    small = slice_basis(state, n, w, cumulative=True)
    imgs = [v for v in _images(state, src) if v]
    outside = [{p: c for p, c in v.items() if big.basis[p] not in small.index} for v in imgs]
    combos = linalg.nullspace(outside)
    out = []
    for cmb in combos:
        v = linalg.matvec(imgs, cmb)
        out.append({small.index[big.basis[p]]: c for p, c in v.items()})
    return out


def betti(state, n, w):
    """dim H_n at weight w (graded) or the one-sided filtered count."""
    if n < 0:
        return 0
    if state.graded:
        sl = slice_basis(state, n, w, cumulative=False)
        dim = len(sl)
        if not dim:
            return 0
        return dim - _rank(state, n, w, False) - _rank(state, n + 1, w, False)
    sl = slice_basis(state, n, w, cumulative=True)
    dim = len(sl)
    if not dim:
        return 0
    return dim - _rank(state, n, w, True) - linalg.rank(_boundary_vectors(state, n, w))


def betti_window(state, max_n, max_w, min_n=0):
    entries = {(n, w): betti(state, n, w) for n in range(min_n, max_n + 1) for w in range(max_w + 1)}
    return BettiWindow(entries, max_n, max_w, GRADED if state.graded else FILTERED, min_n)


def cycle_representatives(state, n, w):
    """Canonical representatives of a basis of H_n at weight w.

    Representatives are the reduced row echelon form (basis order = global
    monomial order, pivot = leading term) of the cycles modulo boundaries,
    with every boundary pivot eliminated.
    """
    sl = slice_basis(state, n, w)
    if not len(sl):
        return []
    if n > 0:
        cycles = linalg.nullspace(_images(state, sl))
    else:
        cycles = [{i: Fraction(1)} for i in range(len(sl))]
    if not cycles:
        return []
    ech = linalg.Echelon()
    for b in _boundary_vectors(state, n, w):
        ech.add(b)
    rest = [r for r in (ech.fully_reduce(z) for z in cycles) if r]
    return [sl.element(v, state.algebra) for v in linalg.rref(rest)]


def is_cycle(state, z):
    return not state.differential.apply(z)


def boundary_preimage(state, z):
    """Some chain c with d(c) = z inside the certified window, or None."""
    z = z.lift(state.algebra) if z.algebra is not state.algebra else z
    if not z:
        return state.algebra.zero()
    if not is_cycle(state, z):
        raise ContractViolation(f"{z} is not a cycle")
    n = z.degree()
    total = state.algebra.zero()
    if state.graded:
        parts = z.weight_components().items()
    else:
        parts = [(z.max_weight(), z)]
    for w, part in parts:
        if state.graded:
            src = slice_basis(state, n + 1, w, cumulative=False)
            tgt = slice_basis(state, n, w, cumulative=False)
        else:
            src = slice_basis(state, n + 1, w + _headroom(state), cumulative=True)
            tgt = slice_basis(state, n, w + _headroom(state), cumulative=True)
        coeffs = linalg.solve(_images(state, src), tgt.vector(part))
        if coeffs is None:
            return None
        total = total + src.element(coeffs, state.algebra)
    return total


def verify_slice_composition(state, n, w):
    """d∘d vanishes at matrix level from slice (n+1, w) through (n, w) to (n-1, w)."""
    cumulative = not state.graded
    upper = slice_basis(state, n + 1, w, cumulative=cumulative)
    mid = slice_basis(state, n, w, cumulative=cumulative)
    if not len(upper) or not len(mid) or n <= 0:
        return True
    ins = _images(state, upper)
    outs = _images(state, mid)
    return all(not linalg.matvec(outs, v) for v in ins)


def computed_slices(state):
    return sorted({(n, w, c) for (n, w, c) in _cache(state)["images"]})


def verify_all_computed(state):
    """d∘d = 0 and rank-nullity on every slice touched so far; returns failing keys."""
    bad = []
    for n, w, c in computed_slices(state):
        if c != (not state.graded):
            continue
        if not verify_slice_composition(state, n - 1, w):
            bad.append((n, w))
            continue
        sl = slice_basis(state, n, w, cumulative=c)
        r = _rank(state, n, w, c)
        if r + len(linalg.nullspace(_images(state, sl))) != len(sl):
            bad.append((n, w))
    return bad
