"""Free graded-commutative algebras over a quotient ring, and graded derivations.

A monomial is a tuple of ``(generator index, exponent)`` pairs sorted by
index; the index is the generator's position in the algebra's canonical
order, ``(block, name)``. Odd generators appear with exponent 1 at most and
the Koszul sign of any reordering is absorbed into the coefficient.
"""
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractViolation, StructuralError
from .exprparse import join_terms, parse_expression
from .kernels import mono_mul
from .poly import Poly


def natural_key(name):
    """Sort key treating digit runs numerically, so ``t1_10`` follows ``t1_9``."""
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name))


_RESERVED = re.compile(r"^x\d+$")


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    weight: int = 0
    block: int = 0

    def __post_init__(self):
        if self.degree < 1:
            raise ContractViolation(f"generator {self.name} must have homological degree >= 1")
        if self.weight < 0:
            raise ContractViolation(f"generator {self.name} has negative weight")
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", self.name) or _RESERVED.match(self.name):
            raise ContractViolation(f"invalid generator name {self.name!r}")

    @property
    def parity(self):
        return self.degree % 2

    @property
    def sort_key(self):
        return (self.block, natural_key(self.name))

    def __str__(self):
        return f"{self.name}{{deg={self.degree},w={self.weight}}}"


class GcaAlgebra:
    """``ring ⊗ S[generators]`` with generators in canonical order."""

    def __init__(self, ring, generators=()):
        gens = tuple(sorted(generators, key=lambda g: g.sort_key))
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ContractViolation(f"duplicate generator names in {names}")
        self.ring = ring
        self.generators = gens
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.odd = frozenset(i for i, g in enumerate(gens) if g.parity)
        self._degrees = tuple(g.degree for g in gens)
        self._weights = tuple(g.weight for g in gens)

    def extend(self, new_generators):
        """Algebra with ``new_generators`` appended; they must sort after every existing one."""
        new = tuple(sorted(new_generators, key=lambda g: g.sort_key))
        if self.generators and new and new[0].sort_key <= self.generators[-1].sort_key:
            raise ContractViolation("new generators must come after existing ones in canonical order")
        return GcaAlgebra(self.ring, self.generators + new)

    def is_prefix_of(self, other):
        return (
            self is other
            or (self.ring == other.ring and other.generators[: len(self.generators)] == self.generators)
        )

    def generator(self, name):
        i = self.index[name]
        return GcaElement(self, {((i, 1),): self.ring.one()})

    def spec(self, name):
        return self.generators[self.index[name]]

    def zero(self):
        return GcaElement(self, {})

    def one(self):
        return self.scalar(1)

    def scalar(self, c):
        c = self.ring.nf(c if isinstance(c, Poly) else Poly.const(self.ring.nvars, c))
        return GcaElement(self, {(): c} if c else {})

    def mono_degree(self, mono):
        return sum(self._degrees[i] * e for i, e in mono)

    def mono_weight(self, mono):
        return sum(self._weights[i] * e for i, e in mono)

    def mono_str(self, mono):
        return "*".join(
            self.generators[i].name if e == 1 else f"{self.generators[i].name}^{e}" for i, e in mono
        )

    def parse(self, text, line=None):
        ring = self.ring

        def resolve(name):
            if name in self.index:
                return self.generator(name)
            if _RESERVED.match(name):
                return self.scalar(ring.parse(name))
            raise KeyError("not a ring variable or generator")

        return parse_expression(text, self.scalar, resolve, line)

    def __eq__(self, other):
        if not isinstance(other, GcaAlgebra):
            return NotImplemented
        return self.ring == other.ring and self.generators == other.generators

    def __hash__(self):
        return hash((self.ring, self.generators))

    def __repr__(self):
        return f"GcaAlgebra({self.ring.describe()}, [{', '.join(map(str, self.generators))}])"


def _mono_sort_key(mono):
    return tuple((-i, e) for i, e in mono)


class GcaElement:
    """Immutable element of a GcaAlgebra: ``{monomial: ring coefficient}``."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if c}

    # -- plumbing -------------------------------------------------------------

    def _common(self, other):
        if isinstance(other, GcaElement):
            a, b = self.algebra, other.algebra
            if a is b or a == b:
                return a, other
            if a.is_prefix_of(b):
                return b, other
            if b.is_prefix_of(a):
                return a, other
            raise StructuralError("elements belong to unrelated algebras")
        if isinstance(other, (int, Fraction, Poly)):
            return self.algebra, self.algebra.scalar(other)
        return None, None

    def lift(self, algebra):
        """View this element in an extension algebra."""
        if algebra is self.algebra:
            return self
        if not self.algebra.is_prefix_of(algebra):
            raise StructuralError("target algebra does not extend this element's algebra")
        return GcaElement(algebra, self.terms)

    def __add__(self, other):
        alg, other = self._common(other)
        if alg is None:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            v = c if v is None else v + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return GcaElement(alg, t)

    __radd__ = __add__

    def __neg__(self):
        return GcaElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        alg, other = self._common(other)
        if alg is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        alg, other = self._common(other)
        if alg is None:
            return NotImplemented
        ring = alg.ring
        odd = alg.odd
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = mono_mul(m1, m2, odd)
                if not s:
                    continue
                c = c1 * c2
                if s < 0:
                    c = -c
                prev = t.get(m)
                t[m] = c if prev is None else prev + c
        return GcaElement(alg, {m: ring.nf(c) for m, c in t.items()})

    def __rmul__(self, other):
        # scalars are central (degree 0)
        return self * other

    def __pow__(self, k):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c):
        ring = self.algebra.ring
        if not isinstance(c, Poly):
            c = Poly.const(ring.nvars, c)
        return GcaElement(self.algebra, {m: ring.nf(v * c) for m, v in self.terms.items()})

    # -- queries ---------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = self.algebra.scalar(other)
        if not isinstance(other, GcaElement):
            return NotImplemented
        if not (self.algebra.is_prefix_of(other.algebra) or other.algebra.is_prefix_of(self.algebra)):
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degrees(self):
        return {self.algebra.mono_degree(m) for m in self.terms}

    def degree(self):
        """Homological degree; ``None`` for zero, error if inhomogeneous."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ContractViolation(f"element {self} is not homogeneous in homological degree")
        return ds.pop()

    def weights(self):
        alg = self.algebra
        return {alg.mono_weight(m) + sum(k) for m, c in self.terms.items() for k in c.terms}

    def max_weight(self):
        return max(self.weights(), default=0)

    def is_weight_homogeneous(self):
        return len(self.weights()) <= 1

    def weight_components(self):
        """Split into weight-homogeneous pieces: ``{weight: element}``."""
        alg = self.algebra
        parts = {}
        for m, c in self.terms.items():
            base = alg.mono_weight(m)
            for k, v in c.terms.items():
                w = base + sum(k)
                parts.setdefault(w, {}).setdefault(m, {})[k] = v
        nv = alg.ring.nvars
        return {
            w: GcaElement(alg, {m: Poly(nv, cs) for m, cs in d.items()}) for w, d in sorted(parts.items())
        }

    def support(self):
        """Names of generators occurring in some term."""
        gens = self.algebra.generators
        return {gens[i].name for m in self.terms for i, _ in m}

    def coefficient(self, mono_text_or_tuple):
        if isinstance(mono_text_or_tuple, str):
            if mono_text_or_tuple in ("", "1"):
                key = ()
            else:
                key = next(iter(self.algebra.parse(mono_text_or_tuple).terms))
        else:
            key = mono_text_or_tuple
        return self.terms.get(key, self.algebra.ring.zero())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _mono_sort_key(mc[0]), reverse=True)

    def __str__(self):
        alg = self.algebra
        pieces = []
        for m, c in self.sorted_terms():
            body = alg.mono_str(m)
            if len(c.terms) == 1:
                (k, v), = c.terms.items()
                cs = str(Poly(c.nvars, {k: 1})) if any(k) else ""
                neg = v < 0
                a = -v if neg else v
                parts = []
                if a != 1 or (not cs and not body):
                    parts.append(str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}")
                if cs:
                    parts.append(cs)
                if body:
                    parts.append(body)
                pieces.append((neg, "*".join(parts)))
            else:
                pieces.append((False, f"({c})" + (f"*{body}" if body else "")))
        return join_terms(pieces)

    def __repr__(self):
        return f"GcaElement({self})"


class Derivation:
    """Graded derivation determined by generator images.

    ``coefficient_hook`` (optional) maps a ring coefficient to a GcaElement
    and is only meaningful for degree-0 derivations; by default ring
    coefficients are killed.
    """

    def __init__(self, algebra, images, degree=-1, coefficient_hook=None):
        self.algebra = algebra
        self.degree = degree
        self.coefficient_hook = coefficient_hook
        imgs = {}
        for name, img in images.items():
            if name not in algebra.index:
                raise ContractViolation(f"image given for unknown generator {name!r}")
            spec = algebra.spec(name)
            img = img.lift(algebra) if isinstance(img, GcaElement) else algebra.scalar(img)
            if img and img.degrees() != {spec.degree + degree}:
                raise ContractViolation(
                    f"image of {name} has degree {sorted(img.degrees())}, expected {spec.degree + degree}"
                )
            imgs[algebra.index[name]] = img
        self._images = imgs

    def image(self, name):
        return self._images.get(self.algebra.index[name], self.algebra.zero())

    @property
    def images(self):
        return {self.algebra.generators[i].name: img for i, img in sorted(self._images.items())}

    def __call__(self, a):
        return self.apply(a)

    def apply(self, a):
        alg = self.algebra
        if not isinstance(a, GcaElement):
            a = alg.scalar(a)
        a = a.lift(alg) if a.algebra is not alg else a
        ring = alg.ring
        odd = alg.odd
        sign_by_degree = self.degree % 2
        acc = {}

        def emit(m, c):
            prev = acc.get(m)
            acc[m] = c if prev is None else prev + c

        for mono, coeff in a.terms.items():
            if self.coefficient_hook is not None:
                hk = self.coefficient_hook(coeff)
                if hk:
                    for m2, c2 in hk.terms.items():
                        s, m = mono_mul(m2, mono, odd)
                        if s:
                            emit(m, c2 if s > 0 else -c2)
            prefix_deg = 0
            for pos, (i, e) in enumerate(mono):
                img = self._images.get(i)
                spec_deg = alg._degrees[i]
                if img is not None and img.terms:
                    sign = -1 if (sign_by_degree and prefix_deg % 2) else 1
                    left = mono[:pos]
                    right = mono[pos + 1 :]
                    if e > 1:
                        right = ((i, e - 1),) + right
                    factor = coeff * (sign * e)
                    for mi, ci in img.terms.items():
                        s1, m1 = mono_mul(left, mi, odd)
                        if not s1:
                            continue
                        s2, m2 = mono_mul(m1, right, odd)
                        if not s2:
                            continue
                        c = ci * factor
                        emit(m2, c if s1 * s2 > 0 else -c)
                prefix_deg += spec_deg * e
        return GcaElement(alg, {m: ring.nf(c) for m, c in acc.items()})

    def square_defects(self, up_to=None):
        """Yield ``(generator name, d(d(g)))`` for every generator where it is nonzero."""
        for g in self.algebra.generators:
            if up_to is not None and g.degree > up_to:
                continue
            dd = self.apply(self.apply(self.algebra.generator(g.name)))
            if dd:
                yield g.name, dd


def gca_mul(a, b):
    return a * b


def derivation_apply(d, a):
    return d.apply(a)


def derivation_square_witness(d, up_to=None):
    """First nonzero ``d(d(g))`` over generators (up to the given degree), else None."""
    for _, dd in d.square_defects(up_to):
        return dd
    return None
