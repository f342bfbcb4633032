"""Sparse multivariate polynomials over the rationals, graded reverse lex order."""
from fractions import Fraction

from .errors import StructuralError
from .exprparse import format_coefficient_term, join_terms, parse_expression


def grevlex_key(mono):
    """Sort key such that larger key means larger monomial under grevlex."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable polynomial in ``nvars`` variables ``x1..xn``.

    ``terms`` maps exponent tuples to nonzero ``Fraction`` coefficients.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    if len(m) != nvars:
                        raise StructuralError(f"exponent {m} does not match {nvars} variables")
                    clean[tuple(m)] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars, c):
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars):
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars, i):
        """The variable ``x{i+1}`` (``i`` is 0-based)."""
        if not 0 <= i < nvars:
            raise StructuralError(f"variable index {i} out of range for {nvars} variables")
        m = [0] * nvars
        m[i] = 1
        return cls._raw(nvars, {tuple(m): Fraction(1)})

    @classmethod
    def monomial(cls, nvars, mono, c=1):
        return cls._raw(nvars, {tuple(mono): Fraction(c)} if c else {})

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise StructuralError(
                    f"variable-count mismatch: {self.nvars} vs {other.nvars}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Poly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Poly._raw(self.nvars, t)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono, c):
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self.terms.items()},
        )

    # -- queries ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def monomials(self):
        """Monomials in descending grevlex order."""
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def leading(self):
        """``(monomial, coefficient)`` of the grevlex-leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=grevlex_key)
        return m, self.terms[m]

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def min_degree(self):
        return min((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def homogeneous_part(self, d):
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def monic(self):
        if not self.terms:
            return self
        _, c = self.leading()
        return self.scale(1 / c)

    # -- text ------------------------------------------------------------------

    def __str__(self):
        pieces = []
        for m in self.monomials():
            body = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(m) if e
            )
            pieces.append(format_coefficient_term(self.terms[m], body))
        return join_terms(pieces)

    def __repr__(self):
        return f"Poly({self.nvars}, {self})"

    @classmethod
    def parse(cls, text, nvars, line=None):
        """Parse ASCII such as ``3/2*x1^2*x2 - x3``."""

        def resolve(name):
            if name[0] == "x" and name[1:].isdigit():
                i = int(name[1:]) - 1
                if 0 <= i < nvars:
                    return cls.var(nvars, i)
            raise KeyError(f"expected a variable x1..x{nvars}")

        return parse_expression(text, lambda c: cls.const(nvars, c), resolve, line)


def poly_add(a, b):
    return a + b


def poly_mul(a, b):
    return a * b
