"""Polynomial functions on a truncated jet space with antifield coordinates.

Coordinates are base variables ``x_i``, field derivatives ``u^a_α`` and
antifields ``v(t)^c_β`` of homological degree ``t`` (odd when ``t`` is odd).
Every operation that would need a jet order above the space's truncation
raises :class:`JetTruncationError` instead of dropping terms.
"""
import re
from fractions import Fraction
from math import comb
from typing import NamedTuple

from .errors import ContractViolation, JetTruncationError, ParseError, StructuralError
from .exprparse import format_coefficient_term, join_terms, parse_expression
from .kernels import mono_mul

BASE, FIELD, ANTIFIELD = 0, 1, 2


class JetVariable(NamedTuple):
    kind: int
    tier: int  # antifield tier (homological degree); 0 otherwise
    index: int  # 1-based base, field or component index
    multi: tuple = ()

    @property
    def degree(self):
        return self.tier if self.kind == ANTIFIELD else 0

    @property
    def parity(self):
        return self.degree % 2

    @property
    def order(self):
        return sum(self.multi)

    def shifted(self, i):
        m = list(self.multi)
        m[i] += 1
        return self._replace(multi=tuple(m))

    def __str__(self):
        if self.kind == BASE:
            return f"x{self.index}"
        mi = "{" + ",".join(map(str, self.multi)) + "}"
        if self.kind == FIELD:
            return f"u{self.index}_{mi}"
        return f"af{self.tier}_{self.index}_{mi}"


class _OddSet:
    __slots__ = ()

    def __contains__(self, v):
        return v[0] == ANTIFIELD and v[1] % 2 == 1


ODD = _OddSet()

_NAME = re.compile(r"(?:x(\d+)|u(\d+)(?:_\{([0-9,\s]*)\})?|af(\d+)_(\d+)(?:_\{([0-9,\s]*)\})?)")


def multi_indices(n, order):
    """All multi-indices of length n with |α| <= order, by increasing |α|, then descending lexicographic."""
    def level(k, d):
        if k == 1:
            return [(d,)]
        return [(e,) + rest for e in range(d, -1, -1) for rest in level(k - 1, d - e)]

    return [alpha for d in range(order + 1) for alpha in level(n, d)]


def unit(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


def multi_binomial(alpha, gamma):
    r = 1
    for a, g in zip(alpha, gamma):
        r *= comb(a, g)
    return r


def sub_indices(alpha):
    """All γ <= α componentwise."""
    out = [()]
    for a in alpha:
        out = [g + (e,) for g in out for e in range(a + 1)]
    return out


class JetSpace:
    """Base dimension ``n``, ``r`` fields and a global jet-order truncation."""

    def __init__(self, n, r, max_order=8):
        if n < 1 or r < 0:
            raise ContractViolation("need n >= 1 and r >= 0")
        self.n = n
        self.r = r
        self.max_order = max_order

    def __eq__(self, other):
        return isinstance(other, JetSpace) and (self.n, self.r, self.max_order) == (other.n, other.r, other.max_order)

    def __hash__(self):
        return hash((self.n, self.r, self.max_order))

    def __repr__(self):
        return f"JetSpace(n={self.n}, r={self.r}, max_order={self.max_order})"

    def _multi(self, alpha):
        alpha = tuple(alpha) if alpha is not None else (0,) * self.n
        if len(alpha) != self.n or any(a < 0 for a in alpha):
            raise StructuralError(f"bad multi-index {alpha} for base dimension {self.n}")
        if sum(alpha) > self.max_order:
            raise JetTruncationError(f"jet order {sum(alpha)} exceeds truncation {self.max_order}")
        return alpha

    def x_var(self, i):
        if not 1 <= i <= self.n:
            raise StructuralError(f"base index {i} out of range")
        return JetVariable(BASE, 0, i, ())

    def u_var(self, a, alpha=None):
        if not 1 <= a <= self.r:
            raise StructuralError(f"field index {a} out of range")
        return JetVariable(FIELD, 0, a, self._multi(alpha))

    def af_var(self, tier, comp, beta=None):
        if tier < 1 or comp < 1:
            raise StructuralError("antifield tier and component start at 1")
        return JetVariable(ANTIFIELD, tier, comp, self._multi(beta))

    def const(self, c):
        c = Fraction(c)
        return JetPolynomial(self, {(): c} if c else {})

    def zero(self):
        return JetPolynomial(self, {})

    def one(self):
        return self.const(1)

    def variable(self, v):
        return JetPolynomial(self, {((v, 1),): Fraction(1)})

    def x(self, i):
        return self.variable(self.x_var(i))

    def u(self, a, alpha=None):
        return self.variable(self.u_var(a, alpha))

    def af(self, tier, comp, beta=None):
        return self.variable(self.af_var(tier, comp, beta))

    def parse_variable(self, name):
        m = _NAME.fullmatch(name.replace(" ", ""))
        if not m:
            raise KeyError("not a jet variable")
        xi, ua, umi, at, ac, ami = m.groups()
        if xi:
            return self.x_var(int(xi))
        if ua:
            return self.u_var(int(ua), _parse_multi(umi, self.n))
        return self.af_var(int(at), int(ac), _parse_multi(ami, self.n))

    def parse(self, text, line=None):
        return parse_expression(text, self.const, lambda nm: self.variable(self.parse_variable(nm)), line)


def _parse_multi(text, n):
    if text is None:
        return (0,) * n
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != n:
        raise ValueError(f"multi-index needs {n} entries")
    return tuple(int(p) for p in parts)


def _term_key(mono):
    return (sum(e for _, e in mono), tuple((tuple(v), e) for v, e in mono))


class JetPolynomial:
    """Finite ℚ-combination of graded-commutative monomials in jet coordinates."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space, terms):
        self.space = space
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, JetPolynomial):
            if other.space != self.space:
                raise StructuralError("jet polynomials over different spaces")
            return other
        if isinstance(other, (int, Fraction)):
            return self.space.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return JetPolynomial(self.space, t)

    __radd__ = __add__

    def __neg__(self):
        return JetPolynomial(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                s, m = mono_mul(ma, mb, ODD)
                if s:
                    t[m] = t.get(m, 0) + (ca * cb if s > 0 else -ca * cb)
        return JetPolynomial(self.space, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.space.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c):
        c = Fraction(c)
        return JetPolynomial(self.space, {m: v * c for m, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, JetPolynomial) else other
        if other is NotImplemented:
            return False
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def variables(self):
        return {v for m in self.terms for v, _ in m}

    @property
    def order(self):
        return max((v.order for v in self.variables() if v.kind != BASE), default=0)

    def degrees(self):
        return {sum(v.degree * e for v, e in m) for m in self.terms}

    def has_antifields(self):
        return any(v.kind == ANTIFIELD for v in self.variables())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _term_key(mc[0]), reverse=True)

    def __str__(self):
        pieces = []
        for m, c in self.sorted_terms():
            body = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
            pieces.append(format_coefficient_term(c, body))
        return join_terms(pieces)

    def __repr__(self):
        return f"JetPolynomial({self})"


def derive(F, image, odd=False):
    """Apply the derivation given on variables by ``image(v)`` (a JetPolynomial or None).

    With ``odd=True`` it is an odd derivation: passing an odd factor flips the sign.
    """
    acc = {}
    for mono, c in F.terms.items():
        left_parity = 0
        for pos, (v, e) in enumerate(mono):
            img = image(v)
            if img:
                sign = -1 if odd and left_parity else 1
                left = mono[:pos]
                right = (((v, e - 1),) + mono[pos + 1 :]) if e > 1 else mono[pos + 1 :]
                k = c * (sign * e)
                for mi, ci in img.terms.items():
                    s1, m1 = mono_mul(left, mi, ODD)
                    if not s1:
                        continue
                    s2, m2 = mono_mul(m1, right, ODD)
                    if not s2:
                        continue
                    val = ci * k
                    acc[m2] = acc.get(m2, 0) + (val if s1 * s2 > 0 else -val)
            if v.parity and e % 2:
                left_parity ^= 1
    return JetPolynomial(F.space, acc)


def partial(F, v):
    """Left partial derivative ∂F/∂v."""
    target = v
    one = F.space.one()
    return derive(F, lambda w: one if w == target else None, odd=bool(v.parity))


def _shift_image(space, i, extended):
    def image(v):
        if v.kind == BASE:
            return space.one() if v.index == i + 1 else None
        if v.kind == ANTIFIELD and not extended:
            return None
        if v.order + 1 > space.max_order:
            raise JetTruncationError(
                f"D_{i + 1}({v}) needs jet order {v.order + 1} > truncation {space.max_order}"
            )
        return space.variable(v.shifted(i))

    return image


def total_derivative(i, F, extended=True):
    """D_{x^i} F with 1-based ``i``; antifields are shifted too when ``extended``."""
    space = F.space
    if not 1 <= i <= space.n:
        raise StructuralError(f"base index {i} out of range")
    return derive(F, _shift_image(space, i - 1, extended))


def total_derivative_multi(alpha, F, extended=True):
    """D_x^α F."""
    for i, a in enumerate(alpha):
        for _ in range(a):
            F = total_derivative(i + 1, F, extended)
    return F


def _check_classical(F, what):
    if F.has_antifields():
        raise ContractViolation(f"{what} must not contain antifields")


def euler_lagrange(L, a):
    """δ_{u^a} L = Σ_α (-D)^α ∂L/∂u^a_α."""
    _check_classical(L, "the Lagrangian")
    out = L.space.zero()
    for v in sorted(L.variables()):
        if v.kind == FIELD and v.index == a:
            term = total_derivative_multi(v.multi, partial(L, v))
            out = out + (term if v.order % 2 == 0 else -term)
    return out


def euler_lagrange_column(L):
    return [euler_lagrange(L, a) for a in range(1, L.space.r + 1)]


class EvolutionaryField:
    """Prolonged evolutionary derivation: u^a_α ↦ D^α B^a (and antifield characteristics if given)."""

    def __init__(self, space, characteristics, antifield_characteristics=None):
        if len(characteristics) != space.r:
            raise ContractViolation(f"need {space.r} characteristics, got {len(characteristics)}")
        self.space = space
        self.characteristics = list(characteristics)
        self.antifield_characteristics = dict(antifield_characteristics or {})
        for key, B in self.antifield_characteristics.items():
            if B and B.degrees() != {key[0]}:
                raise ContractViolation(f"characteristic for antifield family {key} must have degree {key[0]}")
        self._cache = {}

    def _image(self, v):
        if v.kind == BASE:
            return None
        if v.kind == FIELD:
            B = self.characteristics[v.index - 1]
        else:
            B = self.antifield_characteristics.get((v.tier, v.index))
        if not B:
            return None
        got = self._cache.get(v)
        if got is None:
            got = total_derivative_multi(v.multi, B)
            self._cache[v] = got
        return got

    def __call__(self, F):
        return derive(F, self._image)


def prolong_evolutionary(B, space=None, antifields=None):
    space = space or B[0].space
    return EvolutionaryField(space, B, antifields)


def linearize(psi):
    """Universal linearization ℓ_ψ as a matrix total-differential operator."""
    from .operators import TotalDiffOperator

    space = psi[0].space
    entries = {}
    for row, p in enumerate(psi):
        _check_classical(p, "psi")
        for v in p.variables():
            if v.kind == FIELD:
                d = partial(p, v)
                if d:
                    cell = entries.setdefault((row, v.index - 1), {})
                    cell[v.multi] = cell.get(v.multi, space.zero()) + d
    return TotalDiffOperator(space, (len(psi), space.r), entries)


def classical_variables(space, order):
    """Base and field coordinates up to the given jet order, in canonical order."""
    out = [space.x_var(i) for i in range(1, space.n + 1)]
    for a in range(1, space.r + 1):
        for alpha in multi_indices(space.n, order):
            out.append(space.u_var(a, alpha))
    return out


class PolynomialModel:
    """Identify classical jet polynomials with elements of ℚ[x1..xN] over a fixed variable list."""

    def __init__(self, variables):
        from .groebner import QuotientRing

        self.variables = list(variables)
        self.index = {v: i for i, v in enumerate(self.variables)}
        self.ring = QuotientRing(len(self.variables))

    def to_poly(self, F):
        from .poly import Poly

        nv = len(self.variables)
        terms = {}
        for m, c in F.terms.items():
            exp = [0] * nv
            for v, e in m:
                if v not in self.index:
                    raise ContractViolation(f"{v} is outside the polynomial model")
                exp[self.index[v]] = e
            terms[tuple(exp)] = c
        return Poly(nv, terms)

    def from_poly(self, p, space):
        terms = {}
        for exp, c in p.terms.items():
            terms[tuple((self.variables[i], e) for i, e in enumerate(exp) if e)] = c
        return JetPolynomial(space, terms)
