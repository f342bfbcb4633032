import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ktres.errors import StructuralError
from ktres.groebner import Ideal, QuotientRing, buchberger, ideal_member, is_groebner, normal_form
from ktres.poly import Poly, poly_add, poly_mul
from ktres.randgen import random_poly


def P(text, n=2):
    return Poly.parse(text, n)


def test_difference_of_squares():
    assert poly_mul(P("x1 + 1", 1), P("x1 - 1", 1)) == P("x1^2 - 1", 1)


def test_zero_is_absorbing():
    assert not poly_mul(P("3*x1*x2 - 7"), Poly.zero(2))


def test_binomial_square():
    assert P("x1 + x2") ** 2 == P("x1^2 + 2*x1*x2 + x2^2")
    assert poly_add(P("x1"), P("-x1")) == 0


def test_variable_count_mismatch_is_structural():
    with pytest.raises(StructuralError):
        P("x1", 1) + P("x1", 2)


def test_rational_coefficients_stay_reduced():
    p = P("2/4*x1 + 3/9")
    assert p.terms[(1, 0)] == Fraction(1, 2)
    assert str(p) == "1/2*x1 + 1/3"


@pytest.mark.parametrize("text", ["3/2*x1^2*x2 - x3", "x1", "-x2^3 + 5", "0", "x1*x2*x3 - 1/7*x1^4"])
def test_print_parse_roundtrip(text):
    p = Poly.parse(text, 3)
    assert Poly.parse(str(p), 3) == p


def test_print_parse_roundtrip_random(rng):
    for _ in range(200):
        p = random_poly(rng, 4, 4, 5)
        assert Poly.parse(str(p), 4) == p


def test_groebner_single_generator():
    assert buchberger([P("x1", 1)]) == (P("x1", 1),)


def test_groebner_already_a_basis():
    gb = buchberger([P("x1^2"), P("x1*x2")])
    assert set(gb) == {P("x1^2"), P("x1*x2")}
    assert is_groebner(gb)


def test_groebner_linear_chain():
    ring = QuotientRing(3, [Poly.parse("x1 - x2", 3), Poly.parse("x2 - x3", 3)])
    assert not ring.nf(Poly.parse("x1 - x3", 3))
    assert ring.nf(Poly.parse("x1", 3)) == ring.nf(Poly.parse("x2", 3)) == ring.nf(Poly.parse("x3", 3))


def _sympy_reduced_basis(gens, n):
    xs = sympy.symbols(f"x1:{n + 1}")
    exprs = [sympy.sympify(str(g).replace("^", "**"), locals={str(x): x for x in xs}) for g in gens]
    gb = sympy.groebner(exprs, *xs, order="grevlex")
    return {Poly.parse(str(sympy.expand(g)).replace("**", "^"), n).monic() for g in gb.exprs}


@pytest.mark.parametrize(
    "gens",
    [
        ["x1^2 - x2*x3", "x1*x2 - x3^2 + x1"],
        ["x1*x2 - x3", "x2*x3 - x1", "x1*x3 - x2"],
        ["x1^3 - 2*x1*x2", "x1^2*x2 - 2*x2^2 + x1"],
    ],
)
def test_groebner_matches_sympy(gens):
    mine = set(buchberger([Poly.parse(g, 3) for g in gens]))
    assert mine == _sympy_reduced_basis(gens, 3)


def test_groebner_independent_of_generator_order(rng):
    gens = [Poly.parse(g, 3) for g in ("x1^2 - x2*x3", "x1*x2 - x3^2 + x1", "x3^3 - x1")]
    ref = buchberger(gens)
    for _ in range(5):
        rng.shuffle(gens)
        assert buchberger(gens) == ref


def test_normal_form_examples():
    dual = QuotientRing(1, [P("x1^2", 1)])
    assert not dual.nf(P("x1^2", 1))
    assert dual.nf(P("x1^3 + x1", 1)) == P("x1", 1)
    p = P("x1^5 - 3*x2")
    assert normal_form(p, QuotientRing(2)) == p


def test_ideal_membership_examples():
    assert ideal_member(P("x1*x2"), Ideal(2, [P("x1")]))
    assert not ideal_member(P("x2"), Ideal(2, [P("x1")]))
    assert ideal_member(P("x1^2 + x1*x2"), Ideal(2, [P("x1^2"), P("x1*x2")]))


_RING = QuotientRing(3, [Poly.parse("x1^2 - x2*x3", 3), Poly.parse("x1*x2 - x3^2 + x1", 3)])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_normal_form_idempotent_and_membership(seed):
    r = random.Random(seed)
    p = random_poly(r, 3, 4, 5)
    q = _RING.nf(p)
    assert _RING.nf(q) == q
    assert _RING.modulus.contains(p - q)
    assert _RING.modulus.contains(p) == (not q)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_ideal_closed_under_combinations(seed):
    r = random.Random(seed)
    f, g = _RING.modulus.generators
    a, b = random_poly(r, 3, 2, 3), random_poly(r, 3, 2, 3)
    assert _RING.modulus.contains(a * f + b * g)


def test_quotient_standard_monomial_counts():
    q = QuotientRing(3).quotient_by([Poly.parse(s, 3) for s in ("x1*x2", "x1*x3", "x2*x3")])
    assert [q.standard_monomial_count(d) for d in range(4)] == [1, 3, 3, 3]
