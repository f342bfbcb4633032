import random

import pytest
from hypothesis import given, settings, strategies as st

from ktres.errors import ContractViolation
from ktres.gca import Derivation, GcaAlgebra, GeneratorSpec, derivation_apply, derivation_square_witness, gca_mul
from ktres.groebner import QuotientRing
from ktres.randgen import random_gca_element
from ktres.resolution import koszul_complex, tate_resolve


def algebra(ring=None):
    ring = ring or QuotientRing(2)
    return GcaAlgebra(
        ring,
        [GeneratorSpec("e1", 1, 1), GeneratorSpec("e2", 1, 1), GeneratorSpec("f", 2, 2, 1), GeneratorSpec("g", 3, 3, 2)],
    )


def test_odd_generators_anticommute():
    A = algebra()
    e1, e2 = A.generator("e1"), A.generator("e2")
    assert gca_mul(e1, e2) == -gca_mul(e2, e1)
    assert str(e2 * e1) == "-e1*e2"


def test_odd_square_vanishes():
    A = algebra()
    assert not (A.generator("e1") * A.generator("e1"))


def test_even_generator_is_central():
    A = algebra()
    f, e = A.generator("f"), A.generator("e1")
    assert f * e == e * f
    assert str(f * e) == "e1*f"


def test_generator_printing_and_names():
    assert str(GeneratorSpec("t1_2", 2, 3, 1)) == "t1_2{deg=2,w=3}"
    with pytest.raises(ContractViolation):
        GeneratorSpec("x1", 1)
    with pytest.raises(ContractViolation):
        GeneratorSpec("e", 0)


def test_koszul_derivation_on_product():
    ring = QuotientRing(2)
    st = koszul_complex(ring, [ring.parse("x1^2"), ring.parse("x2 + x1")])
    e = st.parse("e1*e2")
    E1, E2 = st.image("e1"), st.image("e2")
    expected = E1 * st.parse("e2") - E2 * st.parse("e1")
    assert derivation_apply(st.differential, e) == expected


def test_derivation_kills_unit_and_is_linear():
    ring = QuotientRing(2)
    st = koszul_complex(ring, [ring.parse("x1"), ring.parse("x2")])
    assert not st.d(st.algebra.one())
    F = ring.parse("3*x1*x2 - 1")
    assert st.d(st.parse("e1").scale(F)) == st.algebra.scalar(F * ring.parse("x1"))


def test_square_witness_none_for_koszul():
    ring = QuotientRing(3)
    st = koszul_complex(ring, [ring.parse(s) for s in ("x1*x2", "x3^2", "x1 + x3")])
    assert derivation_square_witness(st.differential) is None


def test_square_witness_found():
    ring = QuotientRing(1)
    A = GcaAlgebra(ring, [GeneratorSpec("e", 1, 1), GeneratorSpec("f", 2, 1, 1)])
    d = Derivation(A, {"e": A.scalar(ring.parse("x1")), "f": A.generator("e")})
    assert derivation_square_witness(d) == A.scalar(ring.parse("x1"))


def test_square_witness_dual_numbers():
    ring = QuotientRing(1, [QuotientRing(1).parse("x1^2")])
    A = GcaAlgebra(ring, [GeneratorSpec("e", 1, 1), GeneratorSpec("f", 2, 2, 1)])
    x = ring.parse("x1")
    d = Derivation(A, {"e": A.scalar(x), "f": A.generator("e").scale(x)})
    assert derivation_square_witness(d) is None


def test_image_degree_is_checked():
    A = algebra()
    with pytest.raises(ContractViolation):
        Derivation(A, {"f": A.generator("f")})


def test_element_printing_is_canonical():
    A = algebra()
    a = A.parse("x1*e2*e1 + (x1 + x2)*f - 2")
    assert str(a) == "-x1*e1*e2 + (x1 + x2)*f - 2"
    assert A.parse(str(a)) == a


_STATE = tate_resolve(QuotientRing(3), [QuotientRing(3).parse(s) for s in ("x1*x2", "x2*x3", "x1*x3")], 2, 3)
_ALG = _STATE.algebra


def _rand(r, deg):
    return random_gca_element(r, _ALG, deg, 2, 1)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_product_associative_unital_graded_commutative(seed):
    r = random.Random(seed)
    da, db, dc = (r.randint(0, 4) for _ in range(3))
    a, b, c = _rand(r, da), _rand(r, db), _rand(r, dc)
    assert (a * b) * c == a * (b * c)
    assert a * _ALG.one() == a == _ALG.one() * a
    sign = -1 if (da * db) % 2 else 1
    assert a * b == (b * a).scale(sign)
    if a * b:
        assert (a * b).degree() == da + db


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz_and_degree_lowering(seed):
    r = random.Random(seed)
    d = _STATE.differential
    da, db = r.randint(0, 3), r.randint(0, 3)
    a, b = _rand(r, da), _rand(r, db)
    sign = -1 if da % 2 else 1
    assert d(a * b) == d(a) * b + (a * d(b)).scale(sign)
    if d(a):
        assert d(a).degree() == da - 1
        assert d(a).weights() <= a.weights()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_d_squared_vanishes_on_random_monomials(seed):
    r = random.Random(seed)
    a = _rand(r, r.randint(1, 5))
    assert not _STATE.d(_STATE.d(a))
