import pytest

from ktres.errors import ContractViolation, InconsistentInput
from ktres.gca import GcaAlgebra, GeneratorSpec, derivation_square_witness
from ktres.groebner import QuotientRing
from ktres.homology import betti
from ktres.randgen import random_morphism_case, random_sullivan_case
from ktres.resolution import (
    DgaMorphism,
    RingMap,
    ResolutionState,
    koszul_complex,
    ring_only_state,
    sullivan_extend,
    sullivan_morphism,
    tate_resolve,
    tate_step,
    verify_sullivan_type,
)


def kxx():
    ring = QuotientRing(1)
    x = ring.parse("x1")
    return koszul_complex(ring, [x, x])


def test_extension_reproduces_tate_step():
    T = kxx()
    ext = sullivan_extend(T, [("t1_1", 2, "e1 - e2")])
    assert ext.canonical() == tate_step(T, 1, 8).canonical()


def test_split_extension_keeps_lower_homology():
    T = kxx()
    ext = sullivan_extend(T, [("g", 3, T.algebra.zero())])
    for n in (0, 1, 2):
        for w in range(5):
            assert betti(ext, n, w) == betti(T, n, w)


def test_boundary_image_kills_nothing():
    T = kxx()
    c = T.parse("e1*e2")
    ext = sullivan_extend(T, [("g", 2, T.d(c), 2)])
    for w in range(5):
        assert betti(ext, 0, w) == betti(T, 0, w)
        assert betti(ext, 1, w) == betti(T, 1, w)


def test_non_cycle_rejected_with_witness():
    T = kxx()
    with pytest.raises(InconsistentInput) as exc:
        sullivan_extend(T, [("g", 2, "e1")])
    assert str(exc.value.witness) == "x1"


def test_wrong_degree_rejected():
    T = kxx()
    with pytest.raises(ContractViolation):
        sullivan_extend(T, [("g", 3, "e1 - e2")])


def test_extension_associativity():
    ring = QuotientRing(2)
    T = koszul_complex(ring, [ring.parse("x1*x2"), ring.parse("x1^2")])
    g_img = T.d(T.parse("e1*e2"))
    h_img = T.d(T.parse("x1*e1*e2"))
    stepwise = sullivan_extend(sullivan_extend(T, [("g", 2, g_img)]), [("h", 2, h_img)])
    together = sullivan_extend(T, [("g", 2, g_img), ("h", 2, h_img)])
    assert stepwise.canonical() == together.canonical()
    assert len(stepwise.blocks) == 3 and len(together.blocks) == 2


def test_quotient_morphism_kills_antifields():
    T = kxx()
    ext = sullivan_extend(T, [("f", 2, "e1 - e2")])
    target = ring_only_state(QuotientRing(1, [QuotientRing(1).parse("x1")]))
    zero = target.algebra.zero()
    mor = sullivan_morphism(ext, target, {"e1": zero, "e2": zero}, {"f": zero}, RingMap(ext.ring, target.ring))
    assert not list(mor.chain_map_defects())


def test_quotient_morphism_requires_equations_to_vanish():
    T = kxx()
    target = ring_only_state(QuotientRing(1))
    zero = target.algebra.zero()
    with pytest.raises(InconsistentInput):
        sullivan_morphism(T, target, {}, {"e1": zero, "e2": zero})


def test_identity_morphism():
    T = kxx()
    ids = {g.name: T.gen(g.name) for g in T.generators}
    mor = sullivan_morphism(T, T, {}, ids)
    x = T.parse("x1^2*e1*e2 - e2")
    assert mor(x) == x


def test_bad_q_image_rejected():
    T = kxx()
    ext = sullivan_extend(T, [("f", 2, "e1 - e2")])
    ids = {g.name: ext.gen(g.name) for g in T.generators}
    with pytest.raises(InconsistentInput):
        sullivan_morphism(ext, ext, ids, {"f": ext.parse("e1*e2")})


def test_sullivan_type_checks():
    ring = QuotientRing(3)
    st = tate_resolve(ring, [ring.parse(s) for s in ("x1*x2", "x2*x3", "x1*x3")], 2, 4)
    assert verify_sullivan_type(st)[0]
    assert verify_sullivan_type(ring_only_state(ring)) == (True, [])


def test_sullivan_type_detects_own_block():
    ring = QuotientRing(1)
    A = GcaAlgebra(ring, [GeneratorSpec("e", 1, 1, 0), GeneratorSpec("f", 2, 2, 1), GeneratorSpec("t", 4, 3, 1)])
    x = ring.parse("x1")
    st = ResolutionState(A, {"e": A.scalar(x), "f": A.generator("e").scale(x), "t": A.generator("f") * A.generator("e")})
    ok, report = verify_sullivan_type(st)
    assert not ok
    assert report[1][2] == [("t", ["f"])]


def test_random_extensions(rng):
    for _ in range(25):
        _, st, _ = random_sullivan_case(rng)
        assert derivation_square_witness(st.differential) is None
        assert verify_sullivan_type(st)[0]


def test_random_morphisms_are_chain_maps(rng):
    for _ in range(25):
        src, target, p, q, rmap = random_morphism_case(rng)
        mor = sullivan_morphism(src, target, p, q, rmap)
        assert not list(mor.chain_map_defects())
