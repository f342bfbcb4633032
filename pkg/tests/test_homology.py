import random

import pytest
import sympy

from ktres import homology
from ktres.errors import CapExceeded, ContractViolation
from ktres.groebner import QuotientRing
from ktres.homology import BettiWindow, betti, betti_window, boundary_preimage, cycle_representatives, slice_basis
from ktres.resolution import h0_oracle, koszul_complex, tate_resolve


def koszul(texts, n):
    ring = QuotientRing(n)
    return koszul_complex(ring, [ring.parse(t) for t in texts])


def test_top_slice_of_koszul_xy():
    st = koszul(["x1", "x2"], 2)
    sl = slice_basis(st, 2, 2)
    assert len(sl) == 1
    assert str(sl.element({0: 1}, st.algebra)) == "e1*e2"


def test_unit_slice():
    st = koszul(["x1", "x2"], 2)
    sl = slice_basis(st, 0, 0)
    assert len(sl) == 1 and str(sl.element({0: 1}, st.algebra)) == "1"


def test_exterior_algebra_truncates():
    st = koszul(["x1", "x2"], 2)
    assert len(slice_basis(st, 3, 6)) == 0


def test_regular_pair_acyclic():
    st = koszul(["x1", "x2"], 2)
    assert all(betti(st, 1, w) == 0 for w in range(9))
    assert betti(st, 0, 0) == 1


def test_repeated_element_has_h1():
    st = koszul(["x1", "x1"], 1)
    assert betti(st, 1, 1) == 1
    assert [str(z) for z in cycle_representatives(st, 1, 1)] == ["e1 - e2"]


def test_representatives_unit_and_regular():
    st = koszul(["x1", "x2", "x3"], 3)
    assert [str(z) for z in cycle_representatives(st, 0, 0)] == ["1"]
    assert all(cycle_representatives(st, n, w) == [] for n in (1, 2, 3) for w in range(6))


def test_boundary_preimages():
    st = koszul(["x1", "x1"], 1)
    z = st.parse("x1*e2 - x1*e1")
    assert str(boundary_preimage(st, z)) == "e1*e2"
    assert not boundary_preimage(st, st.algebra.zero())
    assert boundary_preimage(st, st.parse("e1 - e2")) is None
    with pytest.raises(ContractViolation):
        boundary_preimage(st, st.parse("e1"))


def _sympy_rank(vectors, width):
    if not vectors:
        return 0
    return sympy.Matrix([[v.get(j, 0) for j in range(width)] for v in vectors]).rank()


@pytest.mark.parametrize("gens", [["x1*x2", "x1*x3"], ["x1^2", "x2^2", "x1*x2"], ["x1 + x2", "x1*x3 - x2^2"]])
def test_betti_against_sympy_ranks(gens):
    st = koszul(gens, 3)
    for n in range(0, len(gens) + 1):
        for w in range(0, 6):
            dim = len(slice_basis(st, n, w))
            out = _sympy_rank(homology._images(st, slice_basis(st, n, w)), len(slice_basis(st, n - 1, w))) if n else 0
            inc = _sympy_rank(homology._images(st, slice_basis(st, n + 1, w)), dim)
            assert betti(st, n, w) == dim - out - inc


def test_matrices_compose_to_zero_and_rank_nullity():
    st = tate_resolve(QuotientRing(3), [QuotientRing(3).parse(s) for s in ("x1*x2", "x2*x3", "x1*x3")], 2, 4)
    betti_window(st, 3, 4)
    assert homology.verify_all_computed(st) == []
    assert homology.computed_slices(st)


def test_betti_invariant_under_generator_permutation(rng):
    gens = ["x1*x2", "x1*x3", "x2^2", "x3"]
    ref = betti_window(koszul(gens, 3), 3, 5).entries
    for _ in range(4):
        rng.shuffle(gens)
        assert betti_window(koszul(gens, 3), 3, 5).entries == ref


@pytest.mark.parametrize("gens", [["x1^2", "x1*x2"], ["x1*x2", "x2*x3", "x3^3"], ["x1^2 - x2*x3", "x1*x3"]])
def test_h0_matches_standard_monomials(gens):
    st = koszul(gens, 3)
    W = 6
    assert [betti(st, 0, w) for w in range(W + 1)] == h0_oracle(st.ring, [st.ring.parse(g) for g in gens], W)


def test_betti_tsv_roundtrip():
    win = betti_window(koszul(["x1", "x1"], 1), 2, 4)
    text = win.to_tsv()
    assert text.startswith("# bounds: n=0..2 w=0..4 mode=GRADED status=VERIFIED")
    back = BettiWindow.from_tsv(text)
    assert back.entries == win.entries and back.mode == win.mode


def test_filtered_mode_is_one_sided():
    st = koszul(["x1 + x1^2", "x2"], 2)
    assert not st.graded
    win = betti_window(st, 2, 4)
    assert win.label == homology.ONE_SIDED
    assert all(win[(p, w)] == 0 for p in (1, 2) for w in range(5))


def test_slice_cap_is_enforced():
    st = koszul(["x1", "x2", "x3"], 3)
    with pytest.raises(CapExceeded):
        slice_basis(st, 1, 6, cap=5)
    with pytest.raises(CapExceeded):
        slice_basis(st, 1, homology.MAX_WEIGHT + 1)
