from dataclasses import replace
from fractions import Fraction

import pytest

from ktres.errors import InconsistentInput
from ktres.gauge import (
    IDENTITY_M_NOTE,
    GaugeTheory,
    build_gauge_kt,
    check_noether,
    kt_h0_report,
    maxwell_toy,
    verify_kt_dlinearity,
)
from ktres.jets import JetSpace, multi_indices, total_derivative, total_derivative_multi
from ktres.operators import parse_operator_matrix
from ktres.resolution import verify_sullivan_type


@pytest.fixture(scope="module")
def maxwell():
    return maxwell_toy()


@pytest.fixture(scope="module")
def maxwell_kt(maxwell):
    return build_gauge_kt(maxwell, check_order=3)


def test_maxwell_noether_passes(maxwell):
    verdict = check_noether(maxwell, depth=2)
    assert verdict.passed
    assert all(not row.residue for row in verdict.rows)


def test_no_rows_is_vacuous():
    S = JetSpace(1, 1)
    theory = GaugeTheory(S, S.parse("1/2*u1_{1}^2"))
    verdict = check_noether(theory)
    assert verdict.passed and verdict.rows == []


def test_corrupted_row_reports_residue(maxwell):
    S = maxwell.space
    bad = GaugeTheory(S, maxwell.lagrangian, parse_operator_matrix(S, ["D1, 0"]))
    verdict = check_noether(bad)
    assert not verdict.passed
    F = S.parse("u2_{1,0} - u1_{0,1}")
    expected = total_derivative(1, total_derivative(2, F)).scale(Fraction(1, 2))
    assert verdict.first_failure().residue == expected
    with pytest.raises(InconsistentInput):
        build_gauge_kt(bad)


def test_c_star_image(maxwell_kt):
    kt = maxwell_kt
    expected = kt.phi_star(1, (1, 0)) + kt.phi_star(2, (0, 1))
    assert kt(kt.c_star(1)) == expected
    assert not kt(kt(kt.c_star(1)))


def test_phi_star_images_are_jets_of_el(maxwell, maxwell_kt):
    for a, e in enumerate(maxwell.el, 1):
        for alpha in multi_indices(2, 3):
            assert maxwell_kt(maxwell_kt.phi_star(a, alpha)) == total_derivative_multi(alpha, e)


def test_square_through_order_four(maxwell):
    kt = build_gauge_kt(maxwell, check_order=4)
    assert kt.square_witness(4) is None


def test_no_rows_gives_single_tier():
    S = JetSpace(1, 1)
    kt = build_gauge_kt(GaugeTheory(S, S.parse("1/2*u1^2")))
    assert kt.multiplicities == [1]
    assert kt(kt.phi_star(1, (2,))) == S.u(1, (2,))


def test_dlinearity(maxwell_kt):
    ok, failures = verify_kt_dlinearity(maxwell_kt, samples=60, seed=3)
    assert ok and failures == []


def test_dlinearity_named_operators(maxwell, maxwell_kt):
    S = maxwell.space
    ops = [(S.one(), (1, 0)), (S.one(), (0, 0)), (S.x(1), (0, 1))]
    assert verify_kt_dlinearity(maxwell_kt, operators=ops)[0]
    c = maxwell_kt.c_star(1)
    lhs = maxwell_kt(S.x(1) * total_derivative(2, c))
    assert lhs == S.x(1) * total_derivative(2, maxwell_kt(c))
    lhs = maxwell_kt(total_derivative(1, maxwell_kt.phi_star(1)))
    assert lhs == total_derivative(1, maxwell.el[0])


def test_gauge_state_is_sullivan(maxwell_kt):
    state = maxwell_kt.as_resolution_state(2)
    ok, report = verify_sullivan_type(state)
    assert ok
    assert [k for k, _, _ in report] == [0, 1]
    for g in state.generators:
        assert not state.d(state.d(state.gen(g.name)))


def test_sullivan_detects_self_reference(maxwell_kt):
    state = maxwell_kt.as_resolution_state(1)
    from ktres.gca import GcaAlgebra
    from ktres.resolution import ResolutionState

    specs = [replace(g, block=0) if g.degree == 2 else g for g in state.generators]
    alg = GcaAlgebra(state.ring, specs)
    images = {g.name: alg.parse(str(state.image(g.name))) for g in state.generators}
    ok, _ = verify_sullivan_type(ResolutionState(alg, images))
    assert not ok


def test_h0_quadratic_potential():
    S = JetSpace(1, 1)
    report = kt_h0_report(GaugeTheory(S, S.parse("1/2*u1^2")), order=3)
    assert report.passed
    assert report.shell_size == 4
    assert IDENTITY_M_NOTE in report.notes


def test_h0_zero_lagrangian():
    S = JetSpace(1, 1)
    report = kt_h0_report(GaugeTheory(S, S.zero()), order=2)
    assert report.passed and report.shell_size == 0 and report.checked_boundaries == 0


def test_h0_maxwell(maxwell):
    report = kt_h0_report(maxwell, order=3, samples=10)
    assert report.passed, report.failures


def test_h0_detects_too_small_shell(maxwell):
    S = maxwell.space
    report = kt_h0_report(maxwell, order=3, shell=[maxwell.el[0]], samples=0)
    assert not report.boundaries_in_shell
