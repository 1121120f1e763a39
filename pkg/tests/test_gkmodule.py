"""Truncated module vectors: membership, eigenvalues, the mixed action, the solver."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkverify.exact_arith import ONE, gr
from gkverify.gkmodule import (
    KType,
    ModuleParams,
    PsiPoleError,
    TruncatedElement,
    apply_operator,
    casimir_apply,
    casimir_eigenvalue_check,
    default_samples,
    garfinkle_obstruction,
    ktype_enumeration,
    p_action_check,
    psi_series,
    sl2_apply,
    typical_element,
    verify_membership,
    xi_eigenvalue_check,
)
from gkverify.poly import TruncationError, VariableSpace, harmonic_basis
from gkverify.weyl import WeylOperator


def test_parameter_validation():
    ModuleParams(2, 4, 0, 1)
    ModuleParams(4, 6, 2, -1)
    with pytest.raises(ValueError):
        ModuleParams(1, 5, 0, 1)  # p too small
    with pytest.raises(ValueError):
        ModuleParams(3, 4, 0, 1)  # odd total
    with pytest.raises(ValueError):
        ModuleParams(2, 4, -1, 1)  # negative m
    with pytest.raises(ValueError):
        ModuleParams(2, 4, 1, 1)  # m + 3 exceeds half the total
    with pytest.raises(ValueError):
        ModuleParams(2, 4, 0, 2)  # bad sign


def test_ktype_arithmetic_frozen():
    kt = KType(1, 0, 4, 4)
    assert kt.kappa_plus == 3
    assert kt.kappa_minus == 2
    kt2 = KType(0, 1, 4, 4)
    assert kt2.kappa_plus == 2
    assert kt2.kappa_minus == 3


def test_ktype_enumeration_frozen():
    params = ModuleParams(4, 4, 1, 1)
    kts = [(kt.k, kt.l) for kt in ktype_enumeration(params, 2, 2)]
    assert kts == [(0, 1), (1, 0), (1, 2), (2, 1)]
    params0 = ModuleParams(4, 4, 0, 1)
    kts0 = [(kt.k, kt.l) for kt in ktype_enumeration(params0, 2, 2)]
    assert kts0 == [(0, 0), (1, 1), (2, 2)]


def test_radial_exponent_frozen():
    params = ModuleParams(4, 4, 1, 1)
    assert params.mu(KType(1, 0, 4, 4)) == 1
    assert params.mu(KType(0, 1, 4, 4)) == 0
    with pytest.raises(ValueError):
        params.mu(KType(0, 0, 4, 4))  # parity excludes it


def test_window_rule_matches_double_integrality():
    params = ModuleParams(4, 6, 2, 1)
    for k in range(5):
        for l in range(5):
            kt = KType(k, l, 4, 6)
            d = kt.kappa_plus - kt.kappa_minus
            manual = (params.m + d) % 2 == 0 and abs(d) <= params.m
            assert params.allows(kt) == manual


def test_psi_series_recurrence():
    alpha = Fraction(5, 2)
    series = psi_series(alpha, 20)
    coeffs = {a: c for (a, b), c in series.coeffs.items() if a == b}
    assert set(series.coeffs) == {(j, j) for j in coeffs}
    assert coeffs[0] == ONE
    for j in range(max(coeffs)):
        assert coeffs[j + 1] == coeffs[j] * gr(Fraction(-1) / ((j + 1) * (alpha + j)))


def test_psi_series_frozen_second_coefficient():
    # c_1 = -1/alpha and c_2 = 1/(2 alpha (alpha+1))
    alpha = Fraction(3)
    series = psi_series(alpha, 8)
    assert series.coeffs[(1, 1)] == gr(Fraction(-1, 3))
    assert series.coeffs[(2, 2)] == gr(Fraction(1, 24))


def test_psi_series_pole_guard():
    for bad in (Fraction(0), Fraction(-1), Fraction(-5)):
        with pytest.raises(PsiPoleError):
            psi_series(bad, 4)
    psi_series(Fraction(1, 2), 4)  # non-integer values below zero are fine
    psi_series(Fraction(-3, 2), 4)


def test_typical_element_requires_depth():
    params = ModuleParams(4, 4, 1, 1)
    space = params.space
    h1 = harmonic_basis(space, "x", 1).elements[0]
    h2 = harmonic_basis(space, "y", 0).elements[0]
    with pytest.raises(TruncationError):
        typical_element(params, h1, h2, 2)  # base degree is 3


def test_membership_triple_spot():
    for p, q, m in [(2, 4, 0), (4, 4, 1)]:
        for sign in (1, -1):
            params = ModuleParams(p, q, m, sign)
            space = params.space
            D = 2 * m + 12
            for kt in ktype_enumeration(params, 2, 2):
                h1 = harmonic_basis(space, "x", kt.k).elements[0]
                h2 = harmonic_basis(space, "y", kt.l).elements[0]
                f = typical_element(params, h1, h2, D)
                report = verify_membership(params, f)
                assert report.ok, (p, q, m, sign, kt.k, kt.l)


def test_weight_is_signed_m():
    params = ModuleParams(4, 4, 1, 1)
    space = params.space
    h1 = harmonic_basis(space, "x", 1).elements[0]
    h2 = harmonic_basis(space, "y", 0).elements[0]
    f = typical_element(params, h1, h2, 12)
    assert sl2_apply("H", f).agrees_with(f.scale(1))
    params_minus = ModuleParams(4, 4, 1, -1)
    g = typical_element(params_minus, h1, h2, 12)
    assert sl2_apply("H", g).agrees_with(g.scale(-1))


def test_casimir_scalars_frozen():
    # at (4,4,1): full Casimir m(m+2) - n^2/4 + n = -5; block values from kappa
    params = ModuleParams(4, 4, 1, 1)
    assert params.casimir_scalar_g() == Fraction(-5)
    kt = KType(1, 0, 4, 4)
    assert params.casimir_scalar_block(kt, "x") == Fraction(3)
    assert params.casimir_scalar_block(kt, "y") == Fraction(0)


def test_xi_scalars_frozen():
    # at (4,4,1): kappa (3,2) gives 3, kappa (2,3) gives -3, zero never happens
    params = ModuleParams(4, 4, 1, 1)
    assert params.xi_scalar(KType(1, 0, 4, 4)) == Fraction(3)
    assert params.xi_scalar(KType(0, 1, 4, 4)) == Fraction(-3)
    assert params.xi_scalar(KType(1, 2, 4, 4)) == Fraction(-5)
    assert params.xi_scalar(KType(2, 1, 4, 4)) == Fraction(5)


def test_xi_scalar_vanishes_at_m_zero():
    params = ModuleParams(4, 6, 0, 1)
    for kt in ktype_enumeration(params, 3, 3):
        assert params.xi_scalar(kt) == 0


def test_eigenvalue_reports_spot():
    params = ModuleParams(4, 4, 1, 1)
    space = params.space
    kt = KType(1, 0, 4, 4)
    h1 = harmonic_basis(space, "x", 1).elements[0]
    h2 = harmonic_basis(space, "y", 0).elements[0]
    f = typical_element(params, h1, h2, 14)
    for report in casimir_eigenvalue_check(params, f, kt):
        assert report.ok, report.name
    xi_report = xi_eigenvalue_check(params, f, kt)
    assert xi_report.ok and xi_report.scalar == 3


def test_apply_operator_validity_bookkeeping():
    params = ModuleParams(2, 4, 0, 1)
    space = params.space
    h1 = harmonic_basis(space, "x", 1).elements[0]
    h2 = harmonic_basis(space, "y", 0).elements[0]
    f = typical_element(params, h1, h2, 10)
    full = casimir_apply("g", f)  # the closed form reaches fourth derivative order
    assert full.validity == f.validity - 4
    block = casimir_apply("op", f)  # block form pairs each Laplacian with a square
    assert block.validity == f.validity
    d = WeylOperator.diff(space, 0)
    assert apply_operator(d, f).validity == f.validity - 1
    with pytest.raises(TruncationError):
        apply_operator(d.power(11), f)


def test_truncated_element_agreement_window():
    space = VariableSpace(2, 4)
    one = harmonic_basis(space, "x", 0).elements[0]
    a = TruncatedElement(one, 4)
    b = TruncatedElement(one + one.scale(0), 2)
    assert a.agrees_with(b)


harmonic_coeffs = st.lists(
    st.fractions(min_value=Fraction(-3), max_value=Fraction(3), max_denominator=5),
    min_size=4,
    max_size=4,
)


@given(harmonic_coeffs)
@settings(max_examples=10, deadline=None)
def test_membership_holds_on_harmonic_combinations(cs):
    # any rational combination of degree-1 harmonics is again harmonic,
    # and the resulting vector must still pass the membership triple
    params = ModuleParams(2, 4, 0, 1)
    space = params.space
    basis = harmonic_basis(space, "y", 1).elements
    h2 = basis[0].scale(0)
    for c, h in zip(cs, basis):
        h2 = h2 + h.scale(c)
    if h2.is_zero():
        return
    h1 = harmonic_basis(space, "x", 2).elements[0]
    f = typical_element(params, h1, h2, 9)
    assert verify_membership(params, f).ok


def test_p_action_spot():
    params = ModuleParams(4, 4, 1, 1)
    space = params.space
    h1 = harmonic_basis(space, "x", 1).elements[0]
    h2 = harmonic_basis(space, "y", 0).elements[0]
    for i in (1, 4):
        for j in (1, 4):
            assert p_action_check(params, h1, h2, i, j, 12)
    params_minus = ModuleParams(4, 4, 1, -1)
    assert p_action_check(params_minus, h1, h2, 2, 3, 12)


def test_default_samples_structure():
    params = ModuleParams(4, 4, 1, 1)
    samples = default_samples(params)
    kts = [(kt.k, kt.l) for kt, _, _ in samples]
    for pair in [(0, 1), (1, 0), (1, 2), (2, 1)]:
        assert pair in kts
    assert len(samples) > 4  # the full product basis at one type is included


def test_obstruction_exists_at_m_zero():
    res = garfinkle_obstruction(ModuleParams(4, 4, 0, 1))
    assert res.exists
    assert res.certificate is None
    assert res.xi_scalars  # the solver records the scalar targets it matched


def test_obstruction_infeasible_at_m_positive():
    res = garfinkle_obstruction(ModuleParams(4, 4, 1, 1))
    assert not res.exists
    assert res.witness is None
    assert res.certificate  # an explicit inconsistent row is named
    assert res.n_rows > 0


def test_obstruction_both_signs_agree():
    for sign in (1, -1):
        assert garfinkle_obstruction(ModuleParams(4, 4, 0, sign)).exists
        assert not garfinkle_obstruction(ModuleParams(4, 4, 1, sign)).exists
