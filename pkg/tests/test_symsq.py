"""Symmetric-square tensors: transport, invariance, decomposition, the criterion."""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from gkverify.exact_arith import ONE, ZERO, gr
from gkverify.liealg import Generator, LieElement, generators
from gkverify.symsq import (
    SymSquareTensor,
    adjoint_action,
    build_Q,
    build_S2,
    build_S4,
    build_Xi,
    decompose_S2,
    gamma2_q_identity,
    gamma2_xi_identity,
    pairing,
    s4_vanishing,
    theorem_ingredients,
    transport,
    transport_inv,
    xi_closed_form,
)
from gkverify.gkmodule import ModuleParams

SIG = (2, 2)
MGENS = generators(*SIG, "M")


def test_symmetry_is_enforced():
    a, b = MGENS[0], MGENS[1]
    with pytest.raises(ValueError):
        SymSquareTensor(SIG, "M", {(a, b): ONE})
    SymSquareTensor(SIG, "M", {(a, b): ONE, (b, a): ONE})
    SymSquareTensor(SIG, "M", {(a, a): gr(3)})


def test_q_frozen_small():
    q = build_Q(SIG, "M")
    assert set(q.coeffs) == {(g, g) for g in MGENS}
    for g in MGENS:
        assert q.coeffs[(g, g)] == gr(-2)
    qx = build_Q(SIG, "X")
    for g in generators(*SIG, "X"):
        same_block = g.j <= 2 or g.i > 2
        assert qx.coeffs[(g, g)] == (gr(-2) if same_block else gr(2))


def test_transport_roundtrip_on_q():
    qx = build_Q(SIG, "X")
    assert transport(qx) == build_Q(SIG, "M")
    assert transport_inv(transport(qx)) == qx


symmetric_tensors = st.lists(
    st.tuples(
        st.sampled_from(MGENS),
        st.sampled_from(MGENS),
        st.fractions(min_value=Fraction(-3), max_value=Fraction(3), max_denominator=4),
    ),
    min_size=0,
    max_size=5,
).map(
    lambda entries: _symmetrize(entries)
)


def _symmetrize(entries):
    coeffs = {}
    for a, b, c in entries:
        cc = gr(c)
        for key in ((a, b), (b, a)):
            acc = coeffs.get(key, ZERO) + cc
            if acc:
                coeffs[key] = acc
            elif key in coeffs:
                del coeffs[key]
    return SymSquareTensor(SIG, "M", coeffs)


@given(symmetric_tensors, symmetric_tensors)
@settings(max_examples=30)
def test_pairing_is_symmetric_bilinear(s, t):
    assert pairing(s, t) == pairing(t, s)
    assert pairing(s + t, t) == pairing(s, t) + pairing(t, t)
    assert pairing(s.scale(Fraction(2, 3)), t) == pairing(s, t) * gr(Fraction(2, 3))


@given(symmetric_tensors)
@settings(max_examples=30)
def test_pairing_is_definite_on_real_tensors(t):
    val = pairing(t, t)
    assert val.im == 0
    if t.is_zero():
        assert val == ZERO
    else:
        assert val.re > 0


@given(symmetric_tensors)
@settings(max_examples=25)
def test_transport_roundtrip(t):
    assert transport(transport_inv(t)) == t


@given(symmetric_tensors, st.sampled_from(MGENS), st.sampled_from(MGENS))
@settings(max_examples=25, deadline=None)
def test_adjoint_action_is_a_lie_action(t, ga, gb):
    from gkverify.liealg import bracket

    a = LieElement.basis(ga, SIG)
    b = LieElement.basis(gb, SIG)
    lhs = adjoint_action(bracket(a, b), t)
    rhs = adjoint_action(a, adjoint_action(b, t)) - adjoint_action(
        b, adjoint_action(a, t)
    )
    assert lhs == rhs


def test_q_is_invariant():
    for sig in [(2, 2), (2, 4), (3, 3)]:
        q = build_Q(sig, "M")
        for g in generators(*sig, "M"):
            assert adjoint_action(LieElement.basis(g, sig), q).is_zero()


def test_s2_family_is_trace_free():
    for sig in [(2, 2), (2, 4)]:
        n = sum(sig)
        total = build_S2(sig, 1, 1)
        for i in range(2, n + 1):
            total = total + build_S2(sig, i, i)
        assert total.is_zero()


def test_xi_definition_matches_closed_form():
    for sig in [(2, 2), (2, 4), (3, 3), (4, 4)]:
        assert build_Xi(sig) == xi_closed_form(sig)


def test_xi_closed_form_frozen_small():
    # diagonal -1 on first-block pairs, +1 on second-block pairs, plus
    # -(p-q)/(2n) times the split Casimir tensor; at p = q the Q part drops
    xi = xi_closed_form(SIG)
    gens = generators(*SIG, "X")
    for g in gens:
        if g.j <= 2:
            assert xi.coeffs[(g, g)] == -ONE
        elif g.i > 2:
            assert xi.coeffs[(g, g)] == ONE
        else:
            assert (g, g) not in xi.coeffs


def test_gamma2_identities():
    for sig in [(2, 2), (2, 4), (3, 3), (4, 4)]:
        assert gamma2_q_identity(sig)
        assert gamma2_xi_identity(sig)


def test_s4_operator_images_vanish():
    for sig, expected in [((2, 2), 1), ((2, 4), 15), ((3, 3), 15)]:
        count, all_zero = s4_vanishing(sig)
        assert count == expected == comb(sum(sig), 4)
        assert all_zero


def test_decomposition_dimensions():
    for n, dims in [(4, (1, 1, 9, 10)), (5, (1, 5, 14, 35)), (6, (1, 15, 20, 84))]:
        rep = decompose_S2(n, certify=True)
        assert rep.dims == dims
        N = n * (n - 1) // 2
        assert rep.total_dim == N * (N + 1) // 2
        assert rep.direct_sum_ok
        assert all(rep.invariance_ok.values())
        assert all(rep.certificates.values())
        assert rep.all_ok()


def test_decomposition_pieces_are_orthogonal():
    rep = decompose_S2(4, certify=False)
    flat = [(s.label, t) for s in rep.subspaces for t in s.basis]
    for i, (la, ta) in enumerate(flat):
        for lb, tb in flat[i + 1 :]:
            if la != lb:
                assert pairing(ta, tb) == ZERO


def test_theorem_ingredients_consistency():
    rep0 = theorem_ingredients(ModuleParams(2, 4, 0, 1))
    assert rep0.joseph_consistent and rep0.predicted and rep0.matches_prediction()
    rep1 = theorem_ingredients(ModuleParams(4, 4, 1, 1))
    assert rep1.matches_prediction() and not rep1.joseph_consistent
    # the failure must sit in the obstruction step alone
    assert rep1.casimir_step_ok and rep1.s4_step_ok
    assert not rep1.obstruction.exists


def test_theorem_report_serializes():
    rep = theorem_ingredients(ModuleParams(2, 4, 0, 1))
    d = rep.to_dict()
    assert d["joseph_consistent"] is True
    assert d["predicted"] is True
