"""Lie algebra structure, the operator realization, and the PBW machinery."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkverify.exact_arith import I, MINUS_I, ONE, ZERO, gr
from gkverify.liealg import (
    EnvelopingElement,
    Generator,
    LieElement,
    bracket,
    casimir,
    casimir_operator_closed,
    degree2_symbol,
    dual_sign,
    form_B,
    gamma2,
    generator_matrix,
    generators,
    lie_from_matrix,
    pbw_normal_form,
    phi,
    phi_inv,
    pi_casimir,
    pi_generator,
    pi_lie,
    sl2_casimir_op,
    sl2_triple,
)
from gkverify.poly import VariableSpace
from gkverify.symsq import SymSquareTensor
from gkverify.weyl import WeylOperator

SIG = (2, 2)
GENS = generators(*SIG, "X")

gen_strategy = st.sampled_from(GENS)
lie_elements = st.lists(
    st.tuples(
        gen_strategy,
        st.fractions(min_value=Fraction(-3), max_value=Fraction(3), max_denominator=4),
    ),
    min_size=0,
    max_size=4,
).map(
    lambda entries: sum(
        (LieElement.basis(g, SIG).scale(c) for g, c in entries),
        LieElement.zero(SIG, "X"),
    )
)


def test_generator_count():
    # dim of the algebra is n(n-1)/2
    for p, q in [(1, 1), (2, 2), (2, 4), (3, 3), (4, 6)]:
        n = p + q
        assert len(generators(p, q, "X")) == n * (n - 1) // 2
        assert len(generators(p, q, "M")) == n * (n - 1) // 2


def test_generator_matrices_frozen():
    # same-block generator is antisymmetric, mixed is symmetric off-diagonal
    mat = generator_matrix(Generator(1, 2, "X"), SIG)
    assert mat[0][1] == ONE and mat[1][0] == -ONE
    mixed = generator_matrix(Generator(1, 3, "X"), SIG)
    assert mixed[0][2] == -ONE and mixed[2][0] == -ONE
    m = generator_matrix(Generator(1, 3, "M"), SIG)
    assert m[0][2] == ONE and m[2][0] == -ONE


def test_matrix_roundtrip():
    a = LieElement.basis(Generator(1, 4, "X"), SIG).scale(Fraction(2, 3))
    b = LieElement.basis(Generator(3, 4, "X"), SIG).scale(-2)
    elem = a + b
    assert lie_from_matrix(elem.to_matrix(), SIG, "X") == elem


@given(lie_elements, lie_elements)
@settings(max_examples=30)
def test_bracket_antisymmetry(a, b):
    assert bracket(a, b) == bracket(b, a).scale(-1)
    assert bracket(a, a).is_zero()


@given(lie_elements, lie_elements, lie_elements)
@settings(max_examples=30)
def test_bracket_jacobi(a, b, c):
    jac = (
        bracket(a, bracket(b, c))
        + bracket(b, bracket(c, a))
        + bracket(c, bracket(a, b))
    )
    assert jac.is_zero()


@given(lie_elements, lie_elements)
@settings(max_examples=25)
def test_bracket_matches_matrix_commutator(a, b):
    ma, mb = a.to_matrix(), b.to_matrix()
    n = sum(SIG)
    comm = [
        [
            sum((ma[i][k] * mb[k][j] - mb[i][k] * ma[k][j] for k in range(n)), ZERO)
            for j in range(n)
        ]
        for i in range(n)
    ]
    assert lie_from_matrix(comm, SIG, "X") == bracket(a, b)


def test_duality_of_the_trace_form():
    for p, q in [(2, 2), (2, 4), (3, 3)]:
        sig = (p, q)
        gens = generators(p, q, "X")
        for a in gens:
            ea = LieElement.basis(a, sig)
            for b in gens:
                dual_b = LieElement.basis(b, sig).scale(dual_sign(b, p))
                expect = ONE if a == b else ZERO
                assert form_B(ea, dual_b) == expect


def test_m_flavor_form_is_minus_identity():
    sig = (2, 4)
    gens = generators(*sig, "M")
    for a in gens:
        for b in gens:
            val = form_B(LieElement.basis(a, sig), LieElement.basis(b, sig))
            assert val == (-ONE if a == b else ZERO)


@given(lie_elements, lie_elements)
@settings(max_examples=25)
def test_phi_is_a_bracket_isomorphism(a, b):
    assert phi_inv(phi(a)) == a
    assert phi(bracket(a, b)) == bracket(phi(a), phi(b))


def test_mixed_generator_image_frozen():
    # pi(X_{1, p+1}) = -i (x1 y1 + d_x1 d_y1)
    space = VariableSpace(2, 2)
    op = pi_generator(Generator(1, 3, "X"), space)
    expect = WeylOperator.term(space, (1, 0, 1, 0), (0, 0, 0, 0), MINUS_I) + (
        WeylOperator.term(space, (0, 0, 0, 0), (1, 0, 1, 0), MINUS_I)
    )
    assert op == expect


def test_same_block_image_frozen():
    # pi(X_{1,2}) = x1 d_x2 - x2 d_x1 and pi(X_{p+1,p+2}) flips sign
    space = VariableSpace(2, 2)
    op = pi_generator(Generator(1, 2, "X"), space)
    expect = WeylOperator.term(space, (1, 0, 0, 0), (0, 1, 0, 0), 1) + (
        WeylOperator.term(space, (0, 1, 0, 0), (1, 0, 0, 0), -1)
    )
    assert op == expect
    opy = pi_generator(Generator(3, 4, "X"), space)
    expecty = WeylOperator.term(space, (0, 0, 1, 0), (0, 0, 0, 1), -1) + (
        WeylOperator.term(space, (0, 0, 0, 1), (0, 0, 1, 0), 1)
    )
    assert opy == expecty


def test_homomorphism_small_signatures():
    for p, q in [(2, 2), (2, 3)]:
        sig = (p, q)
        space = VariableSpace(p, q)
        gens = generators(p, q, "X")
        for ia, a in enumerate(gens):
            for b in gens[ia + 1 :]:
                lhs = pi_generator(a, space).commutator(pi_generator(b, space))
                rhs = pi_lie(bracket(LieElement.basis(a, sig), LieElement.basis(b, sig)))
                assert lhs == rhs


def test_commutant_small_signature():
    space = VariableSpace(2, 3)
    triple = sl2_triple(space)
    for g in generators(2, 3, "X"):
        op = pi_generator(g, space)
        for z in triple:
            assert op.commutator(z).is_zero()


def test_commutant_triple_relations():
    for p, q in [(2, 2), (2, 4), (3, 3)]:
        space = VariableSpace(p, q)
        H, Xp, Xm = sl2_triple(space)
        assert H.commutator(Xp) == Xp.scale(2)
        assert H.commutator(Xm) == Xm.scale(-2)
        assert Xp.commutator(Xm) == H


words = st.lists(gen_strategy, min_size=0, max_size=4).map(tuple)


@given(words, st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_pbw_normal_form_is_schedule_independent(word, seed):
    rng = random.Random(seed)
    work = [(word, ONE)]
    guard = 0
    while True:
        guard += 1
        assert guard < 10000
        choices = []
        for idx, (w, _) in enumerate(work):
            for pos in range(len(w) - 1):
                if w[pos] > w[pos + 1]:
                    choices.append((idx, pos))
        if not choices:
            break
        idx, pos = rng.choice(choices)
        w, c = work.pop(idx)
        ga, gb = w[pos], w[pos + 1]
        work.append((w[:pos] + (gb, ga) + w[pos + 2 :], c))
        table_entry = bracket(LieElement.basis(ga, SIG), LieElement.basis(gb, SIG))
        for g, sc in table_entry.coeffs.items():
            work.append((w[:pos] + (g,) + w[pos + 2 :], c * sc))
    collapsed = {}
    for w, c in work:
        acc = collapsed.get(w, ZERO) + c
        if acc:
            collapsed[w] = acc
        elif w in collapsed:
            del collapsed[w]
    u = EnvelopingElement(SIG, "X", {word: ONE})
    assert pbw_normal_form(u).words == collapsed


def test_pbw_sorted_words_are_fixed():
    a, b = GENS[0], GENS[1]
    u = EnvelopingElement(SIG, "X", {(a, b): gr(2), (a, a, b): I})
    assert pbw_normal_form(u) == u


@given(
    st.lists(
        st.tuples(
            gen_strategy,
            gen_strategy,
            st.fractions(
                min_value=Fraction(-3), max_value=Fraction(3), max_denominator=4
            ),
        ),
        min_size=0,
        max_size=4,
    )
)
@settings(max_examples=30, deadline=None)
def test_symbol_inverts_multiplication_on_symmetric_tensors(entries):
    coeffs = {}
    for a, b, c in entries:
        cc = gr(c)
        for key in ((a, b), (b, a)):
            acc = coeffs.get(key, ZERO) + cc
            if acc:
                coeffs[key] = acc
            elif key in coeffs:
                del coeffs[key]
    tensor = SymSquareTensor(SIG, "X", coeffs)
    assert degree2_symbol(gamma2(tensor)) == dict(tensor.coeffs)


def test_casimir_word_structure():
    sig = (2, 4)
    gens = generators(*sig, "X")
    full = casimir("g", sig)
    assert set(full.words) == {(g, g) for g in gens}
    for g, word_coeff in ((g, full.words[(g, g)]) for g in gens):
        assert word_coeff == gr(dual_sign(g, 2))
    first = casimir("op", sig)
    assert set(first.words) == {(g, g) for g in gens if g.j <= 2}
    second = casimir("oq", sig)
    assert set(second.words) == {(g, g) for g in gens if g.i > 2}


def test_casimir_closed_forms_small():
    for p, q in [(2, 2), (2, 4)]:
        space = VariableSpace(p, q)
        for which in ("op", "oq", "g"):
            assert pi_casimir(space, which) == casimir_operator_closed(space, which)


def test_two_casimir_relation_small():
    space = VariableSpace(2, 4)
    n = 6
    shift = WeylOperator.identity(space).scale(Fraction(-n * n, 4) + n)
    assert pi_casimir(space, "g") == sl2_casimir_op(space) + shift


def test_pi_env_respects_products():
    sig = (2, 2)
    space = VariableSpace(2, 2)
    from gkverify.liealg import pi_env

    a, b = GENS[0], GENS[3]
    u = EnvelopingElement(sig, "X", {(a, b): gr(Fraction(1, 2)), (b,): ONE})
    expect = pi_generator(a, space).compose(pi_generator(b, space)).scale(
        Fraction(1, 2)
    ) + pi_generator(b, space)
    assert pi_env(u, space) == expect
