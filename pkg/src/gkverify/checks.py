"""Named verification checks with a uniform runner.

Every invariant the library promises is addressable here as a dotted name,
``suite.check``, grouped into seven suites:

* ``lie``: bracket, form, and realization identities of the Lie algebra,
* ``weyl``: operator algebra, harmonic decomposition, exact arithmetic,
* ``casimir``: closed operator forms and eigenvalue checks,
* ``module``: membership and structure of the truncated module vectors,
* ``paction``: the four-layer mixed generator action and its guards,
* ``symsq``: symmetric-square tensors, transport, and decomposition,
* ``garfinkle``: the degree-two obstruction solver and the combined
  annihilator criterion.

A check is a function of a resolved parameter context returning
``(ok, validity, detail)`` where ``detail`` is a JSON-serializable dict.
Checks are deterministic: sampled families use fixed seeds derived from the
parameters, so two runs with the same configuration produce identical
reports apart from timing.  Scope controls fan-out: an ``once`` check runs
a single time, a ``pq`` check runs once per distinct block signature, and a
``pqm`` check runs once per full parameter tuple.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from time import perf_counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exact_arith import ONE, ZERO, GaussianRational, gr
from .poly import (
    MultiPoly,
    VariableSpace,
    dagger,
    euler,
    harmonic_basis,
    harmonic_dim,
    laplacian,
    rsq,
)
from .linalg import SparseRREF
from .weyl import WeylOperator, euler_op, laplacian_op, rsq_op
from .liealg import (
    EnvelopingElement,
    LieElement,
    _bracket_table,
    bracket,
    casimir_operator_closed,
    degree2_symbol,
    dual_sign,
    gamma2,
    generator_matrix,
    generators,
    pbw_normal_form,
    pi_casimir,
    pi_generator,
    pi_lie,
    sl2_casimir_op,
    sl2_triple,
)
from .gkmodule import (
    KType,
    ModuleParams,
    PsiPoleError,
    TruncatedElement,
    apply_operator,
    casimir_apply,
    garfinkle_obstruction,
    ktype_enumeration,
    p_action_check,
    psi_series,
    typical_element,
    verify_membership,
    xi_eigenvalue_check,
)
from .symsq import (
    SymSquareTensor,
    adjoint_action,
    build_Q,
    build_Xi,
    decompose_S2,
    gamma2_q_identity,
    gamma2_xi_identity,
    s4_vanishing,
    theorem_ingredients,
    transport,
    transport_inv,
    xi_closed_form,
)

ALL_SUITES: Tuple[str, ...] = (
    "lie",
    "weyl",
    "casimir",
    "module",
    "paction",
    "symsq",
    "garfinkle",
)

# Suites whose checks instantiate module parameters and therefore need the
# parameter constraints (p, q >= 2, p + q even, 0 <= m, m + 3 <= (p+q)/2).
MODULE_SUITES = frozenset({"casimir", "module", "paction", "garfinkle"})


@dataclass(frozen=True)
class CheckRun:
    """Resolved parameters for one execution of one check."""

    p: Optional[int]
    q: Optional[int]
    m: Optional[int]
    max_degree: Optional[int]
    k_max: int
    l_max: int

    @property
    def sig(self) -> Tuple[int, int]:
        return (self.p, self.q)

    @property
    def space(self) -> VariableSpace:
        return VariableSpace(self.p, self.q)

    def params(self, sign: int) -> ModuleParams:
        return ModuleParams(self.p, self.q, self.m, sign)

    def depth(self) -> int:
        """Working truncation degree for module-level checks."""
        if self.max_degree is not None:
            return self.max_degree
        return 2 * self.m + 12

    def solver_depth(self) -> int:
        """Working truncation degree for the obstruction solver."""
        if self.max_degree is not None:
            return self.max_degree
        return 2 * self.m + 8


CheckFn = Callable[[CheckRun], Tuple[bool, Optional[int], Dict]]


@dataclass(frozen=True)
class CheckDef:
    name: str
    suite: str
    scope: str  # "once" | "pq" | "pqm"
    description: str
    fn: CheckFn


REGISTRY: Dict[str, CheckDef] = {}


def _register(name: str, suite: str, scope: str, description: str):
    if suite not in ALL_SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if scope not in ("once", "pq", "pqm"):
        raise ValueError(f"unknown scope {scope!r}")

    def deco(fn: CheckFn) -> CheckFn:
        if name in REGISTRY:
            raise ValueError(f"duplicate check name {name!r}")
        REGISTRY[name] = CheckDef(name, suite, scope, description, fn)
        return fn

    return deco


def _first_harmonics(space: VariableSpace, kt: KType) -> Tuple[MultiPoly, MultiPoly]:
    h1 = harmonic_basis(space, "x", kt.k).elements[0]
    h2 = harmonic_basis(space, "y", kt.l).elements[0]
    return h1, h2


# -- lie suite --------------------------------------------------------------------


@_register(
    "lie.homomorphism",
    "lie",
    "pq",
    "operator realization respects every bracket of canonical generator pairs",
)
def _lie_homomorphism(run: CheckRun):
    space = run.space
    sig = run.sig
    gens = generators(*sig, "X")
    pairs = 0
    for ia, a in enumerate(gens):
        pa = pi_generator(a, space)
        ea = LieElement.basis(a, sig)
        for b in gens[ia + 1 :]:
            lhs = pa.commutator(pi_generator(b, space))
            rhs = pi_lie(bracket(ea, LieElement.basis(b, sig)))
            if lhs != rhs:
                return False, None, {"failed_pair": [list(a), list(b)]}
            pairs += 1
    return True, None, {"pairs_checked": pairs}


@_register(
    "lie.commutant",
    "lie",
    "pq",
    "every realized generator commutes with the three radial operators",
)
def _lie_commutant(run: CheckRun):
    space = run.space
    triple = sl2_triple(space)
    gens = generators(*run.sig, "X")
    checked = 0
    for g in gens:
        op = pi_generator(g, space)
        for z in triple:
            if not op.commutator(z).is_zero():
                return False, None, {"failed_generator": list(g)}
            checked += 1
    return True, None, {"commutators_checked": checked}


@_register(
    "lie.duality",
    "lie",
    "pq",
    "the half-trace form pairs each generator with its dual to one, all others to zero",
)
def _lie_duality(run: CheckRun):
    sig = run.sig
    gens = generators(*sig, "X")
    mats = [generator_matrix(g, sig) for g in gens]
    n = run.p + run.q
    checked = 0
    for ia, a in enumerate(gens):
        for ib, b in enumerate(gens):
            ma, mb = mats[ia], mats[ib]
            tr = ZERO
            for i in range(n):
                for j in range(n):
                    if ma[i][j] and mb[j][i]:
                        tr = tr + ma[i][j] * mb[j][i]
            val = tr * gr(Fraction(dual_sign(b, run.p), 2))
            expect = ONE if a == b else ZERO
            if val != expect:
                return False, None, {"failed_pair": [list(a), list(b)]}
            checked += 1
    return True, None, {"pairs_checked": checked}


@_register(
    "lie.jacobi",
    "lie",
    "pq",
    "the bracket satisfies the Jacobi identity on a fixed-seed family of generator triples",
)
def _lie_jacobi(run: CheckRun):
    sig = run.sig
    gens = generators(*sig, "X")
    rng = random.Random(1000 * run.p + run.q)
    n_triples = 150
    for _ in range(n_triples):
        a, b, c = (LieElement.basis(rng.choice(gens), sig) for _ in range(3))
        jac = (
            bracket(a, bracket(b, c))
            + bracket(b, bracket(c, a))
            + bracket(c, bracket(a, b))
        )
        if not jac.is_zero():
            return False, None, {"failed": True}
    return True, None, {"triples_checked": n_triples}


@_register(
    "lie.pbw_confluence",
    "lie",
    "pq",
    "straightening a word at the first or the last inversion yields the same normal form",
)
def _lie_pbw_confluence(run: CheckRun):
    sig = run.sig
    gens = generators(*sig, "X")
    rng = random.Random(2000 * run.p + run.q)

    def straighten_last(u: EnvelopingElement) -> EnvelopingElement:
        table = _bracket_table(u.sig, u.flavor)
        out: Dict[tuple, GaussianRational] = {}
        stack = list(u.words.items())
        while stack:
            word, c = stack.pop()
            if not c:
                continue
            pos = -1
            for t in range(len(word) - 2, -1, -1):
                if word[t] > word[t + 1]:
                    pos = t
                    break
            if pos < 0:
                acc = out.get(word)
                acc = c if acc is None else acc + c
                if acc:
                    out[word] = acc
                elif word in out:
                    del out[word]
                continue
            ga, gb = word[pos], word[pos + 1]
            stack.append((word[:pos] + (gb, ga) + word[pos + 2 :], c))
            for g, sc in table[(ga, gb)].items():
                stack.append((word[:pos] + (g,) + word[pos + 2 :], c * sc))
        return EnvelopingElement(u.sig, u.flavor, out)

    n_words = 25
    for _ in range(n_words):
        length = rng.randint(2, 4)
        word = tuple(rng.choice(gens) for _ in range(length))
        u = EnvelopingElement(sig, "X", {word: ONE})
        nf = pbw_normal_form(u)
        if nf != straighten_last(u):
            return False, None, {"failed_word_length": length}
        if pbw_normal_form(nf) != nf:
            return False, None, {"not_idempotent": True}
    return True, None, {"words_checked": n_words}


@_register(
    "lie.symbol_roundtrip",
    "lie",
    "pq",
    "the degree-two symbol of the multiplication image reproduces each symmetric tensor",
)
def _lie_symbol_roundtrip(run: CheckRun):
    sig = run.sig
    gens = generators(*sig, "X")
    tensors = [build_Q(sig, "X"), xi_closed_form(sig)]
    a, b = gens[0], gens[min(1, len(gens) - 1)]
    tensors.append(SymSquareTensor(sig, "X", {(a, a): ONE}))
    if a != b:
        tensors.append(SymSquareTensor(sig, "X", {(a, b): ONE, (b, a): ONE}))
    for t in tensors:
        if degree2_symbol(gamma2(t)) != dict(t.coeffs):
            return False, None, {"failed_tensor_terms": len(t.coeffs)}
    return True, None, {"tensors_checked": len(tensors)}


# -- weyl suite --------------------------------------------------------------------


@_register(
    "weyl.canonical_commutation",
    "weyl",
    "pq",
    "derivative and multiplication operators satisfy the canonical commutation relations",
)
def _weyl_ccr(run: CheckRun):
    space = run.space
    nv = space.nvars
    ident = WeylOperator.identity(space)
    checked = 0
    for i in range(nv):
        di = WeylOperator.diff(space, i)
        vi = WeylOperator.var(space, i)
        for j in range(nv):
            dj = WeylOperator.diff(space, j)
            vj = WeylOperator.var(space, j)
            comm = di.commutator(vj)
            expect = ident if i == j else WeylOperator.zero(space)
            if comm != expect:
                return False, None, {"failed_pair": [i, j]}
            if not di.commutator(dj).is_zero() or not vi.commutator(vj).is_zero():
                return False, None, {"failed_pair": [i, j]}
            checked += 1
    return True, None, {"pairs_checked": checked}


def _op_family(space: VariableSpace) -> List[WeylOperator]:
    mixed = next(
        g for g in generators(space.p, space.q, "X") if g.i <= space.p < g.j
    )
    return [
        euler_op(space, "x"),
        laplacian_op(space, "x"),
        rsq_op(space, "y"),
        WeylOperator.diff(space, 0),
        WeylOperator.var(space, space.nvars - 1),
        pi_generator(mixed, space),
    ]


def _poly_family(space: VariableSpace) -> List[MultiPoly]:
    x1 = MultiPoly.variable(space, 0)
    y1 = MultiPoly.variable(space, space.p)
    s = x1 + y1
    return [
        MultiPoly.one(space),
        x1.mul(x1),
        x1.mul(y1),
        s.mul(s).mul(x1),
        rsq(space, "x").mul(rsq(space, "y")),
    ]


@_register(
    "weyl.compose_apply",
    "weyl",
    "pq",
    "applying a composition agrees with applying the factors in sequence",
)
def _weyl_compose_apply(run: CheckRun):
    space = run.space
    ops = _op_family(space)
    polys = _poly_family(space)
    checked = 0
    for A in ops:
        for B in ops:
            AB = A.compose(B)
            for f in polys:
                if AB.apply(f) != A.apply(B.apply(f)):
                    return False, None, {"failed": True}
                checked += 1
    return True, None, {"applications_checked": checked}


@_register(
    "weyl.commutator_jacobi",
    "weyl",
    "pq",
    "operator commutators satisfy the Jacobi identity on a deterministic family",
)
def _weyl_jacobi(run: CheckRun):
    space = run.space
    ops = _op_family(space)[:4]
    checked = 0
    for A in ops:
        for B in ops:
            for C in ops:
                jac = (
                    A.commutator(B.commutator(C))
                    + B.commutator(C.commutator(A))
                    + C.commutator(A.commutator(B))
                )
                if not jac.is_zero():
                    return False, None, {"failed": True}
                checked += 1
    return True, None, {"triples_checked": checked}


@_register(
    "weyl.degree_bookkeeping",
    "weyl",
    "pq",
    "composition never raises polynomial degree or derivative order beyond the factor sums",
)
def _weyl_degree(run: CheckRun):
    space = run.space
    ops = _op_family(space)
    checked = 0
    for A in ops:
        for B in ops:
            C = A.compose(B)
            if C.is_zero():
                continue
            if C.degree_raise() > A.degree_raise() + B.degree_raise():
                return False, None, {"failed": "degree_raise"}
            if C.max_derivative_order() > A.max_derivative_order() + B.max_derivative_order():
                return False, None, {"failed": "derivative_order"}
            checked += 1
    return True, None, {"compositions_checked": checked}


@_register(
    "weyl.harmonic_dimension",
    "weyl",
    "pq",
    "harmonic basis sizes match the two-binomial dimension count and are annihilated exactly",
)
def _weyl_harmonic_dimension(run: CheckRun):
    space = run.space
    k_top = min(run.k_max, 6)
    sizes = {}
    for block in ("x", "y"):
        nblk = space.block_size(block)
        for k in range(k_top + 1):
            basis = harmonic_basis(space, block, k)
            if len(basis) != harmonic_dim(nblk, k):
                return False, None, {"failed_block": block, "degree": k}
            rr = SparseRREF(pivot="max")
            for h in basis.elements:
                if rr.add_row(h.monomials())[0] != "pivot":
                    return False, None, {
                        "failed_block": block,
                        "degree": k,
                        "dependent_basis": True,
                    }
                if not laplacian(h, block).is_zero():
                    return False, None, {"failed_block": block, "degree": k}
            sizes[f"{block}{k}"] = len(basis)
    return True, None, {"basis_sizes": sizes}


@_register(
    "weyl.dagger_harmonic",
    "weyl",
    "pq",
    "the degree-lowering correction of variable times harmonic is again harmonic",
)
def _weyl_dagger(run: CheckRun):
    space = run.space
    checked = 0
    corrected = 0
    for block in ("x", "y"):
        first = space.block_range(block)[0]
        for k in range(min(run.k_max, 4) + 1):
            basis = harmonic_basis(space, block, k)
            for h in basis.elements[:2]:
                P = MultiPoly.variable(space, first).mul(h)
                Pd = dagger(P, block)
                if not laplacian(Pd, block).is_zero():
                    return False, None, {"failed_block": block, "degree": k}
                if Pd != P:
                    corrected += 1
                checked += 1
    return True, None, {"products_checked": checked, "corrections_applied": corrected}


@_register(
    "weyl.euler_scalar",
    "weyl",
    "pq",
    "the block Euler operator multiplies block-homogeneous polynomials by their degree",
)
def _weyl_euler(run: CheckRun):
    space = run.space
    checked = 0
    for block in ("x", "y"):
        for k in range(min(run.k_max, 4) + 1):
            h = harmonic_basis(space, block, k).elements[0]
            if euler(h, block) != h.scale(k):
                return False, None, {"failed_block": block, "degree": k}
            f = h.mul(rsq(space, block))
            if euler(f, block) != f.scale(k + 2):
                return False, None, {"failed_block": block, "degree": k}
            checked += 2
    return True, None, {"polynomials_checked": checked}


@_register(
    "weyl.field_axioms",
    "weyl",
    "once",
    "exact coefficient arithmetic satisfies the field axioms on a fixed-seed sample",
)
def _weyl_field_axioms(run: CheckRun):
    rng = random.Random(20240819)

    def rand_gr() -> GaussianRational:
        return gr(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        )

    n_triples = 40
    for _ in range(n_triples):
        a, b, c = rand_gr(), rand_gr(), rand_gr()
        if (a + b) + c != a + (b + c) or (a * b) * c != a * (b * c):
            return False, None, {"failed": "associativity"}
        if a * (b + c) != a * b + a * c:
            return False, None, {"failed": "distributivity"}
        if a + (-a) != ZERO or a - a != ZERO:
            return False, None, {"failed": "additive_inverse"}
        if a != ZERO and a * a.inverse() != ONE:
            return False, None, {"failed": "multiplicative_inverse"}
        for part in (a.re, a.im):
            if gcd(part.numerator, part.denominator) != 1:
                return False, None, {"failed": "reduction"}
    return True, None, {"triples_checked": n_triples}


# -- casimir suite -----------------------------------------------------------------


@_register(
    "casimir.op_closed_form",
    "casimir",
    "pq",
    "the first-block Casimir image equals its radial closed form as an operator",
)
def _casimir_op_closed(run: CheckRun):
    space = run.space
    ok = pi_casimir(space, "op") == casimir_operator_closed(space, "op")
    return ok, None, {"block": "x"}


@_register(
    "casimir.oq_closed_form",
    "casimir",
    "pq",
    "the second-block Casimir image equals its radial closed form as an operator",
)
def _casimir_oq_closed(run: CheckRun):
    space = run.space
    ok = pi_casimir(space, "oq") == casimir_operator_closed(space, "oq")
    return ok, None, {"block": "y"}


@_register(
    "casimir.g_closed_form",
    "casimir",
    "pq",
    "the full Casimir image equals its radial closed form as an operator",
)
def _casimir_g_closed(run: CheckRun):
    space = run.space
    ok = pi_casimir(space, "g") == casimir_operator_closed(space, "g")
    return ok, None, {"block": "xy"}


@_register(
    "casimir.sl2_relation",
    "casimir",
    "pq",
    "the full Casimir image equals the commutant Casimir shifted by the dimension constant",
)
def _casimir_sl2(run: CheckRun):
    space = run.space
    n = run.p + run.q
    shift = WeylOperator.identity(space).scale(Fraction(-n * n, 4) + n)
    ok = pi_casimir(space, "g") == sl2_casimir_op(space) + shift
    return ok, None, {"n": n}


def _eigenvalue_sweep(run: CheckRun, which: str):
    checked = 0
    min_validity = None
    scalars = []
    for sign in (1, -1):
        params = run.params(sign)
        space = params.space
        D = run.depth()
        for kt in ktype_enumeration(params, run.k_max, run.l_max):
            h1, h2 = _first_harmonics(space, kt)
            f = typical_element(params, h1, h2, D)
            if which == "xi":
                report = xi_eigenvalue_check(params, f, kt)
                applied_ok, validity = report.ok, report.validity
                scalar = report.scalar
            else:
                block = "x" if which == "op" else "y"
                scalar = (
                    params.casimir_scalar_g()
                    if which == "g"
                    else params.casimir_scalar_block(kt, block)
                )
                applied = casimir_apply(which, f)
                applied_ok = applied.agrees_with(f.scale(scalar))
                validity = applied.validity
            if not applied_ok:
                return False, validity, {
                    "failed_sign": sign,
                    "failed_ktype": [kt.k, kt.l],
                }
            scalars.append(str(scalar))
            checked += 1
            min_validity = validity if min_validity is None else min(min_validity, validity)
    detail = {"checked": checked, "scalars": sorted(set(scalars))}
    if which == "xi" and run.m == 0:
        detail["zero_at_m0"] = all(s == "0" for s in scalars)
        if not detail["zero_at_m0"]:
            return False, min_validity, detail
    return True, min_validity, detail


@_register(
    "casimir.op_eigenvalue",
    "casimir",
    "pqm",
    "the first-block Casimir acts on each sampled vector by its exact scalar",
)
def _casimir_op_eigenvalue(run: CheckRun):
    return _eigenvalue_sweep(run, "op")


@_register(
    "casimir.oq_eigenvalue",
    "casimir",
    "pqm",
    "the second-block Casimir acts on each sampled vector by its exact scalar",
)
def _casimir_oq_eigenvalue(run: CheckRun):
    return _eigenvalue_sweep(run, "oq")


@_register(
    "casimir.g_eigenvalue",
    "casimir",
    "pqm",
    "the full Casimir acts on each sampled vector by one scalar for the whole family",
)
def _casimir_g_eigenvalue(run: CheckRun):
    return _eigenvalue_sweep(run, "g")


@_register(
    "casimir.xi_eigenvalue",
    "casimir",
    "pqm",
    "the symmetric-square element acts by its exact scalar, vanishing identically when m is zero",
)
def _casimir_xi_eigenvalue(run: CheckRun):
    return _eigenvalue_sweep(run, "xi")


# -- module suite ------------------------------------------------------------------


@_register(
    "module.parameter_window",
    "module",
    "pqm",
    "the enumerated lowest-layer types match the even-window rule exactly",
)
def _module_window(run: CheckRun):
    allowed_count = 0
    rejected_count = 0
    for sign in (1, -1):
        params = run.params(sign)
        space = params.space
        enumerated = {
            (kt.k, kt.l) for kt in ktype_enumeration(params, run.k_max, run.l_max)
        }
        for k in range(run.k_max + 1):
            for l in range(run.l_max + 1):
                kt = KType(k, l, run.p, run.q)
                d = kt.kappa_plus - kt.kappa_minus
                manual = (
                    d.denominator == 1
                    and (run.m + d) % 2 == 0
                    and run.m + d >= 0
                    and run.m - d >= 0
                )
                if manual != ((k, l) in enumerated):
                    return False, None, {"mismatch_at": [k, l]}
                h1, h2 = _first_harmonics(space, kt)
                try:
                    typical_element(params, h1, h2, run.depth())
                    built = True
                except ValueError:
                    built = False
                if built != manual:
                    return False, None, {"construction_mismatch_at": [k, l]}
                if manual:
                    allowed_count += 1
                else:
                    rejected_count += 1
    return True, None, {"allowed": allowed_count, "rejected": rejected_count}


@_register(
    "module.membership",
    "module",
    "pqm",
    "each sampled vector has the right weight, is annihilated, and is killed by the expected power",
)
def _module_membership(run: CheckRun):
    checked = 0
    min_validity = None
    for sign in (1, -1):
        params = run.params(sign)
        space = params.space
        D = run.depth()
        for kt in ktype_enumeration(params, run.k_max, run.l_max):
            h1, h2 = _first_harmonics(space, kt)
            f = typical_element(params, h1, h2, D)
            report = verify_membership(params, f)
            if not report.ok:
                return False, report.validity, {
                    "failed_sign": sign,
                    "failed_ktype": [kt.k, kt.l],
                    "weight_ok": report.weight_ok,
                    "annihilated_ok": report.annihilated_ok,
                    "power_ok": report.power_ok,
                }
            checked += 1
            v = report.validity
            min_validity = v if min_validity is None else min(min_validity, v)
    return True, min_validity, {"vectors_checked": checked}


@_register(
    "module.series_recurrence",
    "module",
    "pqm",
    "stored radial series coefficients satisfy the two-term recurrence, and poles are refused",
)
def _module_series(run: CheckRun):
    cutoff = 24
    kappas = set()
    for sign in (1, -1):
        params = run.params(sign)
        for kt in ktype_enumeration(params, run.k_max, run.l_max):
            kappas.add(kt.kappa_plus if sign == 1 else kt.kappa_minus)
    for kappa in sorted(kappas):
        series = psi_series(kappa, cutoff)
        if any(a != b for (a, b) in series.coeffs):
            return False, None, {"off_diagonal_terms": str(kappa)}
        coeffs = {a: c for (a, _), c in series.coeffs.items()}
        if coeffs[0] != ONE:
            return False, None, {"bad_constant_term": str(kappa)}
        for j in range(max(coeffs)):
            rhs = coeffs[j] * gr(Fraction(-1) / ((j + 1) * (kappa + j)))
            if coeffs[j + 1] != rhs:
                return False, None, {"recurrence_fails_at": j, "parameter": str(kappa)}
    poles_refused = 0
    for bad in (Fraction(0), Fraction(-2)):
        try:
            psi_series(bad, 4)
            return False, None, {"missing_pole_guard": str(bad)}
        except PsiPoleError:
            poles_refused += 1
    return True, None, {
        "parameters_checked": len(kappas),
        "poles_refused": poles_refused,
    }


@_register(
    "module.radial_uniformity",
    "module",
    "pqm",
    "every harmonic product at one lowest-layer type yields a vector passing membership",
)
def _module_radial_uniformity(run: CheckRun):
    checked = 0
    min_validity = None
    for sign in (1, -1):
        params = run.params(sign)
        space = params.space
        D = run.depth()
        kts = [
            kt
            for kt in ktype_enumeration(params, run.k_max, run.l_max)
            if kt.k + kt.l >= 1 and kt.multiplicity >= 2
        ]
        if not kts:
            continue
        kt = kts[0]
        bx = harmonic_basis(space, "x", kt.k).elements
        by = harmonic_basis(space, "y", kt.l).elements
        count = 0
        for h1 in bx:
            for h2 in by:
                if count >= 8:
                    break
                f = typical_element(params, h1, h2, D)
                report = verify_membership(params, f)
                if not report.ok:
                    return False, report.validity, {
                        "failed_sign": sign,
                        "ktype": [kt.k, kt.l],
                    }
                count += 1
                checked += 1
                v = report.validity
                min_validity = v if min_validity is None else min(min_validity, v)
            if count >= 8:
                break
    return True, min_validity, {"products_checked": checked}


@_register(
    "module.apply_linearity",
    "module",
    "pqm",
    "truncated application is linear and agrees with direct application on plain polynomials",
)
def _module_apply_linearity(run: CheckRun):
    params = run.params(1)
    space = params.space
    D = run.depth()
    kts = [
        kt
        for kt in ktype_enumeration(params, run.k_max, run.l_max)
        if kt.multiplicity >= 2
    ]
    if not kts:
        kts = ktype_enumeration(params, run.k_max, run.l_max)
    kt = kts[0]
    bx = harmonic_basis(space, "x", kt.k).elements
    by = harmonic_basis(space, "y", kt.l).elements
    f = typical_element(params, bx[0], by[0], D)
    g = typical_element(params, bx[-1], by[-1], D)
    c = gr(Fraction(3, 7))
    ops = [laplacian_op(space, "x"), rsq_op(space, "y"), sl2_triple(space)[1]]
    for A in ops:
        lhs = apply_operator(A, f + g.scale(c))
        rhs = apply_operator(A, f) + apply_operator(A, g).scale(c)
        if not lhs.agrees_with(rhs):
            return False, lhs.validity, {"failed": "linearity"}
    P = bx[0].mul(by[0])
    for A in ops:
        wrapped = apply_operator(A, TruncatedElement(P, D))
        if wrapped.expansion != A.apply(P):
            return False, wrapped.validity, {"failed": "direct_agreement"}
        if wrapped.validity != D - A.max_derivative_order():
            return False, wrapped.validity, {"failed": "validity_bookkeeping"}
    return True, D - 2, {"operators_checked": len(ops)}


# -- paction suite -----------------------------------------------------------------


@_register(
    "paction.four_term",
    "paction",
    "pqm",
    "the mixed generator action matches the closed four-layer expansion for all indices",
)
def _paction_four_term(run: CheckRun):
    checked = 0
    skipped = 0
    D = run.depth()
    for sign in (1, -1):
        params = run.params(sign)
        space = params.space
        for kt in ktype_enumeration(params, min(run.k_max, 2), min(run.l_max, 2)):
            if sign == 1 and kt.kappa_minus == 1:
                skipped += 1
                continue
            if sign == -1 and kt.kappa_plus == 1:
                skipped += 1
                continue
            h1, h2 = _first_harmonics(space, kt)
            for i in range(1, run.p + 1):
                for j in range(1, run.q + 1):
                    if not p_action_check(params, h1, h2, i, j, D):
                        return False, D - 2, {
                            "failed_sign": sign,
                            "failed_ktype": [kt.k, kt.l],
                            "failed_index": [i, j],
                        }
                    checked += 1
    return True, D - 2, {"identities_checked": checked, "degenerate_skipped": skipped}


@_register(
    "paction.degenerate_guard",
    "paction",
    "pqm",
    "series poles are refused, and valid parameters never reach a vanishing layer denominator",
)
def _paction_degenerate_guard(run: CheckRun):
    poles_refused = 0
    for bad in (Fraction(0), Fraction(-1), Fraction(-3)):
        try:
            psi_series(bad, 4)
            return False, None, {"missing_pole_guard": str(bad)}
        except PsiPoleError:
            poles_refused += 1
    scanned = 0
    for sign in (1, -1):
        params = run.params(sign)
        for kt in ktype_enumeration(params, 12, 12):
            kp, km = kt.kappa_plus, kt.kappa_minus
            layer_dens = (km - 1, kp) if sign == 1 else (kp - 1, km)
            if any(den == 0 for den in layer_dens):
                return False, None, {
                    "vanishing_denominator_at": [kt.k, kt.l, sign]
                }
            base = kp if sign == 1 else km
            for shifted in (base - 1, base, base + 1):
                if shifted.denominator == 1 and shifted <= 0:
                    return False, None, {
                        "series_pole_at": [kt.k, kt.l, sign]
                    }
            scanned += 1
    return True, None, {"poles_refused": poles_refused, "types_scanned": scanned}


# -- symsq suite -------------------------------------------------------------------


@_register(
    "symsq.q_transport",
    "symsq",
    "pq",
    "the split Casimir tensor transports between realizations and is invariant",
)
def _symsq_q_transport(run: CheckRun):
    sig = run.sig
    qx = build_Q(sig, "X")
    qm = build_Q(sig, "M")
    if transport(qx) != qm or transport_inv(qm) != qx:
        return False, None, {"failed": "transport"}
    gens = generators(*sig, "X")
    for g in gens:
        if not adjoint_action(LieElement.basis(g, sig), qx).is_zero():
            return False, None, {"failed_generator": list(g)}
    return True, None, {"generators_checked": len(gens)}


@_register(
    "symsq.gamma2_q",
    "symsq",
    "pq",
    "multiplying out the split Casimir tensor gives twice the Casimir element",
)
def _symsq_gamma2_q(run: CheckRun):
    return gamma2_q_identity(run.sig), None, {}


@_register(
    "symsq.gamma2_xi",
    "symsq",
    "pq",
    "multiplying out the distinguished tensor gives the signed Casimir combination",
)
def _symsq_gamma2_xi(run: CheckRun):
    return gamma2_xi_identity(run.sig), None, {}


@_register(
    "symsq.xi_transport",
    "symsq",
    "pq",
    "the distinguished tensor built from its definition equals the closed form",
)
def _symsq_xi_transport(run: CheckRun):
    sig = run.sig
    xi = build_Xi(sig)
    if xi != xi_closed_form(sig):
        return False, None, {"failed": "closed_form"}
    if transport_inv(transport(xi)) != xi:
        return False, None, {"failed": "roundtrip"}
    return True, None, {"terms": len(xi.coeffs)}


@_register(
    "symsq.s4_vanishing",
    "symsq",
    "pq",
    "every four-index alternating-symmetrized tensor vanishes identically",
)
def _symsq_s4(run: CheckRun):
    n = run.p + run.q
    count, all_zero = s4_vanishing(run.sig)
    if count != comb(n, 4):
        return False, None, {"count": count, "expected": comb(n, 4)}
    return all_zero, None, {"tensors_checked": count}


@_register(
    "symsq.decomposition",
    "symsq",
    "pq",
    "the symmetric square splits into four invariant pieces with the predicted dimensions",
)
def _symsq_decomposition(run: CheckRun):
    n = run.p + run.q
    rep = decompose_S2(n, certify=True)
    N = n * (n - 1) // 2
    total = N * (N + 1) // 2
    expected = (1, comb(n, 4), n * (n + 1) // 2 - 1)
    if rep.dims[:3] != expected or rep.total_dim != total:
        return False, None, {"dims": list(rep.dims), "total": rep.total_dim}
    ok = rep.all_ok()
    return ok, None, {
        "dims": list(rep.dims),
        "total": rep.total_dim,
        "images_checked": rep.images_checked,
        "certificates": dict(rep.certificates),
    }


# -- garfinkle suite ---------------------------------------------------------------


@_register(
    "garfinkle.obstruction",
    "garfinkle",
    "pqm",
    "a degree-two annihilator element with the required scalar exists exactly when m is zero",
)
def _garfinkle_obstruction(run: CheckRun):
    per_sign = {}
    min_validity = None
    for sign in (1, -1):
        params = run.params(sign)
        res = garfinkle_obstruction(params, D=run.solver_depth())
        if res.exists != (run.m == 0):
            return False, res.validity, {
                "failed_sign": sign,
                "exists": res.exists,
                "expected": run.m == 0,
            }
        per_sign[str(sign)] = res.to_dict()
        min_validity = (
            res.validity if min_validity is None else min(min_validity, res.validity)
        )
    return True, min_validity, {"per_sign": per_sign}


@_register(
    "garfinkle.theorem",
    "garfinkle",
    "pqm",
    "the annihilator criterion matches the prediction, failing only at the obstruction step",
)
def _garfinkle_theorem(run: CheckRun):
    per_sign = {}
    for sign in (1, -1):
        params = run.params(sign)
        rep = theorem_ingredients(params, D=run.max_degree)
        if not rep.matches_prediction():
            return False, None, {"failed_sign": sign, "report": rep.to_dict()}
        if run.m >= 1 and not (
            rep.casimir_step_ok and rep.s4_step_ok and not rep.obstruction.exists
        ):
            return False, None, {"failed_sign": sign, "report": rep.to_dict()}
        per_sign[str(sign)] = rep.to_dict()
    return True, None, {"per_sign": per_sign}


# -- execution ---------------------------------------------------------------------


@dataclass
class CheckResult:
    """One executed check with its outcome and JSON-friendly payload."""

    name: str
    params: Dict[str, int]
    status: str  # "pass" | "fail" | "error"
    validity: Optional[int]
    detail: Dict
    elapsed: float

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "status": self.status,
            "validity": self.validity,
            "detail": self.detail,
            "elapsed": round(self.elapsed, 6),
        }


def selected_checks(suites: Sequence[str]) -> List[CheckDef]:
    """Registry entries for the requested suites, sorted by name."""
    want = set(suites)
    if "all" in want:
        want = set(ALL_SUITES)
    unknown = want - set(ALL_SUITES)
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    return sorted(
        (cd for cd in REGISTRY.values() if cd.suite in want),
        key=lambda cd: cd.name,
    )


def plan_jobs(
    defs: Sequence[CheckDef],
    tuples: Sequence[Tuple[int, int, Optional[int]]],
    k_max: int,
    l_max: int,
    max_degree: Optional[int],
) -> List[Tuple[CheckDef, CheckRun, Dict[str, int]]]:
    """Expand each check over the parameter tuples according to its scope."""
    jobs: List[Tuple[CheckDef, CheckRun, Dict[str, int]]] = []
    for cd in defs:
        if cd.scope == "once":
            jobs.append((cd, CheckRun(None, None, None, max_degree, k_max, l_max), {}))
        elif cd.scope == "pq":
            seen = set()
            for p, q, _ in tuples:
                if (p, q) in seen:
                    continue
                seen.add((p, q))
                run = CheckRun(p, q, None, max_degree, k_max, l_max)
                jobs.append((cd, run, {"p": p, "q": q}))
        else:
            for p, q, m in tuples:
                run = CheckRun(p, q, m, max_degree, k_max, l_max)
                jobs.append((cd, run, {"p": p, "q": q, "m": m}))
    return jobs


def _execute_one(job: Tuple[CheckDef, CheckRun, Dict[str, int]]) -> CheckResult:
    cd, run, params = job
    start = perf_counter()
    try:
        ok, validity, detail = cd.fn(run)
        status = "pass" if ok else "fail"
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        status, validity = "error", None
        detail = {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(cd.name, params, status, validity, detail, perf_counter() - start)


def execute_jobs(
    jobs: Sequence[Tuple[CheckDef, CheckRun, Dict[str, int]]],
    threads: int = 1,
) -> List[CheckResult]:
    """Run the jobs (optionally on a thread pool) and sort deterministically."""
    if threads <= 1:
        results = [_execute_one(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_execute_one, jobs))
    results.sort(key=lambda r: (r.name, sorted(r.params.items())))
    return results
