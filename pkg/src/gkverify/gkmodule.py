"""Highest- and lowest-weight families inside the oscillator representation.

The commuting sl2 triple (H, X_raise, X_lower) splits polynomial-coefficient
series into finite-dimensional isotypic families.  For a non-negative integer
m the two families handled here are

* sign +1: elements with H f = m f, X_raise f = 0, X_lower^(m+1) f = 0;
* sign -1: elements with H f = -m f, X_lower f = 0, X_raise^(m+1) f = 0.

A typical element is  h1 * h2 * rho_y^mu * Psi_kappa(rho_x rho_y)  (sign +1,
with the roles of the blocks swapped for sign -1), where h1, h2 are block
harmonics of degrees k, l, the shifted weights are kappa_plus = k + p/2 and
kappa_minus = l + q/2, and Psi_alpha(u) = sum_j (-1)^j / (j! (alpha)_j) u^j.

All series work is truncated at an explicit total degree D, and every
comparison records its validity: the degree up to which stored coefficients
are exact.  Generic operator application uses the conservative rule
loss = max total derivative order; the staged Casimir pipelines use the exact
per-stage rule (a derivative of order r subtracts r, a multiplication by a
degree-g polynomial adds g), which the docstrings of the appliers spell out.

The obstruction solver at the bottom asks, over a finite sample of typical
elements f, whether some pair (Y, lambda) of a Lie-algebra element and a
scalar satisfies pi(Y) f + lambda f = lambda_kappa(f) f for every sample,
where lambda_kappa is the symmetric-square eigenvalue.  It returns either a
witness verified against every sampled equation or an exact infeasibility
certificate; infeasibility of the truncated subsystem is an exact conclusion
about the full system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_arith import I, ONE, ZERO, GaussianRational
from .liealg import Generator, generators, pi_generator
from .linalg import SparseRREF
from .poly import (
    MultiPoly,
    RadialSeries,
    TruncationError,
    VariableSpace,
    dagger,
    euler,
    harmonic_basis,
    harmonic_dim,
    laplacian,
    rsq,
)

__all__ = [
    "KType",
    "ModuleParams",
    "TruncatedElement",
    "PsiPoleError",
    "DegenerateDenominatorError",
    "psi_series",
    "typical_element",
    "apply_operator",
    "sl2_apply",
    "casimir_apply",
    "xi_apply",
    "verify_membership",
    "casimir_eigenvalue_check",
    "xi_eigenvalue_check",
    "p_action_check",
    "ktype_enumeration",
    "default_samples",
    "garfinkle_obstruction",
    "MembershipReport",
    "EigenvalueReport",
    "ObstructionResult",
]


class PsiPoleError(ValueError):
    """The series parameter hit a pole (a non-positive integer)."""


class DegenerateDenominatorError(ZeroDivisionError):
    """A coefficient denominator in the mixed-generator expansion vanished."""


@dataclass(frozen=True)
class KType:
    """Joint harmonic bidegree (k, l) with its shifted weights."""

    k: int
    l: int
    p: int
    q: int

    @property
    def kappa_plus(self) -> Fraction:
        return Fraction(2 * self.k + self.p, 2)

    @property
    def kappa_minus(self) -> Fraction:
        return Fraction(2 * self.l + self.q, 2)

    @property
    def delta(self) -> Fraction:
        return self.kappa_plus - self.kappa_minus

    @property
    def multiplicity(self) -> int:
        return harmonic_dim(self.p, self.k) * harmonic_dim(self.q, self.l)


@dataclass(frozen=True)
class ModuleParams:
    """Family parameters; sign +1 selects the H-eigenvalue +m family."""

    p: int
    q: int
    m: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.p < 2 or self.q < 2:
            raise ValueError("need p >= 2 and q >= 2")
        if (self.p + self.q) % 2 != 0:
            raise ValueError("need p + q even")
        if self.m < 0:
            raise ValueError("need m >= 0")
        if self.m + 3 > (self.p + self.q) // 2:
            raise ValueError("need m + 3 <= (p + q)/2")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def space(self) -> VariableSpace:
        return VariableSpace(self.p, self.q)

    def delta_window(self) -> List[int]:
        """Allowed values of kappa_plus - kappa_minus: -m, -m+2, ..., m."""
        return list(range(-self.m, self.m + 1, 2))

    def allows(self, kt: KType) -> bool:
        d = kt.delta
        return d.denominator == 1 and int(d) in self.delta_window()

    def mu(self, kt: KType) -> int:
        """Radial exponent of the typical element at this K-type."""
        if not self.allows(kt):
            raise ValueError(f"(k={kt.k}, l={kt.l}) is not a K-type of this family")
        if self.sign == 1:
            val = Fraction(self.m + kt.delta, 2)
        else:
            val = Fraction(self.m - kt.delta, 2)
        return int(val)

    # -- scalar spectra -----------------------------------------------------

    def casimir_scalar_g(self) -> Fraction:
        n = self.n
        return Fraction(self.m * (self.m + 2)) - Fraction(n * n, 4) + n

    def casimir_scalar_block(self, kt: KType, block: str) -> Fraction:
        if block == "x":
            kap, nblk = kt.kappa_plus, self.p
        else:
            kap, nblk = kt.kappa_minus, self.q
        return (kap - 1) ** 2 - Fraction((nblk - 2) ** 2, 4)

    def xi_scalar(self, kt: KType) -> Fraction:
        """Eigenvalue of the symmetric-square element at this K-type."""
        correction = Fraction(self.p - self.q, self.n) * self.m * (self.m + 2)
        return kt.delta * (kt.kappa_plus + kt.kappa_minus - 2) - correction


class TruncatedElement:
    """A polynomial truncation of a series, exact up to total degree `validity`."""

    __slots__ = ("expansion", "validity")

    def __init__(self, expansion: MultiPoly, validity: int) -> None:
        if validity < 0:
            raise TruncationError("validity became negative; increase D")
        self.expansion = expansion.truncate(validity)
        self.validity = validity

    @property
    def space(self) -> VariableSpace:
        return self.expansion.space

    def is_zero(self) -> bool:
        return self.expansion.is_zero()

    def __add__(self, other: "TruncatedElement") -> "TruncatedElement":
        v = min(self.validity, other.validity)
        return TruncatedElement(self.expansion + other.expansion, v)

    def __sub__(self, other: "TruncatedElement") -> "TruncatedElement":
        v = min(self.validity, other.validity)
        return TruncatedElement(self.expansion - other.expansion, v)

    def scale(self, c) -> "TruncatedElement":
        return TruncatedElement(self.expansion.scale(c), self.validity)

    def agrees_with(self, other: "TruncatedElement") -> bool:
        """Equality of the two stored series up to the smaller validity."""
        v = min(self.validity, other.validity)
        return self.expansion.truncate(v) == other.expansion.truncate(v)

    def __repr__(self) -> str:
        return (
            f"TruncatedElement({len(self.expansion)} terms, validity={self.validity})"
        )


def psi_series(alpha: Fraction, cutoff: int) -> RadialSeries:
    """The exact series sum_j (-1)^j / (j! (alpha)_j) (rho_x rho_y)^j.

    Coefficients satisfy c_0 = 1 and c_{j+1} = -c_j / ((j+1)(alpha+j)); the
    parameter must avoid the poles at non-positive integers.
    """
    alpha = Fraction(alpha)
    if alpha.denominator == 1 and alpha <= 0:
        raise PsiPoleError(f"series parameter {alpha} is a non-positive integer")
    coeffs: Dict[Tuple[int, int], GaussianRational] = {}
    c = Fraction(1)
    j = 0
    while 4 * j <= cutoff:
        coeffs[(j, j)] = GaussianRational(c)
        c = -c / ((j + 1) * (alpha + j))
        j += 1
    return RadialSeries(coeffs, cutoff)


def _require_block_harmonic(h: MultiPoly, block: str) -> int:
    other = "y" if block == "x" else "x"
    if h.block_homogeneous_degree(other) != 0:
        raise ValueError(f"factor must involve only the {block} block")
    deg = h.block_homogeneous_degree(block)
    if not laplacian(h, block).is_zero():
        raise ValueError(f"factor of degree {deg} is not {block}-harmonic")
    return deg


def _radial_layer(
    space: VariableSpace,
    kappa: Fraction,
    mu: int,
    radial_block: str,
    h1: MultiPoly,
    h2: MultiPoly,
    validity: int,
) -> TruncatedElement:
    """h1 * h2 * rho^mu * Psi_kappa, exact to `validity`."""
    base = (
        h1.block_homogeneous_degree("x")
        + h2.block_homogeneous_degree("y")
        + 2 * mu
    )
    if validity < base:
        return TruncatedElement(MultiPoly.zero(space), validity)
    series = psi_series(kappa, validity - base).shift_rho(radial_block, mu)
    radial = series.expand(space, validity)
    expansion = h1.mul(h2).mul(radial, max_degree=validity)
    return TruncatedElement(expansion, validity)


def typical_element(
    params: ModuleParams, h1: MultiPoly, h2: MultiPoly, D: int
) -> TruncatedElement:
    """h1 h2 rho^mu Psi_kappa truncated at total degree D.

    h1 must be a pure-x harmonic, h2 a pure-y harmonic; their degrees fix the
    K-type, which must lie in the family's window (both radial exponents
    non-negative integers).
    """
    k = _require_block_harmonic(h1, "x")
    l = _require_block_harmonic(h2, "y")
    kt = KType(k, l, params.p, params.q)
    mu = params.mu(kt)
    if params.sign == 1:
        kappa, radial_block = kt.kappa_plus, "y"
    else:
        kappa, radial_block = kt.kappa_minus, "x"
    base = k + l + 2 * mu
    if D < base:
        raise TruncationError(f"D={D} is below the base degree {base}")
    return _radial_layer(params.space, kappa, mu, radial_block, h1, h2, D)


# -- operator application -------------------------------------------------------


def apply_operator(op, f: TruncatedElement) -> TruncatedElement:
    """Generic application with the conservative validity rule.

    The new validity is the old one minus the largest total derivative order
    among the operator's terms; a negative result raises TruncationError.
    """
    loss = op.max_derivative_order()
    return TruncatedElement(op.apply(f.expansion), f.validity - loss)


def _stage_euler(f: TruncatedElement, block: str) -> TruncatedElement:
    return TruncatedElement(euler(f.expansion, block), f.validity)


def _stage_laplacian(f: TruncatedElement, block: str) -> TruncatedElement:
    return TruncatedElement(laplacian(f.expansion, block), f.validity - 2)


def _stage_rsq(f: TruncatedElement, block: str) -> TruncatedElement:
    out = f.expansion.mul(rsq(f.space, block))
    return TruncatedElement(out, f.validity + 2)


def sl2_apply(which: str, f: TruncatedElement) -> TruncatedElement:
    """Apply H, X_raise ("X+"), or X_lower ("X-") with exact stage bookkeeping.

    H is degree-preserving (validity unchanged); the raise/lower operators
    carry a Laplacian, so validity drops by 2.
    """
    p, q = f.space.p, f.space.q
    if which == "H":
        out = _stage_euler(f, "y") - _stage_euler(f, "x")
        return out + f.scale(Fraction(q - p, 2))
    if which == "X+":
        return (_stage_laplacian(f, "x") + _stage_rsq(f, "y")).scale(Fraction(-1, 2))
    if which == "X-":
        return (_stage_rsq(f, "x") + _stage_laplacian(f, "y")).scale(Fraction(1, 2))
    raise ValueError("which must be 'H', 'X+', or 'X-'")


def casimir_apply(which: str, f: TruncatedElement) -> TruncatedElement:
    """Apply a Casimir closed form as an exact stage pipeline.

    Block Casimirs preserve validity (every summand preserves degree); the
    full one loses 4 through its double-Laplacian summand.  The closed forms
    themselves are verified against the composed generator words elsewhere;
    nothing here depends on an unproved identity.
    """
    p, q = f.space.p, f.space.q
    if which in ("op", "oq"):
        block = "x" if which == "op" else "y"
        nblk = p if which == "op" else q
        e1 = _stage_euler(f, block)
        out = _stage_euler(e1, block) + e1.scale(nblk - 2)
        return out - _stage_rsq(_stage_laplacian(f, block), block)
    if which == "g":
        ex = _stage_euler(f, "x")
        ey = _stage_euler(f, "y")
        de = ex - ey
        out = _stage_euler(de, "x") - _stage_euler(de, "y")
        out = out + de.scale(p - q) - (ex + ey).scale(2)
        out = out - _stage_rsq(_stage_rsq(f, "x"), "y")
        out = out - _stage_rsq(_stage_laplacian(f, "x"), "x")
        out = out - _stage_rsq(_stage_laplacian(f, "y"), "y")
        out = out - _stage_laplacian(_stage_laplacian(f, "x"), "y")
        return out - f.scale(p * q)
    raise ValueError("which must be 'g', 'op', or 'oq'")


def xi_apply(f: TruncatedElement) -> TruncatedElement:
    """The symmetric-square operator as the Casimir combination.

    Xi-hat = Omega-hat_first - Omega-hat_second - (p-q)/(p+q) Omega-hat_full;
    the identity behind this combination is itself verified exactly in the
    symmetric-square suite.
    """
    p, q = f.space.p, f.space.q
    out = casimir_apply("op", f) - casimir_apply("oq", f)
    return out - casimir_apply("g", f).scale(Fraction(p - q, p + q))


# -- module checks ----------------------------------------------------------------


@dataclass
class MembershipReport:
    weight_ok: bool
    annihilated_ok: bool
    power_ok: bool
    validity: int

    @property
    def ok(self) -> bool:
        return self.weight_ok and self.annihilated_ok and self.power_ok


def verify_membership(params: ModuleParams, f: TruncatedElement) -> MembershipReport:
    """Check the three defining conditions of the family on f.

    Requires enough validity that the weakest check still sees degree m + 4;
    raises TruncationError otherwise.  The reported validity is that of the
    weakest check, the (m+1)-fold lowering.
    """
    m, sign = params.m, params.sign
    power_validity = f.validity - 2 * (m + 1)
    if min(f.validity - 2, power_validity) < m + 4:
        raise TruncationError(
            f"validity {f.validity} too small for the m={m} membership checks"
        )
    hf = sl2_apply("H", f)
    weight_ok = hf.agrees_with(f.scale(sign * m))
    killer = "X+" if sign == 1 else "X-"
    lower = "X-" if sign == 1 else "X+"
    annihilated_ok = sl2_apply(killer, f).is_zero()
    g = f
    for _ in range(m + 1):
        g = sl2_apply(lower, g)
    power_ok = g.is_zero()
    return MembershipReport(weight_ok, annihilated_ok, power_ok, power_validity)


@dataclass
class EigenvalueReport:
    name: str
    scalar: Fraction
    ok: bool
    validity: int


def casimir_eigenvalue_check(
    params: ModuleParams, f: TruncatedElement, kt: KType
) -> List[EigenvalueReport]:
    """Exact eigenvalue checks for the block Casimirs and the full one."""
    out = []
    for which, scalar in (
        ("op", params.casimir_scalar_block(kt, "x")),
        ("oq", params.casimir_scalar_block(kt, "y")),
        ("g", params.casimir_scalar_g()),
    ):
        applied = casimir_apply(which, f)
        ok = applied.agrees_with(f.scale(scalar))
        out.append(EigenvalueReport(which, scalar, ok, applied.validity))
    return out


def xi_eigenvalue_check(
    params: ModuleParams, f: TruncatedElement, kt: KType
) -> EigenvalueReport:
    scalar = params.xi_scalar(kt)
    applied = xi_apply(f)
    ok = applied.agrees_with(f.scale(scalar))
    return EigenvalueReport("xi", scalar, ok, applied.validity)


# -- mixed-generator action ---------------------------------------------------------


def p_action_check(
    params: ModuleParams,
    h1: MultiPoly,
    h2: MultiPoly,
    i: int,
    j: int,
    D: int,
) -> bool:
    """Verify the four-layer expansion of the mixed generator action.

    Compares sqrt(-1) pi(X_{i, p+j}) f, applied directly, against the closed
    four-term combination of shifted harmonic layers, exactly at validity
    D - 2 (1-based i <= p, j <= q).  The sqrt(-1) prefactor makes the left
    side a real operator, x_i y_j plus the paired second derivative, which is
    what the layer coefficients expand.  Raise/skip policy: a layer whose
    polynomial factor vanishes is skipped before its coefficient is formed; a
    vanishing coefficient denominator with surviving polynomial factors
    raises DegenerateDenominatorError (callers must exclude such K-types).
    """
    if not (1 <= i <= params.p and 1 <= j <= params.q):
        raise ValueError("need 1 <= i <= p and 1 <= j <= q")
    k = _require_block_harmonic(h1, "x")
    l = _require_block_harmonic(h2, "y")
    kt = KType(k, l, params.p, params.q)
    mu = params.mu(kt)
    f = typical_element(params, h1, h2, D)
    gen = Generator(i, params.p + j, "X")
    op = pi_generator(gen, params.space).scale(I)
    lhs = apply_operator(op, f)
    v = lhs.validity

    kp, km = kt.kappa_plus, kt.kappa_minus
    xvar, yvar = i - 1, params.p + j - 1
    dh1, dh2 = h1.diff(xvar), h2.diff(yvar)
    xh1, yh2 = h1.var_mul(xvar), h2.var_mul(yvar)

    # layers: (x-factor, needs x-dagger, y-factor, needs y-dagger,
    #          numerator, denominator, series parameter, radial exponent)
    if params.sign == 1:
        radial_block = "y"
        layers = [
            (dh1, False, dh2, False, km + mu - 1, km - 1, kp - 1, mu),
            (dh1, False, yh2, True, Fraction(mu), Fraction(1), kp - 1, mu - 1),
            (xh1, True, dh2, False, kp - km - mu, kp * (km - 1), kp + 1, mu + 1),
            (xh1, True, yh2, True, kp - mu - 1, kp, kp + 1, mu),
        ]
    else:
        radial_block = "x"
        layers = [
            (dh1, False, dh2, False, kp + mu - 1, kp - 1, km - 1, mu),
            (dh1, False, yh2, True, km - kp - mu, km * (kp - 1), km + 1, mu + 1),
            (xh1, True, dh2, False, Fraction(mu), Fraction(1), km - 1, mu - 1),
            (xh1, True, yh2, True, km - mu - 1, km, km + 1, mu),
        ]

    rhs = TruncatedElement(MultiPoly.zero(params.space), v)
    for fx, dag_x, fy, dag_y, num, den, kappa, layer_mu in layers:
        if fx.is_zero() or fy.is_zero():
            continue
        num, den = Fraction(num), Fraction(den)
        if den == 0:
            raise DegenerateDenominatorError(
                f"coefficient denominator vanished at K-type (k={k}, l={l})"
            )
        if num == 0:
            continue
        poly_x = dagger(fx, "x") if dag_x else fx
        poly_y = dagger(fy, "y") if dag_y else fy
        layer = _radial_layer(
            params.space, Fraction(kappa), layer_mu, radial_block, poly_x, poly_y, v
        )
        rhs = rhs + layer.scale(num / den)
    return lhs.agrees_with(rhs)


# -- enumeration ---------------------------------------------------------------------


def ktype_enumeration(params: ModuleParams, k_max: int, l_max: int) -> List[KType]:
    """All K-types of the family with k <= k_max, l <= l_max, ordered by (k, l)."""
    out = []
    for k in range(k_max + 1):
        for l in range(l_max + 1):
            kt = KType(k, l, params.p, params.q)
            if params.allows(kt):
                out.append(kt)
    return out


# -- the obstruction solver -----------------------------------------------------------


@dataclass
class ObstructionResult:
    """Outcome of the sampled solvability question for (Y, lambda)."""

    exists: bool
    witness: Optional[Tuple[Dict[Generator, GaussianRational], GaussianRational]]
    certificate: Optional[str]
    warning: Optional[str]
    validity: int
    n_samples: int
    n_rows: int
    xi_scalars: List[Fraction] = field(default_factory=list)

    def to_dict(self) -> Dict:
        witness = None
        if self.witness is not None:
            coeffs, lam = self.witness
            witness = {
                "generator_coefficients": {
                    f"({g.i},{g.j})": str(c) for g, c in sorted(coeffs.items()) if c
                },
                "lambda": str(lam),
            }
        return {
            "exists": self.exists,
            "witness": witness,
            "certificate": self.certificate,
            "warning": self.warning,
            "validity": self.validity,
            "n_samples": self.n_samples,
            "n_rows": self.n_rows,
            "xi_scalars": [str(s) for s in self.xi_scalars],
        }


def default_samples(
    params: ModuleParams,
) -> List[Tuple[KType, MultiPoly, MultiPoly]]:
    """The default sampling plan for the obstruction solver.

    One element per allowed K-type with k, l <= 2 (first harmonic basis
    element of each factor), plus the full harmonic product basis at the
    smallest such K-type with k + l >= 1.
    """
    space = params.space
    kts = ktype_enumeration(params, 2, 2)
    samples: List[Tuple[KType, MultiPoly, MultiPoly]] = []
    for kt in kts:
        hx = harmonic_basis(space, "x", kt.k).elements[0]
        hy = harmonic_basis(space, "y", kt.l).elements[0]
        samples.append((kt, hx, hy))
    enriched = [kt for kt in kts if kt.k + kt.l >= 1]
    if enriched:
        best = min(enriched, key=lambda kt: (kt.multiplicity, kt.k, kt.l))
        for hx in harmonic_basis(space, "x", best.k).elements:
            for hy in harmonic_basis(space, "y", best.l).elements:
                samples.append((best, hx, hy))
    return samples


def garfinkle_obstruction(
    params: ModuleParams,
    D: Optional[int] = None,
    samples: Optional[Sequence[Tuple[KType, MultiPoly, MultiPoly]]] = None,
) -> ObstructionResult:
    """Decide solvability of pi(Y) f + lambda f = lambda_kappa(f) f over samples.

    Builds the exact linear system in the generator coefficients of Y and the
    scalar lambda (one equation per monomial per sampled element, compared at
    validity D - 2).  Rows enter an incremental reduced echelon form in
    deterministic order until the rank stabilizes; the candidate solution is
    then verified against every equation in full, violated rows are fed back,
    and the loop ends with either a fully verified witness or an exact
    infeasibility certificate (a row reducing to 0 = 1).  Infeasibility of
    the truncated sampled system implies infeasibility of the full system.

    For m = 0 the eigenvalues lambda_kappa vanish on the whole window, so the
    zero witness is exact regardless of truncation.
    """
    if D is None:
        D = 2 * params.m + 8
    if samples is None:
        samples = default_samples(params)
    space = params.space
    gens = generators(params.p, params.q, "X")
    lam_col = len(gens)
    rhs_col = lam_col + 1

    warning = None
    xi_values = [params.xi_scalar(kt) for kt, _, _ in samples]
    if len(samples) < 2:
        warning = "single-sample system is degenerately solvable"
    elif params.m >= 1 and len(set(xi_values)) < 2:
        warning = "samples do not separate the eigenvalues; system degenerate"

    validity = D - 2
    prepared = []
    for kt, hx, hy in samples:
        f = typical_element(params, hx, hy, D)
        fpoly = f.expansion.truncate(validity)
        lam_k = params.xi_scalar(kt)
        images = [
            pi_generator(g, space).apply(f.expansion).truncate(validity)
            for g in gens
        ]
        keys = set(fpoly._terms)
        for img in images:
            keys.update(img._terms)
        prepared.append((lam_k, fpoly, images, sorted(keys)))

    rref = SparseRREF(pivot="min", rhs_col=rhs_col)
    n_rows = 0

    def build_row(lam_k, fpoly, images, key) -> Dict[int, GaussianRational]:
        row: Dict[int, GaussianRational] = {}
        for idx, img in enumerate(images):
            c = img._terms.get(key)
            if c:
                row[idx] = c
        fc = fpoly._terms.get(key)
        if fc:
            row[lam_col] = fc
            rhs = fc.scale(lam_k)
            if rhs:
                row[rhs_col] = -rhs
        return row

    def feed(row) -> Optional[str]:
        nonlocal n_rows
        if not row:
            return None
        n_rows += 1
        status, _ = rref.add_row(row)
        return status

    def infeasible(s_idx: int, key: int) -> ObstructionResult:
        kt = samples[s_idx][0]
        return ObstructionResult(
            exists=False,
            witness=None,
            certificate=(
                f"monomial {space.unpack(key)} of sample {s_idx} "
                f"(K-type k={kt.k}, l={kt.l}) reduces to 0 = 1"
            ),
            warning=warning,
            validity=validity,
            n_samples=len(samples),
            n_rows=n_rows,
            xi_scalars=xi_values,
        )

    # phase 1: seed the echelon form, early-stopping per sample once no new
    # rank has appeared for a while (the residual phase catches the rest)
    for s_idx, (lam_k, fpoly, images, keys) in enumerate(prepared):
        stable = 0
        for key in keys:
            status = feed(build_row(lam_k, fpoly, images, key))
            if status == "inconsistent":
                return infeasible(s_idx, key)
            if status == "pivot":
                stable = 0
            elif status == "dependent":
                stable += 1
                if stable >= 60:
                    break

    # phase 2: solve, verify against everything, feed back violations
    while True:
        sol = rref.particular_solution()
        lam = sol.get(lam_col, ZERO)
        coeffs = {g: sol.get(idx, ZERO) for idx, g in enumerate(gens)}
        violation = None
        for s_idx, (lam_k, fpoly, images, keys) in enumerate(prepared):
            residual = fpoly.scale(lam - GaussianRational(lam_k))
            for idx, img in enumerate(images):
                c = coeffs[gens[idx]]
                if c:
                    residual = residual + img.scale(c)
            if not residual.is_zero():
                violation = (s_idx, min(residual._terms))
                break
        if violation is None:
            return ObstructionResult(
                exists=True,
                witness=(coeffs, lam),
                certificate=None,
                warning=warning,
                validity=validity,
                n_samples=len(samples),
                n_rows=n_rows,
                xi_scalars=xi_values,
            )
        s_idx, key = violation
        lam_k, fpoly, images, _ = prepared[s_idx]
        status = feed(build_row(lam_k, fpoly, images, key))
        if status == "inconsistent":
            return infeasible(s_idx, key)
        if status != "pivot":
            raise AssertionError("violated row must change the echelon form")
