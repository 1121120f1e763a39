"""The indefinite orthogonal Lie algebra, its enveloping algebra, and the
oscillator representation by differential operators.

Two generator flavors share one index scheme (1-based, canonical i < j):

* flavor "X": the signature-(p,q) basis, X_{i,j} = eps_j E_{i,j} - eps_i E_{j,i}
  with eps_k = +1 for k <= p and -1 otherwise; X_{j,i} = -X_{i,j}.
* flavor "M": the split/compact-style basis M_{i,j} = E_{i,j} - E_{j,i} of the
  same matrix space after conjugating the quadratic form away.

The transport map phi rescales X-coordinates into M-coordinates (factor 1 on
pairs inside the first block, -1 inside the second, sqrt(-1) across blocks)
and phi_inv undoes it.

Enveloping-algebra elements are coefficient dicts over generator words;
pbw_normal_form straightens words to non-decreasing generator order using the
exact structure constants, which is a confluent rewriting, so normal forms
are canonical and equality of enveloping elements is decidable.

The representation pi sends X_{i,j} to a first-order differential operator on
polynomials in x_1..x_p, y_1..y_q (rotation fields within a block, a
sqrt(-1)-weighted multiplication-plus-second-derivative pair across blocks)
and extends to words by operator composition.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .exact_arith import I, MINUS_I, ONE, ZERO, GaussianRational
from .poly import MultiPoly, ScalarLike, VariableSpace, _as_coeff
from .weyl import WeylOperator, euler_op, laplacian_op, rsq_op

Matrix = List[List[GaussianRational]]
Signature = Tuple[int, int]


class Generator(NamedTuple):
    """Canonical basis element with 1-based indices i < j."""

    i: int
    j: int
    flavor: str  # "X" or "M"


def epsilon(i: int, p: int) -> int:
    return 1 if i <= p else -1


def canonical(i: int, j: int, flavor: str) -> Tuple[Generator, int]:
    """Map arbitrary (i, j), i != j, to the stored generator and a sign."""
    if i == j:
        raise ValueError("generators need i != j")
    if i < j:
        return Generator(i, j, flavor), 1
    return Generator(j, i, flavor), -1


def generators(p: int, q: int, flavor: str = "X") -> List[Generator]:
    """All canonical generators, ordered lexicographically by (i, j)."""
    n = p + q
    return [Generator(i, j, flavor) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def same_block(g: Generator, p: int) -> bool:
    return (g.i <= p and g.j <= p) or (g.i > p and g.j > p)


def dual_sign(g: Generator, p: int) -> int:
    """X_{i,j}-dual = dual_sign * X_{i,j} under the half-trace form."""
    return -1 if same_block(g, p) else 1


# -- matrices ----------------------------------------------------------------


def generator_matrix(g: Generator, sig: Signature) -> Matrix:
    p, q = sig
    n = p + q
    m = [[ZERO] * n for _ in range(n)]
    i0, j0 = g.i - 1, g.j - 1
    if g.flavor == "M":
        m[i0][j0] = ONE
        m[j0][i0] = -ONE
    elif g.flavor == "X":
        m[i0][j0] = GaussianRational(epsilon(g.j, p))
        m[j0][i0] = GaussianRational(-epsilon(g.i, p))
    else:
        raise ValueError(f"unknown flavor {g.flavor!r}")
    return m


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        ai = a[i]
        row = out[i]
        for k in range(n):
            v = ai[k]
            if not v:
                continue
            bk = b[k]
            for j in range(n):
                w = bk[j]
                if w:
                    row[j] = row[j] + v * w
    return out


def _mat_sub(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return [[a[i][j] - b[i][j] for j in range(len(a))] for i in range(n)]


def _trace(a: Matrix) -> GaussianRational:
    t = ZERO
    for i in range(len(a)):
        t = t + a[i][i]
    return t


# -- Lie elements --------------------------------------------------------------


class LieElement:
    """A finite coefficient combination of canonical generators."""

    __slots__ = ("sig", "flavor", "coeffs")

    def __init__(
        self, sig: Signature, flavor: str, coeffs: Dict[Generator, GaussianRational]
    ) -> None:
        self.sig = sig
        self.flavor = flavor
        self.coeffs = {g: c for g, c in coeffs.items() if c}

    @staticmethod
    def zero(sig: Signature, flavor: str = "X") -> "LieElement":
        return LieElement(sig, flavor, {})

    @staticmethod
    def basis(g: Generator, sig: Signature) -> "LieElement":
        return LieElement(sig, g.flavor, {g: ONE})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            acc = out.get(g)
            acc = c if acc is None else acc + c
            if acc:
                out[g] = acc
            elif g in out:
                del out[g]
        return LieElement(self.sig, self.flavor, out)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + other.scale(-1)

    def scale(self, c: ScalarLike) -> "LieElement":
        cc = _as_coeff(c)
        return LieElement(self.sig, self.flavor, {g: v * cc for g, v in self.coeffs.items()})

    def __neg__(self) -> "LieElement":
        return self.scale(-1)

    def _check(self, other: "LieElement") -> None:
        if self.sig != other.sig or self.flavor != other.flavor:
            raise ValueError("mismatched signature or flavor")

    def to_matrix(self) -> Matrix:
        n = self.sig[0] + self.sig[1]
        m = [[ZERO] * n for _ in range(n)]
        for g, c in self.coeffs.items():
            gm = generator_matrix(g, self.sig)
            i0, j0 = g.i - 1, g.j - 1
            m[i0][j0] = m[i0][j0] + c * gm[i0][j0]
            m[j0][i0] = m[j0][i0] + c * gm[j0][i0]
        return m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return (
            self.sig == other.sig
            and self.flavor == other.flavor
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return f"LieElement({self.sig}, {self.flavor}, {len(self.coeffs)} terms)"


def lie_from_matrix(z: Matrix, sig: Signature, flavor: str) -> LieElement:
    """Read generator coordinates off a matrix known to lie in the algebra.

    The reconstruction is re-checked entry by entry, so feeding a matrix
    outside the span raises instead of silently projecting.
    """
    p, q = sig
    n = p + q
    coeffs: Dict[Generator, GaussianRational] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            entry = z[i - 1][j - 1]
            if flavor == "X":
                c = entry.scale(epsilon(j, p))
            else:
                c = entry
            if c:
                coeffs[Generator(i, j, flavor)] = c
    elt = LieElement(sig, flavor, coeffs)
    back = elt.to_matrix()
    if back != z:
        raise ValueError("matrix does not lie in the generator span")
    return elt


@lru_cache(maxsize=None)
def _bracket_table(
    sig: Signature, flavor: str
) -> Dict[Tuple[Generator, Generator], Dict[Generator, GaussianRational]]:
    """Structure constants for all ordered pairs of canonical generators."""
    gens = generators(sig[0], sig[1], flavor)
    mats = {g: generator_matrix(g, sig) for g in gens}
    table: Dict[Tuple[Generator, Generator], Dict[Generator, GaussianRational]] = {}
    for ga in gens:
        for gb in gens:
            z = _mat_sub(_mat_mul(mats[ga], mats[gb]), _mat_mul(mats[gb], mats[ga]))
            table[(ga, gb)] = dict(lie_from_matrix(z, sig, flavor).coeffs)
    return table


def bracket(a: LieElement, b: LieElement) -> LieElement:
    """The Lie bracket, via cached structure constants."""
    a._check(b)
    table = _bracket_table(a.sig, a.flavor)
    out: Dict[Generator, GaussianRational] = {}
    for ga, ca in a.coeffs.items():
        for gb, cb in b.coeffs.items():
            factor = ca * cb
            for g, sc in table[(ga, gb)].items():
                add = factor * sc
                acc = out.get(g)
                acc = add if acc is None else acc + add
                if acc:
                    out[g] = acc
                elif g in out:
                    del out[g]
    return LieElement(a.sig, a.flavor, out)


def form_B(a: LieElement, b: LieElement) -> GaussianRational:
    """The invariant form B(X, Y) = trace(XY) / 2."""
    a._check(b)
    t = _trace(_mat_mul(a.to_matrix(), b.to_matrix()))
    return t.scale(Fraction(1, 2))


# -- transport between flavors --------------------------------------------------


def _phi_factor(g: Generator, p: int) -> GaussianRational:
    if g.i <= p and g.j <= p:
        return ONE
    if g.i > p:
        return -ONE
    return I


def phi(a: LieElement) -> LieElement:
    """Coordinate transport from the X-flavor to the M-flavor."""
    if a.flavor != "X":
        raise ValueError("phi expects the X flavor")
    p = a.sig[0]
    out = {}
    for g, c in a.coeffs.items():
        out[Generator(g.i, g.j, "M")] = c * _phi_factor(g, p)
    return LieElement(a.sig, "M", out)


def phi_inv(a: LieElement) -> LieElement:
    """Inverse transport, M-flavor to X-flavor."""
    if a.flavor != "M":
        raise ValueError("phi_inv expects the M flavor")
    p = a.sig[0]
    out = {}
    for g, c in a.coeffs.items():
        gx = Generator(g.i, g.j, "X")
        out[gx] = c * _phi_factor(gx, p).inverse()
    return LieElement(a.sig, "X", out)


# -- enveloping algebra ----------------------------------------------------------


Word = Tuple[Generator, ...]


class EnvelopingElement:
    """Coefficient combination of generator words (universal algebra element)."""

    __slots__ = ("sig", "flavor", "words")

    def __init__(
        self, sig: Signature, flavor: str, words: Dict[Word, GaussianRational]
    ) -> None:
        self.sig = sig
        self.flavor = flavor
        self.words = {w: c for w, c in words.items() if c}

    @staticmethod
    def zero(sig: Signature, flavor: str = "X") -> "EnvelopingElement":
        return EnvelopingElement(sig, flavor, {})

    @staticmethod
    def one(sig: Signature, flavor: str = "X") -> "EnvelopingElement":
        return EnvelopingElement(sig, flavor, {(): ONE})

    @staticmethod
    def from_lie(a: LieElement) -> "EnvelopingElement":
        return EnvelopingElement(a.sig, a.flavor, {(g,): c for g, c in a.coeffs.items()})

    def _check(self, other: "EnvelopingElement") -> None:
        if self.sig != other.sig or self.flavor != other.flavor:
            raise ValueError("mismatched signature or flavor")

    def __add__(self, other: "EnvelopingElement") -> "EnvelopingElement":
        self._check(other)
        out = dict(self.words)
        for w, c in other.words.items():
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc:
                out[w] = acc
            elif w in out:
                del out[w]
        return EnvelopingElement(self.sig, self.flavor, out)

    def __sub__(self, other: "EnvelopingElement") -> "EnvelopingElement":
        return self + other.scale(-1)

    def scale(self, c: ScalarLike) -> "EnvelopingElement":
        cc = _as_coeff(c)
        return EnvelopingElement(
            self.sig, self.flavor, {w: v * cc for w, v in self.words.items()}
        )

    def __mul__(self, other: "EnvelopingElement") -> "EnvelopingElement":
        self._check(other)
        out: Dict[Word, GaussianRational] = {}
        for wa, ca in self.words.items():
            for wb, cb in other.words.items():
                w = wa + wb
                add = ca * cb
                acc = out.get(w)
                acc = add if acc is None else acc + add
                if acc:
                    out[w] = acc
                elif w in out:
                    del out[w]
        return EnvelopingElement(self.sig, self.flavor, out)

    def is_zero(self) -> bool:
        return not self.words

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnvelopingElement):
            return NotImplemented
        return (
            self.sig == other.sig
            and self.flavor == other.flavor
            and self.words == other.words
        )

    def __repr__(self) -> str:
        return f"EnvelopingElement({self.sig}, {self.flavor}, {len(self.words)} words)"


def pbw_normal_form(u: EnvelopingElement) -> EnvelopingElement:
    """Straighten every word to non-decreasing generator order.

    Rewrites ..ab.. with a > b into ..ba.. + ..[a,b].. until sorted; the
    result is the canonical basis expansion, independent of rewrite order.
    """
    table = _bracket_table(u.sig, u.flavor)
    out: Dict[Word, GaussianRational] = {}
    stack = list(u.words.items())
    while stack:
        word, c = stack.pop()
        if not c:
            continue
        pos = -1
        for t in range(len(word) - 1):
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


def degree2_symbol(
    u: EnvelopingElement,
) -> Dict[Tuple[Generator, Generator], GaussianRational]:
    """Symmetric degree-2 coefficients of the PBW normal form.

    A sorted word (a, b) contributes c/2 at (a, b) and (b, a) when a < b and
    c at (a, a); shorter words are discarded.  This is the symbol map that
    the symmetrization section is checked against.
    """
    nf = pbw_normal_form(u)
    out: Dict[Tuple[Generator, Generator], GaussianRational] = {}
    half = GaussianRational(Fraction(1, 2))

    def put(key: Tuple[Generator, Generator], val: GaussianRational) -> None:
        acc = out.get(key)
        acc = val if acc is None else acc + val
        if acc:
            out[key] = acc
        elif key in out:
            del out[key]

    for word, c in nf.words.items():
        if len(word) != 2:
            continue
        a, b = word
        if a == b:
            put((a, a), c)
        else:
            put((a, b), c * half)
            put((b, a), c * half)
    return out


def gamma2(tensor) -> EnvelopingElement:
    """Multiplication map from a symmetric degree-2 tensor into words.

    Accepts anything with .sig, .flavor and .coeffs mapping ordered generator
    pairs to coefficients; requires the coefficients to be symmetric.
    """
    coeffs = tensor.coeffs
    for (a, b), c in coeffs.items():
        if coeffs.get((b, a), ZERO) != c:
            raise ValueError("gamma2 requires a symmetric tensor")
    words: Dict[Word, GaussianRational] = {}
    for (a, b), c in coeffs.items():
        w = (a, b)
        acc = words.get(w)
        acc = c if acc is None else acc + c
        if acc:
            words[w] = acc
        elif w in words:
            del words[w]
    return EnvelopingElement(tensor.sig, tensor.flavor, words)


# -- Casimir elements -------------------------------------------------------------


def casimir(which: str, sig: Signature) -> EnvelopingElement:
    """Quadratic Casimir elements as enveloping-algebra words.

    which = "g":  sum over all canonical pairs of X_{i,j} X-dual_{i,j};
    which = "op": sum over pairs inside the first block of X_{i,j} X_{j,i};
    which = "oq": the same inside the second block.
    """
    p, q = sig
    n = p + q
    words: Dict[Word, GaussianRational] = {}
    if which == "g":
        for g in generators(p, q, "X"):
            words[(g, g)] = GaussianRational(dual_sign(g, p))
    elif which == "op":
        for g in generators(p, q, "X"):
            if g.j <= p:
                words[(g, g)] = GaussianRational(-1)
    elif which == "oq":
        for g in generators(p, q, "X"):
            if g.i > p:
                words[(g, g)] = GaussianRational(-1)
    else:
        raise ValueError("which must be 'g', 'op', or 'oq'")
    return EnvelopingElement(sig, "X", words)


# -- the oscillator representation --------------------------------------------------


@lru_cache(maxsize=None)
def pi_generator(g: Generator, space: VariableSpace) -> WeylOperator:
    """First-order operator image of a canonical X-flavor generator."""
    if g.flavor != "X":
        raise ValueError("pi is defined on the X flavor")
    p = space.p
    i0, j0 = g.i - 1, g.j - 1
    if g.j <= p:
        terms = {
            (space.unit_key(i0), space.unit_key(j0)): ONE,
            (space.unit_key(j0), space.unit_key(i0)): -ONE,
        }
    elif g.i > p:
        terms = {
            (space.unit_key(i0), space.unit_key(j0)): -ONE,
            (space.unit_key(j0), space.unit_key(i0)): ONE,
        }
    else:
        both = space.unit_key(i0) + space.unit_key(j0)
        terms = {(both, 0): MINUS_I, (0, both): MINUS_I}
    return WeylOperator(space, terms)


def pi_lie(a: LieElement) -> WeylOperator:
    space = VariableSpace(a.sig[0], a.sig[1])
    out = WeylOperator.zero(space)
    for g, c in a.coeffs.items():
        out = out + pi_generator(g, space).scale(c)
    return out


def pi_env(u: EnvelopingElement, space: Optional[VariableSpace] = None) -> WeylOperator:
    """Image of an enveloping element: words become operator compositions."""
    if u.flavor != "X":
        raise ValueError("pi is defined on the X flavor")
    if space is None:
        space = VariableSpace(u.sig[0], u.sig[1])
    total = WeylOperator.zero(space)
    for word, c in u.words.items():
        op = WeylOperator.identity(space)
        for g in word:
            op = op.compose(pi_generator(g, space))
        total = total + op.scale(c)
    return total


# -- the commuting sl2 and closed Casimir forms ---------------------------------------


def sl2_triple(space: VariableSpace) -> Tuple[WeylOperator, WeylOperator, WeylOperator]:
    """(H, X_raise, X_lower) commuting with every pi(generator).

    H = -E_x - p/2 + E_y + q/2,
    X_raise = -(Laplacian_x + r_y^2)/2,
    X_lower = (r_x^2 + Laplacian_y)/2.
    """
    p, q = space.p, space.q
    half = Fraction(1, 2)
    h = (
        euler_op(space, "y")
        - euler_op(space, "x")
        + WeylOperator.identity(space).scale(Fraction(q - p, 2))
    )
    x_raise = (laplacian_op(space, "x") + rsq_op(space, "y")).scale(-half)
    x_lower = (rsq_op(space, "x") + laplacian_op(space, "y")).scale(half)
    return h, x_raise, x_lower


def sl2_casimir_op(space: VariableSpace) -> WeylOperator:
    """H^2 + 2(X_raise X_lower + X_lower X_raise) as a composed operator."""
    h, xp, xm = sl2_triple(space)
    return h.compose(h) + (xp.compose(xm) + xm.compose(xp)).scale(2)


@lru_cache(maxsize=None)
def casimir_operator_closed(space: VariableSpace, which: str) -> WeylOperator:
    """Closed-form differential operators for the three Casimir images.

    which = "op": E_x^2 + (p-2) E_x - r_x^2 Laplacian_x
    which = "oq": E_y^2 + (q-2) E_y - r_y^2 Laplacian_y
    which = "g":  (E_x-E_y)^2 + (p-q)(E_x-E_y) - 2(E_x+E_y)
                  - (r_x^2 r_y^2 + r_x^2 Laplacian_x + r_y^2 Laplacian_y
                     + Laplacian_x Laplacian_y) - pq
    """
    p, q = space.p, space.q
    ex = euler_op(space, "x")
    ey = euler_op(space, "y")
    if which == "op":
        return ex.compose(ex) + ex.scale(p - 2) - rsq_op(space, "x").compose(
            laplacian_op(space, "x")
        )
    if which == "oq":
        return ey.compose(ey) + ey.scale(q - 2) - rsq_op(space, "y").compose(
            laplacian_op(space, "y")
        )
    if which == "g":
        diff_e = ex - ey
        out = diff_e.compose(diff_e) + diff_e.scale(p - q) - (ex + ey).scale(2)
        out = out - rsq_op(space, "x").compose(rsq_op(space, "y"))
        out = out - rsq_op(space, "x").compose(laplacian_op(space, "x"))
        out = out - rsq_op(space, "y").compose(laplacian_op(space, "y"))
        out = out - laplacian_op(space, "x").compose(laplacian_op(space, "y"))
        out = out - WeylOperator.identity(space).scale(p * q)
        return out
    raise ValueError("which must be 'g', 'op', or 'oq'")


@lru_cache(maxsize=None)
def pi_casimir(space: VariableSpace, which: str) -> WeylOperator:
    """pi of the Casimir words, composed exactly (no closed form used)."""
    return pi_env(casimir(which, (space.p, space.q)), space)
