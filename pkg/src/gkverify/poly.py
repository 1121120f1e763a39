"""Sparse exact polynomials in x_1..x_p, y_1..y_q.

A monomial is an exponent vector of length p+q; internally it is packed into a
single int, seven bits per variable, with x_1 occupying the most significant
variable field and the total degree stored above all of them.  Packed keys
then compare exactly like the graded lexicographic order with
x_1 > ... > x_p > y_1 > ... > y_q, keys add under monomial multiplication,
and a degree bound is one shift and compare.  Exponents and total degrees are
capped at 127, far above anything this package constructs; multiplication
guards the cap explicitly.

A polynomial is a dict from packed keys to nonzero GaussianRational
coefficients.  MultiPoly instances are treated as immutable; every operation
returns a fresh object.

The module also carries the harmonic machinery used throughout: block
Laplacians and Euler operators, harmonic basis extraction as an exact
nullspace, the harmonic projection P - rho/(2d+n-4) * (Laplacian P), and
truncated radial power series in rho_x = r_x^2/2, rho_y = r_y^2/2.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .exact_arith import ONE, ZERO, GaussianRational, RationalLike
from .linalg import rref_nullspace

BITS = 7
MAX_EXP = (1 << BITS) - 1

Exponents = Tuple[int, ...]
Coeff = GaussianRational
ScalarLike = Union[int, Fraction, GaussianRational]


class NonHomogeneousError(ValueError):
    """Raised when an operation needs a block-homogeneous polynomial."""


class NonHarmonicError(ValueError):
    """Raised when an operation needs a block-harmonic polynomial."""


class DegenerateDaggerError(ZeroDivisionError):
    """Raised when the harmonic projection denominator 2d+n-4 vanishes."""


class TruncationError(ValueError):
    """Raised when a series cutoff is too small to support a comparison."""


def _as_coeff(c: ScalarLike) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    return GaussianRational(c)


@dataclass(frozen=True)
class VariableSpace:
    """The ambient variables x_1..x_p, y_1..y_q."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0 or self.p + self.q == 0:
            raise ValueError("need p, q >= 0 with p + q >= 1")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def nvars(self) -> int:
        return self.p + self.q

    @property
    def deg_shift(self) -> int:
        return BITS * self.nvars

    def shift_of(self, i: int) -> int:
        """Bit offset of variable i (0-based; x-block first)."""
        return BITS * (self.nvars - 1 - i)

    def unit_key(self, i: int) -> int:
        return (1 << self.deg_shift) + (1 << self.shift_of(i))

    def pack(self, exps: Exponents) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"expected {self.nvars} exponents, got {len(exps)}")
        key = 0
        total = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            total += e
            key |= e << self.shift_of(i)
        if total > MAX_EXP:
            raise ValueError(f"total degree {total} out of range")
        return key | (total << self.deg_shift)

    def unpack(self, key: int) -> Exponents:
        return tuple((key >> self.shift_of(i)) & MAX_EXP for i in range(self.nvars))

    def degree_of(self, key: int) -> int:
        return key >> self.deg_shift

    def exponent_of(self, key: int, i: int) -> int:
        return (key >> self.shift_of(i)) & MAX_EXP

    def block_range(self, block: str) -> range:
        if block == "x":
            return range(0, self.p)
        if block == "y":
            return range(self.p, self.nvars)
        raise ValueError("block must be 'x' or 'y'")

    def block_size(self, block: str) -> int:
        return self.p if block == "x" else self.q if block == "y" else 0

    def block_degree_of(self, key: int, block: str) -> int:
        return sum(self.exponent_of(key, i) for i in self.block_range(block))

    def var_name(self, i: int) -> str:
        if i < self.p:
            return f"x{i + 1}"
        return f"y{i - self.p + 1}"


class MultiPoly:
    """Sparse polynomial over Q(i); treat instances as immutable."""

    __slots__ = ("space", "_terms")

    def __init__(self, space: VariableSpace, terms: Dict[int, Coeff]) -> None:
        self.space = space
        self._terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(space: VariableSpace) -> "MultiPoly":
        return MultiPoly(space, {})

    @staticmethod
    def constant(space: VariableSpace, c: ScalarLike) -> "MultiPoly":
        cc = _as_coeff(c)
        return MultiPoly(space, {0: cc} if cc else {})

    @staticmethod
    def one(space: VariableSpace) -> "MultiPoly":
        return MultiPoly(space, {0: ONE})

    @staticmethod
    def variable(space: VariableSpace, i: int) -> "MultiPoly":
        return MultiPoly(space, {space.unit_key(i): ONE})

    @staticmethod
    def from_monomials(
        space: VariableSpace, entries: Iterable[Tuple[Exponents, ScalarLike]]
    ) -> "MultiPoly":
        terms: Dict[int, Coeff] = {}
        for exps, c in entries:
            cc = _as_coeff(c)
            if not cc:
                continue
            key = space.pack(exps)
            acc = terms.get(key)
            acc = cc if acc is None else acc + cc
            if acc:
                terms[key] = acc
            elif key in terms:
                del terms[key]
        return MultiPoly(space, terms)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(self._terms) >> self.space.deg_shift

    def coefficient(self, exps: Exponents) -> Coeff:
        return self._terms.get(self.space.pack(exps), ZERO)

    def monomials(self) -> Dict[Exponents, Coeff]:
        sp = self.space
        return {sp.unpack(k): c for k, c in self._terms.items()}

    def leading_key(self) -> int:
        """Packed key of the graded-lex largest monomial."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms)

    def block_homogeneous_degree(self, block: str) -> int:
        """Common degree in the block's variables; raises if mixed, 0 if zero poly."""
        sp = self.space
        degs = {sp.block_degree_of(k, block) for k in self._terms}
        if not degs:
            return 0
        if len(degs) > 1:
            raise NonHomogeneousError(
                f"polynomial is not homogeneous in block {block!r}: degrees {sorted(degs)}"
            )
        return degs.pop()

    def is_homogeneous(self) -> bool:
        degs = {k >> self.space.deg_shift for k in self._terms}
        return len(degs) <= 1

    # -- ring operations ---------------------------------------------------

    def _require_same_space(self, other: "MultiPoly") -> None:
        if self.space != other.space:
            raise ValueError("polynomials live in different variable spaces")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._require_same_space(other)
        if len(self._terms) < len(other._terms):
            small, big = self._terms, other._terms
        else:
            small, big = other._terms, self._terms
        out = dict(big)
        for k, c in small.items():
            acc = out.get(k)
            acc = c if acc is None else acc + c
            if acc:
                out[k] = acc
            elif k in out:
                del out[k]
        return MultiPoly(self.space, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + other.neg()

    def neg(self) -> "MultiPoly":
        return MultiPoly(self.space, {k: -c for k, c in self._terms.items()})

    def __neg__(self) -> "MultiPoly":
        return self.neg()

    def scale(self, c: ScalarLike) -> "MultiPoly":
        cc = _as_coeff(c)
        if not cc:
            return MultiPoly.zero(self.space)
        if cc == ONE:
            return self
        return MultiPoly(self.space, {k: v * cc for k, v in self._terms.items()})

    def mul(self, other: "MultiPoly", max_degree: Optional[int] = None) -> "MultiPoly":
        """Product, optionally discarding all terms above max_degree."""
        self._require_same_space(other)
        if not self._terms or not other._terms:
            return MultiPoly.zero(self.space)
        cap = max_degree if max_degree is not None else self.degree() + other.degree()
        if cap > MAX_EXP:
            raise ValueError(f"product degree {cap} exceeds encoding cap {MAX_EXP}")
        if len(self._terms) <= len(other._terms):
            outer, inner = self._terms, other._terms
        else:
            outer, inner = other._terms, self._terms
        ds = self.space.deg_shift
        inner_keys = sorted(inner)
        acc: Dict[int, Coeff] = {}
        for k1, c1 in outer.items():
            lim = (max_degree - (k1 >> ds)) if max_degree is not None else MAX_EXP
            if lim < 0:
                continue
            stop = bisect.bisect_left(inner_keys, (lim + 1) << ds)
            for idx in range(stop):
                k2 = inner_keys[idx]
                k = k1 + k2
                c = c1 * inner[k2]
                a = acc.get(k)
                a = c if a is None else a + c
                if a:
                    acc[k] = a
                elif k in acc:
                    del acc[k]
        return MultiPoly(self.space, acc)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        return self.mul(other)

    def truncate(self, max_degree: int) -> "MultiPoly":
        """Drop all terms of total degree above max_degree."""
        ds = self.space.deg_shift
        bound = (max_degree + 1) << ds
        return MultiPoly(
            self.space, {k: c for k, c in self._terms.items() if k < bound}
        )

    def diff(self, i: int) -> "MultiPoly":
        """Partial derivative in variable i (0-based)."""
        sp = self.space
        sh = sp.shift_of(i)
        unit = sp.unit_key(i)
        out: Dict[int, Coeff] = {}
        for k, c in self._terms.items():
            e = (k >> sh) & MAX_EXP
            if e:
                out[k - unit] = c.scale(e)
        return MultiPoly(sp, out)

    def var_mul(self, i: int, power: int = 1) -> "MultiPoly":
        """Multiply by the i-th variable raised to power."""
        if power == 0:
            return self
        sp = self.space
        if self._terms and self.degree() + power > MAX_EXP:
            raise ValueError("degree cap exceeded")
        shift_key = power * sp.unit_key(i)
        return MultiPoly(sp, {k + shift_key: c for k, c in self._terms.items()})

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        sp = self.space
        parts = []
        for k in sorted(self._terms, reverse=True):
            c = self._terms[k]
            factors = []
            for i in range(sp.nvars):
                e = sp.exponent_of(k, i)
                if e == 1:
                    factors.append(sp.var_name(i))
                elif e > 1:
                    factors.append(f"{sp.var_name(i)}^{e}")
            mono = "*".join(factors) if factors else "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.space.p},{self.space.q}; {len(self._terms)} terms)"


# -- differential / multiplication helpers ---------------------------------


def euler(f: MultiPoly, block: str) -> MultiPoly:
    """Euler operator sum_i v_i d/dv_i over the block; diagonal on monomials."""
    sp = f.space
    out: Dict[int, Coeff] = {}
    for k, c in f._terms.items():
        d = sp.block_degree_of(k, block)
        if d:
            out[k] = c.scale(d)
    return MultiPoly(sp, out)


def laplacian(f: MultiPoly, block: str) -> MultiPoly:
    """Sum of second partials over the block's variables."""
    sp = f.space
    out: Dict[int, Coeff] = {}
    for k, c in f._terms.items():
        for i in sp.block_range(block):
            e = (k >> sp.shift_of(i)) & MAX_EXP
            if e >= 2:
                nk = k - 2 * sp.unit_key(i)
                add = c.scale(e * (e - 1))
                a = out.get(nk)
                a = add if a is None else a + add
                if a:
                    out[nk] = a
                elif nk in out:
                    del out[nk]
    return MultiPoly(sp, out)


def rsq(space: VariableSpace, block: str) -> MultiPoly:
    """The squared radius r^2 of the block."""
    return MultiPoly(
        space, {2 * space.unit_key(i): ONE for i in space.block_range(block)}
    )


def rho(space: VariableSpace, block: str) -> MultiPoly:
    """rho = r^2 / 2 of the block."""
    half = GaussianRational(Fraction(1, 2))
    return MultiPoly(
        space, {2 * space.unit_key(i): half for i in space.block_range(block)}
    )


# -- harmonic machinery ------------------------------------------------------


def harmonic_dim(n: int, k: int) -> int:
    """Dimension of degree-k harmonics in n variables."""
    if k < 0:
        return 0
    first = comb(n + k - 1, n - 1) if n + k - 1 >= n - 1 else 0
    second = comb(n + k - 3, n - 1) if n + k - 3 >= n - 1 else 0
    return first - second


@dataclass(frozen=True)
class HarmonicBasis:
    """Exact basis of the degree-k harmonics of one block."""

    space: VariableSpace
    block: str
    degree: int
    elements: Tuple[MultiPoly, ...] = field(compare=False)

    def __len__(self) -> int:
        return len(self.elements)


def _block_monomial_keys(space: VariableSpace, block: str, k: int) -> List[int]:
    """Packed keys of all degree-k monomials in the block's variables."""
    idxs = list(space.block_range(block))
    keys: List[int] = []

    def rec(pos: int, remaining: int, acc: int) -> None:
        if pos == len(idxs) - 1:
            keys.append(acc + remaining * space.unit_key(idxs[pos]))
            return
        for e in range(remaining + 1):
            rec(pos + 1, remaining - e, acc + e * space.unit_key(idxs[pos]))

    if not idxs:
        return [0] if k == 0 else []
    rec(0, k, 0)
    return keys


def _graded_lex_reduce(rows: List[Dict[int, Coeff]]) -> List[Dict[int, Coeff]]:
    """Canonical reduced basis of the span: monic distinct leading keys, descending.

    Packed keys compare as graded-lex, so each round takes the row with the
    globally largest leading key, normalizes it, and eliminates that key
    everywhere.  Later rounds only touch strictly smaller keys, so every
    emitted row stays monic in its own leading monomial.
    """
    work = [dict(r) for r in rows if r]
    out: List[Dict[int, Coeff]] = []
    while work:
        best = max(range(len(work)), key=lambda i: max(work[i]))
        row = work.pop(best)
        pc = max(row)
        inv = row[pc].inverse()
        row = {c: v * inv for c, v in row.items()}
        for pool in (work, out):
            for other in pool:
                factor = other.get(pc)
                if factor:
                    del other[pc]
                    for c, v in row.items():
                        if c == pc:
                            continue
                        acc = other.get(c)
                        acc = -(factor * v) if acc is None else acc - factor * v
                        if acc:
                            other[c] = acc
                        elif c in other:
                            del other[c]
        work = [r for r in work if r]
        out.append(row)
    return out


@lru_cache(maxsize=None)
def harmonic_basis(space: VariableSpace, block: str, degree: int) -> HarmonicBasis:
    """All degree-`degree` harmonics of the block, as an exact nullspace basis.

    Elements are monic in the graded-lex leading monomial and ordered by that
    leading monomial, descending.  The basis size always equals the two-term
    binomial dimension count; that identity is asserted here.
    """
    nblk = space.block_size(block)
    if nblk == 0:
        raise ValueError(f"block {block!r} is empty")
    cols = _block_monomial_keys(space, block, degree)
    rows: Dict[int, Dict[int, Coeff]] = {}
    for src in cols:
        for i in space.block_range(block):
            e = space.exponent_of(src, i)
            if e >= 2:
                tgt = src - 2 * space.unit_key(i)
                rows.setdefault(tgt, {})[src] = GaussianRational(e * (e - 1))
    vectors = rref_nullspace(rows.values(), cols, pivot="max")
    expected = harmonic_dim(nblk, degree)
    if len(vectors) != expected:
        raise AssertionError(
            f"harmonic count mismatch: got {len(vectors)}, expected {expected}"
        )
    reduced = _graded_lex_reduce([dict(v) for v in vectors])
    if len(reduced) != expected:
        raise AssertionError("nullspace basis was not linearly independent")
    elements = tuple(MultiPoly(space, v) for v in reduced)
    return HarmonicBasis(space=space, block=block, degree=degree, elements=elements)


def dagger(P: MultiPoly, block: str) -> MultiPoly:
    """Harmonic projection P - rho/(2d + n - 4) * (Laplacian P).

    P must be homogeneous of some degree d in the block.  When Laplacian^2 P
    vanishes (the only case this package ever feeds in), the result is
    block-harmonic.  Raises DegenerateDaggerError when 2d + n - 4 == 0.
    """
    d = P.block_homogeneous_degree(block)
    nblk = P.space.block_size(block)
    den = 2 * d + nblk - 4
    lap = laplacian(P, block)
    if lap.is_zero():
        return P
    if den == 0:
        raise DegenerateDaggerError(
            f"projection denominator 2*{d}+{nblk}-4 vanishes"
        )
    return P - rho(P.space, block).mul(lap).scale(Fraction(1, den))


# -- truncated radial series -------------------------------------------------


class RadialSeries:
    """Truncated power series in rho_x and rho_y with exact coefficients.

    coeffs maps (a, b) to the coefficient of rho_x^a * rho_y^b; cutoff is the
    guaranteed-correct total polynomial degree: every term with
    2a + 2b <= cutoff is present and exact, nothing above is stored.
    """

    __slots__ = ("coeffs", "cutoff")

    def __init__(self, coeffs: Dict[Tuple[int, int], Coeff], cutoff: int) -> None:
        self.cutoff = cutoff
        self.coeffs = {
            ab: c for ab, c in coeffs.items() if c and 2 * (ab[0] + ab[1]) <= cutoff
        }

    @staticmethod
    def constant(c: ScalarLike, cutoff: int) -> "RadialSeries":
        return RadialSeries({(0, 0): _as_coeff(c)}, cutoff)

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, c: ScalarLike) -> "RadialSeries":
        cc = _as_coeff(c)
        return RadialSeries({ab: v * cc for ab, v in self.coeffs.items()}, self.cutoff)

    def __add__(self, other: "RadialSeries") -> "RadialSeries":
        cutoff = min(self.cutoff, other.cutoff)
        out = dict(self.coeffs)
        for ab, c in other.coeffs.items():
            acc = out.get(ab)
            acc = c if acc is None else acc + c
            if acc:
                out[ab] = acc
            elif ab in out:
                del out[ab]
        return RadialSeries(out, cutoff)

    def __sub__(self, other: "RadialSeries") -> "RadialSeries":
        return self + other.scale(-1)

    def shift_rho(self, block: str, j: int = 1) -> "RadialSeries":
        """Multiply by rho_block^j; the guaranteed degree grows by 2j."""
        if j < 0:
            raise ValueError("negative shift")
        if block == "x":
            out = {(a + j, b): c for (a, b), c in self.coeffs.items()}
        elif block == "y":
            out = {(a, b + j): c for (a, b), c in self.coeffs.items()}
        else:
            raise ValueError("block must be 'x' or 'y'")
        return RadialSeries(out, self.cutoff + 2 * j)

    def derivative(self, block: str) -> "RadialSeries":
        """d/d rho_block; the guaranteed degree drops by 2."""
        out: Dict[Tuple[int, int], Coeff] = {}
        for (a, b), c in self.coeffs.items():
            if block == "x" and a:
                out[(a - 1, b)] = c.scale(a)
            elif block == "y" and b:
                out[(a, b - 1)] = c.scale(b)
        return RadialSeries(out, self.cutoff - 2)

    def expand(
        self, space: VariableSpace, max_degree: Optional[int] = None
    ) -> MultiPoly:
        """The series as a polynomial, complete up to min(cutoff, max_degree)."""
        limit = self.cutoff if max_degree is None else min(self.cutoff, max_degree)
        rx = rho(space, "x")
        ry = rho(space, "y")
        pow_x: Dict[int, MultiPoly] = {0: MultiPoly.one(space)}
        pow_y: Dict[int, MultiPoly] = {0: MultiPoly.one(space)}

        def power(cache: Dict[int, MultiPoly], base: MultiPoly, k: int) -> MultiPoly:
            if k not in cache:
                cache[k] = power(cache, base, k - 1).mul(base)
            return cache[k]

        total = MultiPoly.zero(space)
        for (a, b), c in sorted(self.coeffs.items()):
            if 2 * (a + b) > limit:
                continue
            term = power(pow_x, rx, a).mul(power(pow_y, ry, b)).scale(c)
            total = total + term
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RadialSeries):
            return NotImplemented
        return self.cutoff == other.cutoff and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"RadialSeries({len(self.coeffs)} terms, cutoff={self.cutoff})"


def laplacian_product_rule_check(
    h: MultiPoly, phi: RadialSeries, block: str, D: int
) -> bool:
    """Exactly verify Laplacian(h*phi(rho)) == (2d+n)h phi' + 2h rho phi''.

    h must be block-homogeneous and block-harmonic (the identity genuinely
    needs harmonicity: otherwise a phi * Laplacian(h) term survives); phi must
    carry the block's rho only.  Both sides are compared as exact truncations
    at degree D-2.  Raises TruncationError when phi.cutoff < D.
    """
    d = h.block_homogeneous_degree(block)
    if not laplacian(h, block).is_zero():
        raise NonHarmonicError("product rule requires a block-harmonic factor")
    other_axis = 1 if block == "x" else 0
    if any(ab[other_axis] for ab in phi.coeffs):
        raise ValueError(f"series must involve rho_{block} only")
    if phi.cutoff < D:
        raise TruncationError(
            f"series cutoff {phi.cutoff} cannot support comparison at degree {D}"
        )
    space = h.space
    nblk = space.block_size(block)
    lhs = laplacian(h.mul(phi.expand(space, D), max_degree=D), block)
    d1 = phi.derivative(block)
    d2 = d1.derivative(block)
    rhs_series = d1.scale(2 * d + nblk) + d2.shift_rho(block, 1).scale(2)
    rhs = h.mul(rhs_series.expand(space, D), max_degree=D - 2)
    return lhs == rhs.truncate(D - 2)
