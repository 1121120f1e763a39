"""Polynomial-coefficient differential operators in normal order.

An operator is a sum of terms  c * v^a * d^alpha  with every variable written
to the left of every derivative; a term is keyed by the packed pair
(monomial key, derivative multi-index key) in one shared VariableSpace.  The
normal-ordered representation is canonical, so operator equality is literal
dict equality.

Composition uses the two-multi-index Leibniz expansion: moving d^alpha across
v^b produces, for every contraction gamma <= min(alpha, b) componentwise,

    prod_i  C(alpha_i, gamma_i) * falling(b_i, gamma_i)
        * v^(a + b - gamma) * d^(alpha + beta - gamma).

Application to a polynomial evaluates d^alpha on each monomial as a falling
factorial and shifts exponents; both directions are exact.
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Dict, Iterable, List, Optional, Tuple

from .exact_arith import ONE, GaussianRational
from .poly import MAX_EXP, Coeff, Exponents, MultiPoly, ScalarLike, VariableSpace, _as_coeff

TermKey = Tuple[int, int]


def falling(n: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= n - t
    return out


class WeylOperator:
    """A normal-ordered differential operator; treat instances as immutable."""

    __slots__ = ("space", "_terms")

    def __init__(self, space: VariableSpace, terms: Dict[TermKey, Coeff]) -> None:
        self.space = space
        self._terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(space: VariableSpace) -> "WeylOperator":
        return WeylOperator(space, {})

    @staticmethod
    def identity(space: VariableSpace) -> "WeylOperator":
        return WeylOperator(space, {(0, 0): ONE})

    @staticmethod
    def term(
        space: VariableSpace,
        mono: Exponents,
        deriv: Exponents,
        coeff: ScalarLike = 1,
    ) -> "WeylOperator":
        c = _as_coeff(coeff)
        if not c:
            return WeylOperator.zero(space)
        return WeylOperator(space, {(space.pack(mono), space.pack(deriv)): c})

    @staticmethod
    def diff(space: VariableSpace, i: int) -> "WeylOperator":
        return WeylOperator(space, {(0, space.unit_key(i)): ONE})

    @staticmethod
    def var(space: VariableSpace, i: int) -> "WeylOperator":
        return WeylOperator(space, {(space.unit_key(i), 0): ONE})

    @staticmethod
    def from_poly(f: MultiPoly) -> "WeylOperator":
        """The multiplication operator by f."""
        return WeylOperator(f.space, {(k, 0): c for k, c in f._terms.items()})

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def max_derivative_order(self) -> int:
        """Largest total derivative degree |alpha| over the terms; 0 if none."""
        ds = self.space.deg_shift
        return max((ka >> ds for _, ka in self._terms), default=0)

    def degree_raise(self) -> int:
        """Largest |a| - |alpha| over the terms: how far application can raise degree."""
        ds = self.space.deg_shift
        return max(
            ((km >> ds) - (ka >> ds) for km, ka in self._terms),
            default=0,
        )

    # -- linear structure ----------------------------------------------------

    def _require_same_space(self, other: "WeylOperator") -> None:
        if self.space != other.space:
            raise ValueError("operators live in different variable spaces")

    def __add__(self, other: "WeylOperator") -> "WeylOperator":
        self._require_same_space(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            acc = out.get(k)
            acc = c if acc is None else acc + c
            if acc:
                out[k] = acc
            elif k in out:
                del out[k]
        return WeylOperator(self.space, out)

    def __sub__(self, other: "WeylOperator") -> "WeylOperator":
        return self + other.scale(-1)

    def __neg__(self) -> "WeylOperator":
        return self.scale(-1)

    def scale(self, c: ScalarLike) -> "WeylOperator":
        cc = _as_coeff(c)
        if not cc:
            return WeylOperator.zero(self.space)
        if cc == ONE:
            return self
        return WeylOperator(self.space, {k: v * cc for k, v in self._terms.items()})

    # -- composition ---------------------------------------------------------

    def compose(self, other: "WeylOperator") -> "WeylOperator":
        """The operator self after other, renormal-ordered exactly."""
        self._require_same_space(other)
        sp = self.space
        nv = sp.nvars
        unpack = sp.unpack
        b_items = [
            (unpack(km), unpack(ka), c) for (km, ka), c in other._terms.items()
        ]
        acc: Dict[TermKey, Coeff] = {}
        for (kma, kaa), ca in self._terms.items():
            a = unpack(kma)
            alpha = unpack(kaa)
            for b, beta, cb in b_items:
                idxs = [i for i in range(nv) if alpha[i] and b[i]]
                ranges = [range(min(alpha[i], b[i]) + 1) for i in idxs]
                base = ca * cb
                for gsel in itertools.product(*ranges):
                    mult = 1
                    for t, i in enumerate(idxs):
                        g = gsel[t]
                        if g:
                            mult *= comb(alpha[i], g) * falling(b[i], g)
                    new_m = [ai + bi for ai, bi in zip(a, b)]
                    new_d = [x + y for x, y in zip(alpha, beta)]
                    for t, i in enumerate(idxs):
                        g = gsel[t]
                        new_m[i] -= g
                        new_d[i] -= g
                    key = (sp.pack(tuple(new_m)), sp.pack(tuple(new_d)))
                    add = base.scale(mult)
                    cur = acc.get(key)
                    cur = add if cur is None else cur + add
                    if cur:
                        acc[key] = cur
                    elif key in acc:
                        del acc[key]
        return WeylOperator(sp, acc)

    def commutator(self, other: "WeylOperator") -> "WeylOperator":
        return self.compose(other) - other.compose(self)

    def power(self, k: int) -> "WeylOperator":
        if k < 0:
            raise ValueError("negative operator power")
        out = WeylOperator.identity(self.space)
        for _ in range(k):
            out = out.compose(self)
        return out

    # -- action on polynomials ----------------------------------------------

    def apply(self, f: MultiPoly) -> MultiPoly:
        if f.space != self.space:
            raise ValueError("operator and polynomial spaces differ")
        sp = self.space
        if not self._terms or f.is_zero():
            return MultiPoly.zero(sp)
        ds = sp.deg_shift
        max_m = max(km >> ds for km, _ in self._terms)
        if f.degree() + max_m > MAX_EXP:
            raise ValueError("application would exceed the degree cap")
        out: Dict[int, Coeff] = {}
        for (km, ka), c in self._terms.items():
            alist = [
                (sp.shift_of(i), sp.exponent_of(ka, i))
                for i in range(sp.nvars)
                if sp.exponent_of(ka, i)
            ]
            delta = km - ka
            for ke, ce in f._terms.items():
                mult = 1
                feasible = True
                for sh, al in alist:
                    e = (ke >> sh) & MAX_EXP
                    if e < al:
                        feasible = False
                        break
                    mult *= falling(e, al)
                if not feasible:
                    continue
                nk = ke + delta
                add = (c * ce).scale(mult)
                cur = out.get(nk)
                cur = add if cur is None else cur + add
                if cur:
                    out[nk] = cur
                elif nk in out:
                    del out[nk]
        return MultiPoly(sp, out)

    # -- comparison / display -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        sp = self.space
        parts = []
        for km, ka in sorted(self._terms, reverse=True):
            c = self._terms[(km, ka)]
            factors = []
            for i in range(sp.nvars):
                e = sp.exponent_of(km, i)
                if e == 1:
                    factors.append(sp.var_name(i))
                elif e > 1:
                    factors.append(f"{sp.var_name(i)}^{e}")
            for i in range(sp.nvars):
                e = sp.exponent_of(ka, i)
                if e == 1:
                    factors.append(f"D{sp.var_name(i)}")
                elif e > 1:
                    factors.append(f"D{sp.var_name(i)}^{e}")
            mono = "*".join(factors) if factors else "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"WeylOperator({self.space.p},{self.space.q}; {len(self._terms)} terms)"


# -- stock operators ----------------------------------------------------------


def euler_op(space: VariableSpace, block: str) -> WeylOperator:
    """sum_i v_i d/dv_i over the block."""
    terms = {
        (space.unit_key(i), space.unit_key(i)): ONE
        for i in space.block_range(block)
    }
    return WeylOperator(space, terms)


def laplacian_op(space: VariableSpace, block: str) -> WeylOperator:
    terms = {(0, 2 * space.unit_key(i)): ONE for i in space.block_range(block)}
    return WeylOperator(space, terms)


def rsq_op(space: VariableSpace, block: str) -> WeylOperator:
    terms = {(2 * space.unit_key(i), 0): ONE for i in space.block_range(block)}
    return WeylOperator(space, terms)
