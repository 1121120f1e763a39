"""Exact sparse linear algebra over the Gaussian rationals.

Rows and vectors are dicts mapping integer column keys to nonzero
GaussianRational entries.  Column keys only need a total order (plain ints or
packed monomial keys); nothing here ever divides by anything unverified, and
all reductions are exact.

The central object is an incremental reduced row echelon form: rows arrive one
at a time, each is reduced against the current pivots, and a surviving row
contributes a new pivot (after back-elimination, rows stay fully reduced).
Inhomogeneous systems append the right-hand side as one extra column; a pivot
landing in that column is an exact infeasibility certificate.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from .exact_arith import ONE, GaussianRational

Row = Dict[int, GaussianRational]


class SparseRREF:
    """Incremental reduced row echelon form with exact arithmetic.

    pivot="min" takes the smallest column key of a reduced row as its pivot,
    pivot="max" the largest.  rhs_col, when given, marks the right-hand-side
    column of an inhomogeneous system: a row reducing to support {rhs_col}
    is reported as inconsistent instead of becoming a pivot.
    """

    def __init__(self, pivot: str = "min", rhs_col: Optional[int] = None) -> None:
        if pivot not in ("min", "max"):
            raise ValueError("pivot must be 'min' or 'max'")
        self._prefer_min = pivot == "min"
        self.rhs_col = rhs_col
        self.rows: Dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: Row) -> Row:
        """Return a copy of row reduced against every current pivot."""
        return self._reduce_for_insert(row)

    def add_row(self, row: Row) -> Tuple[str, Optional[int]]:
        """Reduce row and absorb it.

        Returns ("dependent", None), ("pivot", col), or
        ("inconsistent", rhs_col).
        """
        red = self._reduce_for_insert(row)
        if not red:
            return ("dependent", None)
        cols = red.keys()
        if self.rhs_col is not None:
            unknown = [c for c in cols if c != self.rhs_col]
            if not unknown:
                return ("inconsistent", self.rhs_col)
            pc = min(unknown) if self._prefer_min else max(unknown)
        else:
            pc = min(cols) if self._prefer_min else max(cols)
        inv = red[pc].inverse()
        norm = {c: v * inv for c, v in red.items()}
        norm[pc] = ONE
        # back-eliminate the new pivot column from existing rows
        for opc, orow in self.rows.items():
            if pc in orow:
                factor = orow.pop(pc)
                for c, v in norm.items():
                    if c == pc:
                        continue
                    acc = orow.get(c)
                    acc = -factor * v if acc is None else acc - factor * v
                    if acc:
                        orow[c] = acc
                    elif c in orow:
                        del orow[c]
        self.rows[pc] = norm
        return ("pivot", pc)

    def _reduce_for_insert(self, row: Row) -> Row:
        out = {}
        pending = dict(row)
        # single pass suffices: pivot rows are fully reduced, so subtracting
        # one never reintroduces another pivot column
        for col, val in pending.items():
            if not val:
                continue
            out[col] = val
        for col in list(out.keys()):
            piv = self.rows.get(col)
            if piv is None:
                continue
            factor = out.pop(col)
            for c, v in piv.items():
                if c == col:
                    continue
                acc = out.get(c)
                acc = -(factor * v) if acc is None else acc - factor * v
                if acc:
                    out[c] = acc
                elif c in out:
                    del out[c]
        return out

    def particular_solution(self) -> Row:
        """Free unknowns 0; requires rhs_col; raises if any row is pure RHS."""
        if self.rhs_col is None:
            raise ValueError("no right-hand side attached")
        sol: Row = {}
        for pc, row in self.rows.items():
            if pc == self.rhs_col:
                raise ValueError("system is inconsistent")
            c = row.get(self.rhs_col)
            if c:
                sol[pc] = -c
        return sol

    def residual(self, row: Row) -> Row:
        """Reduce a row without inserting (consistency probe)."""
        return self._reduce_for_insert(row)


def rref_nullspace(
    rows: Iterable[Row],
    columns: Iterable[int],
    pivot: str = "max",
) -> List[Row]:
    """Exact nullspace basis of the linear map given by rows over columns.

    Each returned vector is a dict over column keys, normalized so that its
    graded-largest support key has coefficient one; vectors are ordered by
    that leading key, descending.  The count always equals
    len(columns) - rank(rows).
    """
    rref = SparseRREF(pivot=pivot)
    for row in rows:
        rref.add_row(row)
    pivot_cols = rref.rows.keys()
    free_cols = [c for c in columns if c not in pivot_cols]
    basis: List[Row] = []
    for f in free_cols:
        vec: Row = {f: ONE}
        for pc, row in rref.rows.items():
            v = row.get(f)
            if v:
                vec[pc] = -v
        lead = max(vec.keys())
        inv = vec[lead].inverse()
        if not (inv == ONE):
            vec = {c: val * inv for c, val in vec.items()}
        basis.append(vec)
    basis.sort(key=lambda v: max(v.keys()), reverse=True)
    return basis


def solve_combination(
    vectors: List[Row],
    target: Row,
) -> Optional[List[GaussianRational]]:
    """Coefficients c with sum(c_i * vectors[i]) == target, or None.

    Columns of the assembled system are vector indices; rows are coordinate
    constraints.  Free coefficients are set to zero.
    """
    from .exact_arith import ZERO

    rhs_col = len(vectors)
    coords = set(target.keys())
    for v in vectors:
        coords.update(v.keys())
    rref = SparseRREF(pivot="min", rhs_col=rhs_col)
    for coord in sorted(coords):
        row: Row = {}
        for idx, v in enumerate(vectors):
            val = v.get(coord)
            if val:
                row[idx] = val
        t = target.get(coord)
        if t:
            row[rhs_col] = -t
        if row:
            status, _ = rref.add_row(row)
            if status == "inconsistent":
                return None
    sol = rref.particular_solution()
    return [sol.get(i, ZERO) for i in range(len(vectors))]


def dot(u: Row, v: Row) -> GaussianRational:
    from .exact_arith import ZERO

    if len(u) > len(v):
        u, v = v, u
    acc = ZERO
    for c, val in u.items():
        w = v.get(c)
        if w:
            acc = acc + val * w
    return acc
