"""Sparse exact linear algebra over the rationals.

Forward elimination is fraction-free: every row is scaled to coprime
integers, update rows are formed as (pivot*row - entry*pivot_row) and
reduced by their content, so entries stay integral until the single exact
division at back-substitution.  The pivot order is Markowitz fill-in
minimisation, cost (nnz_row - 1)*(nnz_col - 1), with (column, row) index
tie-breaks, which makes every result bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from math import gcd


@dataclass
class SparseSystem:
    """Rows of a linear system; rhs present means solve A x = rhs."""

    rows: list  # list of {col: Fraction}, no stored zeros
    ncols: int
    rhs: list = None  # dense list of Fractions, one per row

    def __post_init__(self):
        for r in self.rows:
            if any(not 0 <= c < self.ncols for c in r):
                raise ValueError("column index out of range")
        if self.rhs is not None and len(self.rhs) != len(self.rows):
            raise ValueError("rhs length does not match row count")


_RHS = -1  # internal pseudo-column for the right-hand side


def _integer_rows(system):
    """Copy rows into integer form (content-reduced), rhs folded in."""
    out = []
    for i, row in enumerate(system.rows):
        r = {c: Q(v) for c, v in row.items() if v}
        if system.rhs is not None and system.rhs[i]:
            r[_RHS] = -Q(system.rhs[i])
        if not r:
            out.append({})
            continue
        scale = 1
        for v in r.values():
            scale = scale * v.denominator // gcd(scale, v.denominator)
        ints = {c: int(v * scale) for c, v in r.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        out.append({c: v // g for c, v in ints.items()})
    return out


def _eliminate(rows, ncols):
    """Fraction-free elimination; returns (pivots in order, leftover rows).

    pivots is a list of (row_index, col) in elimination order; after the
    sweep each pivot row only involves its own pivot column, later pivot
    columns, free columns, and the rhs pseudo-column.
    """
    col_rows = {}
    for i, r in enumerate(rows):
        for c in r:
            if c != _RHS:
                col_rows.setdefault(c, set()).add(i)
    active = {i for i, r in enumerate(rows) if r}
    pivots = []
    while True:
        best = None
        for c in sorted(col_rows):
            crows = col_rows[c]
            if not crows:
                continue
            cn = len(crows)
            for i in sorted(crows):
                cost = (len(rows[i]) - (_RHS in rows[i]) - 1) * (cn - 1)
                cand = (cost, c, i)
                if best is None or cand < best:
                    best = cand
        if best is None:
            break
        _, pc, pr = best
        pivots.append((pr, pc))
        prow = rows[pr]
        pval = prow[pc]
        for i in list(col_rows[pc]):
            if i == pr:
                continue
            row = rows[i]
            mult = row[pc]
            new = {}
            for c in row.keys() | prow.keys():
                w = pval * row.get(c, 0) - mult * prow.get(c, 0)
                if w:
                    new[c] = w
            g = 0
            for v in new.values():
                g = gcd(g, v)
            if g > 1:
                new = {c: v // g for c, v in new.items()}
            for c in row:
                if c != _RHS and c != pc:
                    col_rows[c].discard(i)
            for c in new:
                if c != _RHS:
                    col_rows[c].add(i)
            rows[i] = new
            if not new:
                active.discard(i)
        # retire the pivot row and column
        for c in prow:
            if c != _RHS:
                col_rows[c].discard(pr)
        del col_rows[pc]
        active.discard(pr)
    return pivots, active


def _back_substitute(rows, pivots, assignment):
    """Fill pivot variables of `assignment` (a dict col -> Fraction)."""
    for pr, pc in reversed(pivots):
        row = rows[pr]
        s = Q(0)
        for c, v in row.items():
            if c == pc:
                continue
            s += v if c == _RHS else v * assignment.get(c, Q(0))
        assignment[pc] = -s / row[pc]


def solve_homogeneous(system):
    """Deterministic exact basis of the kernel, one vector per free column."""
    if system.rhs is not None:
        raise ValueError("homogeneous solve does not take a right-hand side")
    rows = _integer_rows(system)
    pivots, _ = _eliminate(rows, system.ncols)
    pivot_cols = {pc for _, pc in pivots}
    basis = []
    for f in range(system.ncols):
        if f in pivot_cols:
            continue
        assignment = {f: Q(1)}
        _back_substitute(rows, pivots, assignment)
        basis.append(tuple(assignment.get(c, Q(0)) for c in range(system.ncols)))
    return basis


def solve_affine(system):
    """One exact solution with all free variables pinned to 0, or None."""
    if system.rhs is None:
        raise ValueError("affine solve requires a right-hand side")
    rows = _integer_rows(system)
    pivots, leftover = _eliminate(rows, system.ncols)
    for i in leftover:
        if rows[i].get(_RHS):
            return None
    assignment = {}
    _back_substitute(rows, pivots, assignment)
    return tuple(assignment.get(c, Q(0)) for c in range(system.ncols))


def rank(system):
    rows = _integer_rows(system)
    pivots, _ = _eliminate(rows, system.ncols)
    return len(pivots)


class Subspace:
    """Incrementally built subspace of Q^n kept in reduced echelon form."""

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = []  # (lead column, dense list), sorted by lead

    @property
    def dim(self):
        return len(self.rows)

    def residual(self, vec):
        v = list(vec)
        for lead, b in self.rows:
            if v[lead]:
                c = v[lead]
                v = [x - c * y for x, y in zip(v, b)]
        return v

    def contains(self, vec):
        return not any(self.residual(vec))

    def add(self, vec):
        """Insert vec; returns True if it enlarged the space."""
        v = self.residual(vec)
        lead = next((i for i in range(self.ncols) if v[i]), None)
        if lead is None:
            return False
        c = v[lead]
        v = [x / c for x in v]
        for j, (l2, b) in enumerate(self.rows):
            if b[lead]:
                c = b[lead]
                self.rows[j] = (l2, [x - c * y for x, y in zip(b, v)])
        self.rows.append((lead, v))
        self.rows.sort(key=lambda t: t[0])
        return True

    def basis(self):
        return [tuple(b) for _, b in self.rows]


def rref(vectors, ncols):
    """Reduced row echelon basis of the span of dense vectors, deterministic."""
    basis = []  # list of (lead col, dense list)
    for vec in vectors:
        v = list(vec)
        for lead, b in basis:
            if v[lead]:
                c = v[lead]
                v = [x - c * y for x, y in zip(v, b)]
        lead = next((i for i in range(ncols) if v[i]), None)
        if lead is None:
            continue
        c = v[lead]
        v = [x / c for x in v]
        for j, (l2, b) in enumerate(basis):
            if b[lead]:
                c = b[lead]
                basis[j] = (l2, [x - c * y for x, y in zip(b, v)])
        basis.append((lead, v))
        basis.sort(key=lambda t: t[0])
    return [tuple(b) for _, b in basis]
