"""Exact automorphisms of the algebra in its Chevalley basis.

Matrices are dense lists of rows of Fractions; column j is the image of
basis vector j.  Building blocks: exponentials of nilpotent inner
derivations (always exact, the series terminates), reflection lifts
n_r = exp(ad e_r) exp(-ad e_-r) exp(ad e_r), and order-2 torus points
acting by (-1)^<root, coweight>.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .errors import InputError


def identity_matrix(dim):
    return [[Q(1) if i == j else Q(0) for j in range(dim)] for i in range(dim)]


def matrix_mul(A, B):
    n = len(A)
    out = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for k in range(n):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(n):
                    if Bk[j]:
                        row[j] += a * Bk[j]
    return out


def apply_matrix(A, x):
    """Image of a sparse element under a dense matrix."""
    out = {}
    for j, c in x.items():
        for i in range(len(A)):
            if A[i][j]:
                v = out.get(i, 0) + c * A[i][j]
                if v:
                    out[i] = v
                elif i in out:
                    del out[i]
    return out


def exp_ad(L, x, max_power=None):
    """exp(ad x) as a dense matrix; ad x must be nilpotent."""
    dim = L.dim
    cap = max_power or 2 * dim
    out = identity_matrix(dim)
    for j in range(dim):
        term = {j: Q(1)}
        k = 0
        while term:
            k += 1
            if k > cap:
                raise InputError("exp of a non-nilpotent derivation")
            term = {i: c / k for i, c in L.bracket(x, term).items()}
            for i, c in term.items():
                out[i][j] += c
    return out


def reflection_lift(L, pos_root_index):
    """The standard lift of a root reflection into the adjoint group."""
    npos = L.rs.num_positive
    e = {pos_root_index: Q(1)}
    f = {pos_root_index + npos: Q(-1)}
    return matrix_mul(matrix_mul(exp_ad(L, e), exp_ad(L, f)), exp_ad(L, e))


def parity_torus_matrix(L, coweight):
    """Order-2 torus point: e_gamma -> (-1)^<gamma, coweight> e_gamma."""
    dim = L.dim
    out = identity_matrix(dim)
    for idx in range(len(L.rs.roots)):
        root = L.rs.roots[idx]
        if sum(g * m for g, m in zip(root, coweight)) % 2:
            out[idx][idx] = Q(-1)
    return out


def is_automorphism(L, A, pairs=None):
    """Check A[x,y] = [Ax, Ay] on basis pairs (all pairs by default)."""
    dim = L.dim
    if pairs is None:
        pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    for i, j in pairs:
        lhs = apply_matrix(A, L.bracket_basis(i, j))
        rhs = L.bracket(apply_matrix(A, {i: Q(1)}), apply_matrix(A, {j: Q(1)}))
        if lhs != rhs:
            return False
    return True


def matrix_order(A, cap=24):
    """Multiplicative order of A, or None if it exceeds cap."""
    dim = len(A)
    ident = identity_matrix(dim)
    cur = A
    for k in range(1, cap + 1):
        if cur == ident:
            return k
        cur = matrix_mul(cur, A)
    return None
