"""Lifting centralizer vectors into the invariant subquotient and reading
off the defining equations of its variety of 1-dimensional representations.

The lift of z_i is z_i plus a correction tail supported on monomials of
matching torus weight and Kazhdan degree at most m_i + 2, with the
degree-(m_i+2) linear monomials excluded so the choice is canonical once
the free variables of the invariance system are pinned to zero.  The
commutator of two lifted generators is rewritten in the lifted PBW basis
by a strictly descending (Kazhdan degree, -total degree) matching loop:
the top stratum is matched against commutative products z^b of the same
bidegree and weight by a small exact linear solve, subtracted, and the
remainder recursed on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from . import exactla
from .errors import InputError, InternalConsistencyError
from .pbw import (UEElement, adjoint_action, normal_order_product, ue_from_chevalley,
                  ue_monomial, ue_one, ue_zero)


@dataclass
class ThetaGenerator:
    """Lifted generator: the centralizer vector plus its correction tail."""

    index: int
    z: dict
    tail: UEElement
    m_deg: int
    beta: tuple

    @property
    def full(self):
        return ue_from_chevalley(self.tail.context, self.z) + self.tail


@dataclass
class CommutatorTable:
    """Structure coefficients of lifted-generator commutators over J."""

    entries: dict  # (i, j) -> {b monomial over z indices: coefficient}
    J: list

    def row(self, i, j):
        return self.entries[i, j]


@dataclass
class EquationSystem:
    """Defining polynomials of the representation variety.

    Variables are the lifted-generator values theta_i for the indices with
    zero torus weight; every other coordinate is forced to vanish and has
    already been substituted away.
    """

    var_indices: list  # z indices with zero weight, in basis order
    polys: list  # dicts {exponent tuple over var_indices: coefficient}
    sources: list  # the (i, j) pair each polynomial came from
    J: list


@dataclass(frozen=True)
class TorusElement:
    """Finite-order torus automorphism acting by root(coweight) phases.

    Acts on a root vector e_gamma by the primitive order-th root of unity
    raised to <gamma, coweight>; exact integer arithmetic mod order.
    """

    order: int
    coweight: tuple

    def phase_of_root(self, root):
        return sum(g * m for g, m in zip(root, self.coweight)) % self.order


def torus_phase(te, P, x_index):
    root = P.pbar_root[x_index]
    if root is None:
        raise InputError("torus filtering needs weight-pure p-bar vectors")
    return te.phase_of_root(root)


def torus_phase_element(te, L, x):
    """Common phase of a Lie-algebra element; error if phases mix."""
    phases = set()
    for k in x:
        root = L.root_of(k)
        phases.add(0 if root is None else te.phase_of_root(root))
    if len(phases) != 1:
        raise InputError("element is not an eigenvector of the torus element")
    return phases.pop()


def ansatz_set(P, C, i, gamma_torus=()):
    """Exponent vectors allowed in the tail of the i-th lifted generator.

    Weight must match beta_i; Kazhdan degree is bounded by m_i + 2 with
    the top linear monomials excluded; optional finite-torus elements cut
    the set down to the eigencharacter of z_i.
    """
    m_i = C.m_deg[i]
    beta_i = C.beta[i]
    bound = m_i + 2
    kz = [n + 2 for n in P.n_deg]
    nx = len(kz)
    out = []

    def dfs(k, mono, kaz):
        if k == nx:
            if mono:
                out.append(tuple(mono))
            return
        dfs(k + 1, mono, kaz)
        e = 1
        while kaz + e * kz[k] <= bound:
            mono.append((k, e))
            dfs(k + 1, mono, kaz + e * kz[k])
            mono.pop()
            e += 1

    dfs(0, [], 0)

    def ok(mono):
        total = sum(e for _, e in mono)
        kaz = sum(e * kz[k] for k, e in mono)
        if kaz == bound and total == 1:
            return False
        w = tuple(sum(e * P.alpha[k][t] for k, e in mono)
                  for t in range(len(beta_i)))
        return w == tuple(beta_i)

    monos = sorted(m for m in out if ok(m))
    for te in gamma_torus:
        zp = torus_phase_element(te, P.N.L, C.z[i])
        monos = [m for m in monos
                 if sum(e * torus_phase(te, P, k) for k, e in m) % te.order == zp]
    return monos


def lift_theta(ctx, P, C, i, gamma_torus=()):
    """Solve the invariance system and return the canonical lift of z_i."""
    monos = ansatz_set(P, C, i, gamma_torus)
    z_cls = ue_from_chevalley(ctx, C.z[i])
    if any(k >= ctx.nx for k in ctx.decompose(C.z[i])):
        raise InternalConsistencyError("centralizer vector leaves p-bar")
    y_gens = P.m_basis[:P.m_gen_count]
    rows_by_key = {}
    rhs_by_key = {}
    for k, y in enumerate(y_gens):
        base = adjoint_action(y, z_cls)
        for mono, c in base.terms.items():
            rhs_by_key[(k, mono)] = rhs_by_key.get((k, mono), Q(0)) + c
        for j, a in enumerate(monos):
            img = adjoint_action(y, ue_monomial(ctx, a))
            for mono, c in img.terms.items():
                rows_by_key.setdefault((k, mono), {})[j] = c
    keys = sorted(set(rows_by_key) | set(rhs_by_key))
    rows = [rows_by_key.get(key, {}) for key in keys]
    rhs = [-rhs_by_key.get(key, Q(0)) for key in keys]
    sol = exactla.solve_affine(exactla.SparseSystem(rows, len(monos), rhs=rhs))
    if sol is None:
        raise InternalConsistencyError(
            f"invariance system for generator {i} is unsolvable")
    tail = ue_zero(ctx)
    for j, c in enumerate(sol):
        if c:
            tail = tail + ue_monomial(ctx, monos[j], c)
    theta = ThetaGenerator(i, C.z[i], tail, C.m_deg[i], tuple(C.beta[i]))
    full = theta.full
    for y in y_gens:
        if not adjoint_action(y, full).is_zero():
            raise InternalConsistencyError(
                f"lift of generator {i} is not invariant")
    return theta


def reduced_pair_set(C):
    """Pairs (i, j), i among the generators, with opposite torus weights."""
    p, r = C.min_gen_count, C.r
    return [(i, j) for i in range(p) for j in range(r)
            if tuple(C.beta[j]) == tuple(-x for x in C.beta[i])]


class ThetaBasis:
    """All lifted generators plus caches for their PBW monomials."""

    def __init__(self, ctx, C, thetas):
        self.ctx = ctx
        self.C = C
        self.thetas = thetas
        self._full = [t.full for t in thetas]
        self._pow_cache = {(): ue_one(ctx)}
        self._z_poly_cache = {}
        self._z_coords = [self._coords(z) for z in C.z]

    def _coords(self, z):
        d = self.ctx.decompose(z)
        if any(k >= self.ctx.nx for k in d):
            raise InternalConsistencyError("centralizer vector leaves p-bar")
        return d

    def theta_power(self, b):
        """The product of lifted generators with exponents b (left to right)."""
        cached = self._pow_cache.get(b)
        if cached is None:
            k, e = b[-1]
            prev = b[:-1] + ((k, e - 1),) if e > 1 else b[:-1]
            cached = normal_order_product(self.theta_power(prev), self._full[k])
            self._pow_cache[b] = cached
        return cached

    def z_power_poly(self, b):
        """Commutative expansion of z^b in the symmetric algebra of p-bar."""
        cached = self._z_poly_cache.get(b)
        if cached is None:
            if not b:
                cached = {(): Q(1)}
            else:
                k, e = b[-1]
                prev = b[:-1] + ((k, e - 1),) if e > 1 else b[:-1]
                base = self.z_power_poly(prev)
                cached = {}
                for mono, c in base.items():
                    for xk, xc in self._z_coords[k].items():
                        m2 = _comm_insert(mono, xk)
                        v = cached.get(m2, 0) + c * xc
                        if v:
                            cached[m2] = v
                        elif m2 in cached:
                            del cached[m2]
            self._z_poly_cache[b] = cached
        return cached

    def kazhdan_of_b(self, b):
        return sum(e * (self.C.m_deg[k] + 2) for k, e in b)

    def weight_of_b(self, b):
        nw = len(self.C.beta[0]) if self.C.beta else 0
        return tuple(sum(e * self.C.beta[k][t] for k, e in b)
                     for t in range(nw))

    def enumerate_b(self, total, kazhdan, weight):
        """All z-exponent monomials with the given bidegree and weight."""
        r = self.C.r
        kz = [m + 2 for m in self.C.m_deg]
        out = []

        def dfs(k, mono, tot, kaz):
            if k == r:
                if tot == total and kaz == kazhdan:
                    b = tuple(mono)
                    if self.weight_of_b(b) == weight:
                        out.append(b)
                return
            dfs(k + 1, mono, tot, kaz)
            e = 1
            while tot + e <= total and kaz + e * kz[k] <= kazhdan:
                mono.append((k, e))
                dfs(k + 1, mono, tot + e, kaz + e * kz[k])
                mono.pop()
                e += 1

        dfs(0, [], 0, 0)
        return sorted(out)


def _comm_insert(mono, idx):
    out = dict(mono)
    out[idx] = out.get(idx, 0) + 1
    return tuple(sorted(out.items()))


def to_theta_basis(TB, u, expected_weight=None):
    """Expand an invariant element over lifted-generator PBW monomials.

    Runs the strictly descending stratum-matching loop; raises if a top
    stratum cannot be matched, which would contradict the PBW theorem and
    therefore signals an internal bug.
    """
    ctx = TB.ctx
    coeffs = {}
    cur = u
    last = None
    while not cur.is_zero():
        profs = {m: ctx.profile(m) for m in cur.terms}
        if expected_weight is not None:
            for m, pr in profs.items():
                if pr.weight != expected_weight:
                    raise InternalConsistencyError(
                        "weight drift while expanding over the lifted basis")
        R = max(pr.kazhdan for pr in profs.values())
        S = min(pr.total for m, pr in profs.items() if pr.kazhdan == R)
        if last is not None and (R, -S) >= last:
            raise InternalConsistencyError("stratum descent is not strict")
        last = (R, -S)
        stratum = {m: c for m, c in cur.terms.items()
                   if profs[m].kazhdan == R and profs[m].total == S}
        gamma = ctx.profile(next(iter(stratum))).weight
        bs = TB.enumerate_b(S, R, gamma)
        if not bs:
            raise InternalConsistencyError(
                "no lifted monomials available for the top stratum")
        polys = [TB.z_power_poly(b) for b in bs]
        keys = sorted(set().union(*[set(p) for p in polys], stratum.keys()))
        rows = []
        rhs = []
        for m in keys:
            rows.append({j: p[m] for j, p in enumerate(polys) if p.get(m)})
            rhs.append(stratum.get(m, Q(0)))
        delta = exactla.solve_affine(
            exactla.SparseSystem(rows, len(bs), rhs=rhs))
        if delta is None:
            raise InternalConsistencyError(
                "top stratum is not a combination of lifted monomials")
        for b, d in zip(bs, delta):
            if d:
                coeffs[b] = coeffs.get(b, Q(0)) + d
                cur = cur - TB.theta_power(b).scale(d)
    return {b: c for b, c in coeffs.items() if c}


def commutator_in_pbw(TB, i, j):
    """Coefficient row of [lift_i, lift_j] over lifted PBW monomials."""
    ti, tj = TB.thetas[i].full, TB.thetas[j].full
    u = normal_order_product(ti, tj) - normal_order_product(tj, ti)
    wi = tuple(TB.C.beta[i])
    wj = tuple(TB.C.beta[j])
    expect = tuple(a + b for a, b in zip(wi, wj))
    row = to_theta_basis(TB, u, expected_weight=expect)
    bound = TB.C.m_deg[i] + TB.C.m_deg[j] + 2
    for b in row:
        if TB.kazhdan_of_b(b) > bound:
            raise InternalConsistencyError(
                f"commutator ({i},{j}) violates its Kazhdan support bound")
        if TB.weight_of_b(b) != expect:
            raise InternalConsistencyError(
                f"commutator ({i},{j}) violates its weight support bound")
    return row


def commutator_table(TB):
    """All rows for the reduced pair set, antisymmetry filled in."""
    J = reduced_pair_set(TB.C)
    entries = {}
    for (i, j) in J:
        if (i, j) in entries:
            continue
        if i == j:
            entries[i, j] = {}
            continue
        if (j, i) in entries:
            entries[i, j] = {b: -c for b, c in entries[j, i].items()}
            continue
        entries[i, j] = commutator_in_pbw(TB, i, j)
    return CommutatorTable(entries, J)


def extract_equations(CT, C):
    """Reduced defining system: substitute 0 for weight-nonzero coordinates."""
    zero_w = tuple([Q(0)] * (len(C.beta[0]) if C.beta else 0))
    var_indices = [i for i in range(C.r) if tuple(C.beta[i]) == zero_w]
    pos = {z: t for t, z in enumerate(var_indices)}
    polys, sources = [], []
    seen = set()
    seen_pairs = set()
    for (i, j) in CT.J:
        if frozenset((i, j)) in seen_pairs:
            continue
        seen_pairs.add(frozenset((i, j)))
        row = CT.entries[i, j]
        poly = {}
        for b, c in row.items():
            if all(k in pos for k, _ in b):
                exp = [0] * len(var_indices)
                for k, e in b:
                    exp[pos[k]] = e
                poly[tuple(exp)] = poly.get(tuple(exp), Q(0)) + c
        poly = {m: c for m, c in poly.items() if c}
        if not poly:
            continue
        key = _poly_key(poly)
        if key in seen:
            continue
        seen.add(key)
        polys.append(poly)
        sources.append((i, j))
    return EquationSystem(var_indices, polys, sources, list(CT.J))


def _poly_key(poly):
    # sign-normalized canonical form, so a row and its negation dedupe
    items = tuple(sorted(poly.items()))
    lead = items[0][1]
    return tuple((m, c / lead) for m, c in items)


def gamma_action_on_vars(TB, EQ, matrix):
    """Pullback of the weight-zero coordinates under an automorphism.

    Each lifted generator's image is expanded over the lifted PBW basis;
    coordinates with nonzero weight vanish on the variety and are
    substituted away.  Returns one polynomial per variable (theta_i pulls
    back to it).  Whenever the canonical lifts happen to be equivariant
    these are the degree-one forms of the induced matrix on the
    centralizer; in general lower-filtration corrections appear.
    """
    from .pbw import apply_automorphism

    ctx = TB.ctx
    vars_ = EQ.var_indices
    pos = {z: t for t, z in enumerate(vars_)}
    subs = []
    for i in vars_:
        img = apply_automorphism(ctx, matrix, TB.thetas[i].full)
        row = to_theta_basis(TB, img)
        poly = {}
        for b, c in row.items():
            if not all(k in pos for k, _ in b):
                continue  # vanishes on the variety
            exp = [0] * len(vars_)
            for k, e in b:
                exp[pos[k]] = e
            poly[tuple(exp)] = poly.get(tuple(exp), Q(0)) + c
        subs.append({m: c for m, c in poly.items() if c})
    return subs


def action_is_linear(subs):
    """True when every pullback polynomial is linear without constant."""
    return all(all(sum(m) == 1 for m in p) for p in subs)


def action_matrix(subs):
    """The matrix of a linear action (theta_i -> sum_j mat[i][j] theta_j)."""
    n = len(subs)
    mat = [[Q(0)] * n for _ in range(n)]
    for i, p in enumerate(subs):
        for m, c in p.items():
            j = next(t for t, e in enumerate(m) if e)
            mat[i][j] = c
    return mat


def jacobi_defect(TB, i, j, k):
    """[[t_i,t_j],t_k] + [[t_j,t_k],t_i] + [[t_k,t_i],t_j], exactly."""
    f = [TB.thetas[i].full, TB.thetas[j].full, TB.thetas[k].full]

    def br(a, b):
        return normal_order_product(a, b) - normal_order_product(b, a)

    return br(br(f[0], f[1]), f[2]) + br(br(f[1], f[2]), f[0]) \
        + br(br(f[2], f[0]), f[1])
