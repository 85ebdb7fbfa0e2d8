"""Nilpotent-orbit data: sl2-triple, grading, centralizer, and polarization.

Everything here is exact.  The semisimple element h is found inside the
fixed toral subalgebra spanned by the simple coroots by solving the linear
system [h,e] = 2e, [e,f] = h; the nilpotent e must be compatible with that
torus (a sum of root vectors whose ad-h eigenvalues come out integral),
which holds for all shipped orbit representatives.  The centralizer basis
is refined into simultaneous eigenvectors of h and of a maximal toral
subalgebra of the centralizer, and a minimal generating set is selected by
greedy Lie-closure saturation in (eigenvalue, index) order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from . import exactla
from .errors import InputError, InternalConsistencyError
from .rootdata import elem_add, elem_scale, killing_pairing


@dataclass
class NilpotentDatum:
    """A nilpotent e with its sl2-triple and all grading bookkeeping."""

    L: object
    e: dict
    h: dict
    f: dict
    grading: tuple  # ad-h eigenvalue per basis index
    te_basis: list  # toral centralizer basis, elements of the fixed torus
    chi: tuple  # kappa(e, b_k) per basis index

    def chi_of(self, x):
        return sum((c * self.chi[i] for i, c in x.items()), Q(0))

    def te_weight(self, idx):
        """Weight of basis vector idx under the toral centralizer basis."""
        return self._te_diag[idx]

    @property
    def _te_diag(self):
        diag = self.__dict__.get("_te_diag_cache")
        if diag is None:
            diag = tuple(tuple(w[k] for w in self._te_rows)
                         for k in range(self.L.dim))
            self.__dict__["_te_diag_cache"] = diag
        return diag

    @property
    def _te_rows(self):
        rows = self.__dict__.get("_te_rows_cache")
        if rows is None:
            rows = [_diagonal_action(self.L, t) for t in self.te_basis]
            self.__dict__["_te_rows_cache"] = rows
        return rows


@dataclass
class CentralizerBasis:
    """Weight basis z_1..z_r of the centralizer, generators first."""

    z: list  # sparse elements
    m_deg: list  # ad-h eigenvalues
    beta: list  # weight tuples over te_basis
    min_gen_count: int

    @property
    def r(self):
        return len(self.z)


@dataclass
class Polarization:
    """Choice of isotropic l in g(-1) and the induced m / p-bar split."""

    N: NilpotentDatum
    mode: str
    l: list
    l_perp: list
    l_prime: list
    m_basis: list
    m_gen_count: int
    chi_m: list
    pbar_basis: list
    n_deg: list  # ad-h eigenvalue per p-bar vector
    alpha: list  # te-weight tuple per p-bar vector
    pbar_root: list  # root coordinates when the vector is a single root vector

    @property
    def kazhdan_deg(self):
        return [n + 2 for n in self.n_deg]


def _diagonal_action(L, t):
    """Eigenvalue of ad t per basis index; t must be in the fixed torus."""
    diag = []
    for k in range(L.dim):
        res = L.bracket(t, {k: Q(1)})
        extra = {i: c for i, c in res.items() if i != k}
        if extra:
            raise InternalConsistencyError("toral element is not diagonal")
        diag.append(res.get(k, Q(0)))
    return diag


def _is_ad_nilpotent(L, e):
    cols = L.ad_matrix(e)
    steps = 0
    limit = 1
    while cols and limit <= 2 * L.dim:
        nxt = {}
        for j, col in cols.items():
            acc = {}
            for mid, c in col.items():
                for row, c2 in cols.get(mid, {}).items():
                    v = acc.get(row, 0) + c * c2
                    if v:
                        acc[row] = v
                    elif row in acc:
                        del acc[row]
            if acc:
                nxt[j] = acc
        cols = nxt
        limit *= 2
        steps += 1
    return not cols


def complete_sl2_triple(L, e):
    """Find (e, h, f) with h in the fixed torus, plus grading and t^e."""
    e = {i: Q(c) for i, c in e.items() if c}
    if not e:
        raise InputError("the nilpotent element must be nonzero")
    if not _is_ad_nilpotent(L, e):
        raise InputError("ad e is not nilpotent")
    dim, rk = L.dim, L.rs.rank
    h_cols = [L.bracket({L.h_index(i): Q(1)}, e) for i in range(rk)]
    e_cols = [L.bracket(e, {j: Q(1)}) for j in range(dim)]

    rows, rhs = [], []
    # [h, e] = 2e over the torus coordinates
    coords = sorted(set().union(*[c.keys() for c in h_cols], e.keys()))
    for r in coords:
        row = {i: h_cols[i][r] for i in range(rk) if h_cols[i].get(r)}
        rows.append(row)
        rhs.append(2 * e.get(r, Q(0)))
    # [e, f] = h couples the f coordinates back to the torus coordinates
    for r in range(dim):
        row = {rk + j: e_cols[j][r] for j in range(dim) if e_cols[j].get(r)}
        for i in range(rk):
            if L.h_index(i) == r:
                row[i] = row.get(i, Q(0)) - 1
        if row:
            rows.append(row)
            rhs.append(Q(0))
    sol = exactla.solve_affine(exactla.SparseSystem(rows, rk + dim, rhs=rhs))
    if sol is None:
        raise InputError("no sl2-triple with h in the fixed torus; "
                         "replace e by a torus-compatible representative")
    h = {L.h_index(i): sol[i] for i in range(rk) if sol[i]}

    grading = []
    for k in range(dim):
        res = L.bracket(h, {k: Q(1)})
        lam = res.get(k, Q(0))
        if lam.denominator != 1:
            raise InputError("ad h eigenvalues are not integral; "
                             "e is not compatible with the fixed torus")
        grading.append(int(lam))
    grading = tuple(grading)

    f_raw = {j: sol[rk + j] for j in range(dim) if sol[rk + j]}
    f = {j: c for j, c in f_raw.items() if grading[j] == -2}
    if L.bracket(e, f) != h or L.bracket(h, f) != elem_scale(f, Q(-2)):
        raise InternalConsistencyError("sl2 relations failed after projection")

    rows = []
    coords = sorted(set().union(*[c.keys() for c in h_cols]) or {0})
    for r in coords:
        row = {i: h_cols[i][r] for i in range(rk) if h_cols[i].get(r)}
        rows.append(row)
    te = exactla.solve_homogeneous(exactla.SparseSystem(rows, rk))
    te_basis = [{L.h_index(i): v[i] for i in range(rk) if v[i]} for v in te]

    chi = tuple(killing_pairing(L, e, {k: Q(1)}) for k in range(dim))
    return NilpotentDatum(L, e, h, f, grading, te_basis, chi)


def _lie_closure(L, span, gens):
    """Saturate span (a Subspace over g) under brackets of its basis."""
    queue = list(gens)
    while queue:
        x = queue.pop()
        for b in list(span.basis()):
            y = L.bracket(_to_sparse(x), _to_sparse(b))
            yv = _to_dense(y, L.dim)
            if span.add(yv):
                queue.append(yv)


def _to_dense(x, dim):
    return tuple(x.get(i, Q(0)) for i in range(dim))


def _to_sparse(v):
    return {i: c for i, c in enumerate(v) if c}


def centralizer(N):
    """Weight basis of g^e with a greedily chosen minimal generating set."""
    L = N.L
    dim = L.dim
    e_cols = [L.bracket(N.e, {j: Q(1)}) for j in range(dim)]
    rows = []
    for r in range(dim):
        row = {j: e_cols[j][r] for j in range(dim) if e_cols[j].get(r)}
        rows.append(row)
    kernel = exactla.solve_homogeneous(exactla.SparseSystem(rows, dim))

    # split into simultaneous eigenvectors of ad h and of t^e
    torals = [_diagonal_action(L, N.h)] + [list(w) for w in N._te_rows]
    blocks = [((), kernel)]
    for diag in torals:
        refined = []
        for key, vecs in blocks:
            parts = {}
            for v in vecs:
                for lam in sorted({diag[k] for k in range(dim) if v[k]}):
                    comp = tuple(v[k] if diag[k] == lam else Q(0)
                                 for k in range(dim))
                    parts.setdefault(lam, []).append(comp)
            for lam in sorted(parts):
                basis = exactla.rref(parts[lam], dim)
                if basis:
                    refined.append((key + (lam,), basis))
        blocks = refined
    blocks.sort(key=lambda kv: kv[0])

    candidates = []  # (m, beta, vector)
    for key, vecs in blocks:
        m, beta = key[0], key[1:]
        if m.denominator != 1:
            raise InternalConsistencyError("non-integral centralizer weight")
        for v in vecs:
            candidates.append((int(m), beta, v))

    chosen, rest = [], []
    span = exactla.Subspace(dim)
    for m, beta, v in candidates:
        if span.contains(v):
            rest.append((m, beta, v))
            continue
        chosen.append((m, beta, v))
        span.add(v)
        _lie_closure(L, span, [v])
    ordered = chosen + rest
    z = [_to_sparse(v) for _, _, v in ordered]
    m_deg = [m for m, _, _ in ordered]
    beta = [b for _, b, _ in ordered]
    if len(z) != len(kernel):
        raise InternalConsistencyError("weight refinement changed dimension")
    return CentralizerBasis(z, m_deg, beta, len(chosen))


def c_invariants(C, L):
    """dim of the centralizer modulo its derived subalgebra, plus the data.

    Returns (c_e, derived_subspace, quotient_rep_indices): the z indices
    whose classes form a basis of the abelianization.
    """
    dim = L.dim
    derived = exactla.Subspace(dim)
    for i in range(len(C.z)):
        for j in range(i + 1, len(C.z)):
            w = L.bracket(C.z[i], C.z[j])
            if w:
                derived.add(_to_dense(w, dim))
    c_e = C.r - derived.dim
    span = exactla.Subspace(dim)
    for b in derived.basis():
        span.add(b)
    reps = []
    for i, zi in enumerate(C.z):
        if span.add(_to_dense(zi, dim)):
            reps.append(i)
    if len(reps) != c_e:
        raise InternalConsistencyError("abelianization dimension mismatch")
    return c_e, derived, reps


def _symplectic_gram(N, idxs):
    L = N.L
    return [[N.chi_of(L.bracket({a: Q(1)}, {b: Q(1)})) for b in idxs]
            for a in idxs]


def choose_polarization(N, mode="zero"):
    """Pick l inside g(-1) and assemble m, n and p-bar bases.

    mode "zero" takes l = 0 (used when the component group acts); mode
    "lagrangian" builds a torus-stable Lagrangian by taking whole weight
    spaces for opposite nonzero weight pairs and greedily pairing inside
    the weight-zero block.
    """
    if mode not in ("zero", "lagrangian"):
        raise InputError(f"unknown polarization mode: {mode}")
    L = N.L
    dim = L.dim
    g1 = [k for k in range(dim) if N.grading[k] == -1]
    gram = _symplectic_gram(N, g1)
    if g1:
        rk = exactla.rank(exactla.SparseSystem(
            [{j: v for j, v in enumerate(row) if v} for row in gram], len(g1)))
        if rk != len(g1):
            raise InternalConsistencyError("symplectic form on g(-1) degenerate")

    unit = lambda k: {k: Q(1)}
    if mode == "zero" or not g1:
        l, l_prime = [], [unit(k) for k in g1]
        l_perp = [unit(k) for k in g1]
    else:
        by_weight = {}
        for k in g1:
            by_weight.setdefault(N.te_weight(k), []).append(k)
        l_idx, lp_idx = [], []
        zero_w = tuple([Q(0)] * len(N.te_basis))
        for w in sorted(by_weight):
            if w == zero_w:
                continue
            neg = tuple(-x for x in w)
            if neg not in by_weight:
                raise InternalConsistencyError("unpaired weight in g(-1)")
            if w > neg:
                l_idx += by_weight[w]
                lp_idx += by_weight[neg]
        l = [unit(k) for k in l_idx]
        l_prime = [unit(k) for k in lp_idx]
        if zero_w in by_weight:
            block = by_weight[zero_w]
            half = len(block) // 2
            pick = []
            for k in block:
                if all(N.chi_of(L.bracket(unit(k), v)) == 0 for v in l + pick):
                    pick.append(unit(k))
                    if len(pick) == half:
                        break
            if len(pick) < half:
                pick = _complete_lagrangian(N, block, l, pick, half)
            l += pick
            span = exactla.Subspace(dim)
            for v in pick:
                span.add(_to_dense(v, dim))
            for k in block:
                if span.add(_to_dense(unit(k), dim)):
                    l_prime.append(unit(k))
        # honest l-perp inside g(-1)
        rows = []
        for v in l:
            row = {}
            for j, k in enumerate(g1):
                val = N.chi_of(L.bracket(unit(k), v))
                if val:
                    row[j] = val
            rows.append(row)
        perp = exactla.solve_homogeneous(exactla.SparseSystem(rows, len(g1)))
        l_perp = [{g1[j]: v[j] for j in range(len(g1)) if v[j]} for v in perp]
        if len(l) * 2 != len(g1) or len(l_perp) != len(l):
            raise InternalConsistencyError("l is not Lagrangian")

    # m = l + everything in degree <= -2; greedy generators are found by
    # walking least-negative degrees first, which is minimal for graded
    # nilpotent algebras, and listed first in the basis order
    low = sorted((k for k in range(dim) if N.grading[k] <= -2),
                 key=lambda k: (-N.grading[k], k))
    m_raw = sorted(list(l) + [unit(k) for k in low],
                   key=lambda v: (-_degree_of(N, v), _min_idx(v)))
    span = exactla.Subspace(dim)
    gens, others = [], []
    for v in m_raw:
        if span.contains(_to_dense(v, dim)):
            others.append(v)
            continue
        gens.append(v)
        span.add(_to_dense(v, dim))
        _lie_closure(L, span, [_to_dense(v, dim)])
    m_basis = gens + others
    gen_count = len(gens)
    chi_m = [N.chi_of(v) for v in m_basis]

    # p-bar = l' + everything in degree >= 0, sorted by the monomial order
    high = [unit(k) for k in range(dim) if N.grading[k] >= 0]
    pbar_raw = list(l_prime) + high
    entries = []
    for i, v in enumerate(pbar_raw):
        n = _degree_of(N, v)
        a = _te_weight_of(N, v)
        root = None
        ks = sorted(v)
        if len(ks) == 1:
            root = L.root_of(ks[0])
            if root is None:
                root = tuple([0] * L.rs.rank)
        entries.append((n, a, i, v, root))
    entries.sort(key=lambda t: (t[0], t[1], t[2]))
    pbar_basis = [t[3] for t in entries]
    n_deg = [t[0] for t in entries]
    alpha = [t[1] for t in entries]
    pbar_root = [t[4] for t in entries]
    if any(n + 2 < 1 for n in n_deg):
        raise InternalConsistencyError("Kazhdan degree below 1 in p-bar")
    return Polarization(N, mode, l, l_perp, l_prime, m_basis, gen_count,
                        chi_m, pbar_basis, n_deg, alpha, pbar_root)


def _complete_lagrangian(N, block, l, pick, half):
    """Deterministic completion when greedy pairing stalls inside V_0."""
    L = N.L
    dim = L.dim
    pick = list(pick)
    while len(pick) < half:
        span = exactla.Subspace(dim)
        for v in l + pick:
            span.add(_to_dense(v, dim))
        rows = []
        for v in l + pick:
            row = {}
            for j, k in enumerate(block):
                val = N.chi_of(L.bracket({k: Q(1)}, v))
                if val:
                    row[j] = val
            rows.append(row)
        perp = exactla.solve_homogeneous(
            exactla.SparseSystem(rows, len(block)))
        found = False
        for v in perp:
            cand = {block[j]: v[j] for j in range(len(block)) if v[j]}
            if cand and not span.contains(_to_dense(cand, dim)):
                pick.append(cand)
                found = True
                break
        if not found:
            raise InternalConsistencyError("cannot complete Lagrangian")
    return pick


def _degree_of(N, v):
    degs = {N.grading[k] for k in v}
    if len(degs) != 1:
        raise InternalConsistencyError("basis vector not graded")
    return degs.pop()


def _te_weight_of(N, v):
    ws = {N.te_weight(k) for k in v}
    if len(ws) != 1:
        raise InternalConsistencyError("basis vector mixes torus weights")
    return ws.pop()


def _min_idx(v):
    return min(v) if v else -1
