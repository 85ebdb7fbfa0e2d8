"""Simple Lie algebras over the rationals from root-system data.

A root system is built purely combinatorially from its Cartan matrix: the
positive roots are grown height by height using root strings, and the full
list is frozen in a deterministic order (positive roots sorted by
(height, lex), then their negatives in the same order).  On top of that we
construct a Chevalley basis {e_r : r a root} + {h_1..h_rank} whose integer
structure constants are fixed by the extraspecial-pair sign convention
applied to the deterministic root order, so rebuilding the same algebra
always yields bit-identical tables.

Elements are sparse dicts {basis index: Fraction}.  The invariant bilinear
form is the Killing form, computed as the trace form of the adjoint action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from .errors import InputError

Root = tuple  # integer coordinates in the simple-root basis
Element = dict  # basis index -> Fraction, zero entries never stored

_ROOT_COUNTS = {"A": lambda n: n * (n + 1), "B": lambda n: 2 * n * n,
                "C": lambda n: 2 * n * n, "D": lambda n: 2 * n * (n - 1),
                "E": {6: 72, 7: 126, 8: 240}, "F": {4: 48}, "G": {2: 12}}


def _cartan_matrix(type_letter, rank):
    """Cartan matrix with c[i][j] = <alpha_j, alpha_i^vee> (Bourbaki numbering)."""
    c = [[2 * (i == j) for j in range(rank)] for i in range(rank)]

    def bond(i, j, cij=-1, cji=-1):
        c[i][j] = cij
        c[j][i] = cji

    if type_letter == "A":
        for i in range(rank - 1):
            bond(i, i + 1)
    elif type_letter == "B":  # alpha_rank short
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 2, rank - 1, -1, -2)
    elif type_letter == "C":  # alpha_rank long
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 2, rank - 1, -2, -1)
    elif type_letter == "D":
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 3, rank - 1)
    elif type_letter == "E":  # node 2 hangs off node 4; chain 1-3-4-5-...
        chain = [0] + list(range(2, rank))
        for a, b in zip(chain, chain[1:]):
            bond(a, b)
        bond(1, 3)
    elif type_letter == "F":  # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        bond(0, 1)
        bond(1, 2, -1, -2)
        bond(2, 3)
    elif type_letter == "G":  # alpha_1 short, alpha_2 long
        bond(0, 1, -3, -1)
    return tuple(tuple(row) for row in c)


def _symmetrizer(cartan):
    """Positive integers d with d_i c_ij = d_j c_ji ((alpha_i,alpha_j) = d_i c_ij)."""
    rank = len(cartan)
    d = [None] * rank
    d[0] = Q(1)
    todo = [0]
    while todo:
        i = todo.pop()
        for j in range(rank):
            if cartan[i][j] != 0 and i != j and d[j] is None:
                d[j] = d[i] * cartan[i][j] / cartan[j][i]
                todo.append(j)
    if any(x is None for x in d):
        raise InputError("Dynkin diagram is not connected")
    scale = 1
    for x in d:
        scale = scale * x.denominator // _gcd(scale, x.denominator)
    return tuple(int(x * scale) for x in d)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class RootSystem:
    """An irreducible root system with a frozen deterministic root order."""

    type_letter: str
    rank: int
    roots: tuple  # positives by (height, lex), then negatives mirrored
    cartan_matrix: tuple
    symmetrizer: tuple  # d_i = (alpha_i, alpha_i)/2 up to one global scale

    @property
    def num_positive(self):
        return len(self.roots) // 2

    def root_index(self, root):
        return self._index[tuple(root)]

    @property
    def _index(self):
        idx = self.__dict__.get("_index_cache")
        if idx is None:
            idx = {r: i for i, r in enumerate(self.roots)}
            object.__setattr__(self, "_index_cache", idx)
        return idx

    def is_root(self, v):
        return tuple(v) in self._index

    def pairing(self, beta, i):
        """<beta, alpha_i^vee> for beta in simple-root coordinates."""
        return sum(b * self.cartan_matrix[i][j] for j, b in enumerate(beta))

    def length_sq(self, beta):
        """(beta, beta) in the fixed invariant inner product on the root lattice."""
        d, c = self.symmetrizer, self.cartan_matrix
        return sum(beta[i] * beta[j] * d[i] * c[i][j]
                   for i in range(self.rank) for j in range(self.rank))


def build_root_system(type_letter, rank):
    """Construct the root system of the given simple type, rank <= 8."""
    type_letter = str(type_letter).upper()
    try:
        rank = int(rank)
    except (TypeError, ValueError):
        raise InputError("rank must be an integer") from None
    lows = {"A": 1, "B": 2, "C": 2, "D": 4, "E": 6, "F": 4, "G": 2}
    highs = {"A": 8, "B": 8, "C": 8, "D": 8, "E": 8, "F": 4, "G": 2}
    if type_letter not in lows or not lows[type_letter] <= rank <= highs[type_letter]:
        raise InputError(f"not a supported simple type: {type_letter}{rank}")

    cartan = _cartan_matrix(type_letter, rank)
    simple = [tuple(1 * (i == j) for j in range(rank)) for i in range(rank)]
    positives = list(simple)
    rootset = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(rank):
                p = 0
                cur = tuple(b - s for b, s in zip(beta, simple[i]))
                while cur in rootset or cur == tuple([0] * rank):
                    if cur == tuple([0] * rank):
                        break
                    p += 1
                    cur = tuple(b - s for b, s in zip(cur, simple[i]))
                q = p - sum(beta[j] * cartan[i][j] for j in range(rank))
                if q > 0:
                    new = tuple(b + s for b, s in zip(beta, simple[i]))
                    if new not in rootset:
                        rootset.add(new)
                        positives.append(new)
                        nxt.append(new)
        layer = nxt

    positives.sort(key=lambda r: (sum(r), r))
    roots = tuple(positives) + tuple(tuple(-x for x in r) for r in positives)
    expected = _ROOT_COUNTS[type_letter]
    expected = expected(rank) if callable(expected) else expected[rank]
    if len(roots) != expected:
        raise AssertionError(f"root closure produced {len(roots)} roots, "
                             f"expected {expected} for {type_letter}{rank}")
    return RootSystem(type_letter, rank, roots, cartan, _symmetrizer(cartan))


# ---------- Chevalley structure constants ----------

def _structure_table(rs):
    """N[alpha, beta] on ordered special pairs of positive roots.

    Signs are fixed by giving every extraspecial pair (eps, gamma-eps), eps
    minimal in the root order, the value p+1 > 0; all other special pairs
    follow from the standard four-root identity
        sum over cyclic splittings of N N / (length^2) = 0
    and the three-root identity used to fold mixed-sign pairs back onto
    positive ones.  All values come out as integers of magnitude p+1.
    """
    npos = rs.num_positive
    pos = rs.roots[:npos]
    order = {r: i for i, r in enumerate(pos)}
    rootset = set(rs.roots)

    def sub(a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(a):
        return tuple(-x for x in a)

    def p_val(a, b):
        """Largest p with b - p*a a root."""
        p = 0
        cur = sub(b, a)
        while cur in rootset:
            p += 1
            cur = sub(cur, a)
        return p

    table = {}

    def n_pos(a, b):
        """N for positive roots a, b with a + b a root (any relative order)."""
        if order[a] < order[b]:
            return table[a, b]
        return -table[b, a]

    def n_any(a, b):
        """N for arbitrary roots; 0 if a + b is not a root."""
        s = tuple(x + y for x, y in zip(a, b))
        if s not in rootset:
            return Q(0)
        apos, bpos = a in order, b in order
        if apos and bpos:
            return Q(n_pos(a, b))
        if not apos and not bpos:
            return -n_any(neg(a), neg(b))
        if not apos:
            return -n_any(b, a)
        # a positive, b negative; fold onto a positive pair of smaller sum
        z = neg(b)
        if sub(a, z) in order:  # a - z positive
            d = sub(a, z)
            return -Q(rs.length_sq(d), rs.length_sq(a)) * n_pos(z, d)
        d = sub(z, a)  # z - a positive
        return Q(rs.length_sq(d), rs.length_sq(z)) * n_pos(d, a)

    by_height = {}
    for g in pos:
        by_height.setdefault(sum(g), []).append(g)
    for h in sorted(by_height):
        if h == 1:
            continue
        for gamma in by_height[h]:
            splits = [a for a in pos if sub(gamma, a) in order
                      and order[a] < order[sub(gamma, a)]]
            eps = min(splits, key=lambda a: order[a])
            eta = sub(gamma, eps)
            table[eps, eta] = p_val(eps, eta) + 1
            for alpha in splits:
                if alpha == eps:
                    continue
                beta = sub(gamma, alpha)
                total = Q(0)
                if sub(eta, alpha) in rootset:
                    total += (n_any(eta, neg(alpha)) * n_any(eps, neg(beta))
                              / rs.length_sq(sub(eta, alpha)))
                if sub(eps, alpha) in rootset:
                    total += (n_any(neg(alpha), eps) * n_any(eta, neg(beta))
                              / rs.length_sq(sub(eps, alpha)))
                val = Q(rs.length_sq(gamma)) * total / table[eps, eta]
                if val.denominator != 1 or abs(val) != p_val(alpha, beta) + 1:
                    raise AssertionError(
                        f"structure constant for {alpha}+{beta} is {val}, "
                        f"|N| should be {p_val(alpha, beta) + 1}")
                table[alpha, beta] = int(val)
    return lambda a, b: n_any(a, b)


@dataclass
class LieAlgebra:
    """Chevalley-basis presentation of a simple Lie algebra over Q.

    Basis order: one e_r per root r (in the root system's order), then the
    simple coroots h_1..h_rank.  brackets holds the full antisymmetric
    table as {(i, j): {k: coeff}} for i < j; use bracket_basis for access.
    """

    rs: RootSystem
    brackets: dict
    _killing: list = field(default=None, repr=False)

    @property
    def dim(self):
        return len(self.rs.roots) + self.rs.rank

    @property
    def basis_labels(self):
        rk = self.rs.rank
        return tuple(f"e{list(r)}" for r in self.rs.roots) + tuple(
            f"h{i + 1}" for i in range(rk))

    def h_index(self, i):
        return len(self.rs.roots) + i

    def root_of(self, idx):
        """Root of a root-vector basis index, or None for coroot indices."""
        if idx < len(self.rs.roots):
            return self.rs.roots[idx]
        return None

    def bracket_basis(self, i, j):
        """[b_i, b_j] as a sparse element."""
        if i == j:
            return {}
        if i < j:
            res = self.brackets.get((i, j), {})
            return dict(res)
        res = self.brackets.get((j, i), {})
        return {k: -c for k, c in res.items()}

    def bracket(self, x, y):
        """[x, y] for sparse elements x, y."""
        out = {}
        for i, cx in x.items():
            for j, cy in y.items():
                if i == j:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    v = out.get(k, 0) + cx * cy * c
                    if v:
                        out[k] = v
                    elif k in out:
                        del out[k]
        return out

    def ad_matrix(self, x):
        """Matrix of ad x as {col: {row: coeff}} sparse columns."""
        cols = {}
        for j in range(self.dim):
            col = self.bracket(x, {j: Q(1)})
            if col:
                cols[j] = col
        return cols

    @property
    def killing(self):
        """Dense Killing form table kappa(b_i, b_j) = tr(ad b_i ad b_j)."""
        if self._killing is None:
            d = self.dim
            ads = [self.ad_matrix({i: Q(1)}) for i in range(d)]
            k = [[Q(0)] * d for _ in range(d)]
            for i in range(d):
                for j in range(i, d):
                    tr = Q(0)
                    adj = ads[j]
                    adi = ads[i]
                    for col, vec in adj.items():
                        # want coefficient of b_col in ad_i(ad_j(b_col))
                        for mid, c in vec.items():
                            tr += c * adi.get(mid, {}).get(col, 0)
                    if tr:
                        k[i][j] = k[j][i] = tr
            self._killing = k
        return self._killing


def build_lie_algebra(rs):
    """Chevalley basis with deterministic integer structure constants."""
    n_of = _structure_table(rs)
    nroots = len(rs.roots)
    rk = rs.rank
    d = rs.symmetrizer
    brackets = {}

    def put(i, j, elem):
        if not elem:
            return
        if i < j:
            brackets[i, j] = elem
        else:
            brackets[j, i] = {k: -c for k, c in elem.items()}

    zero = tuple([0] * rk)
    for i in range(nroots):
        a = rs.roots[i]
        for j in range(i + 1, nroots):
            b = rs.roots[j]
            s = tuple(x + y for x, y in zip(a, b))
            if s == zero:
                # [e_a, e_-a] = h_a, the coroot of a over the simple coroots
                da = rs.length_sq(a)
                elem = {}
                for k in range(rk):
                    c = Q(2 * a[k] * d[k], da)
                    if c:
                        if c.denominator != 1:
                            raise AssertionError(f"non-integral coroot for {a}")
                        elem[nroots + k] = Q(c)
                put(i, j, elem)
            elif rs.is_root(s):
                n = n_of(a, b)
                if n.denominator != 1:
                    raise AssertionError(f"non-integral N for {a}, {b}")
                put(i, j, {rs.root_index(s): Q(n)})
        for k in range(rk):
            # [h_k, e_a] = <a, alpha_k^vee> e_a
            c = rs.pairing(a, k)
            if c:
                put(nroots + k, i, {i: Q(c)})
    return LieAlgebra(rs, brackets)


def killing_pairing(L, x, y):
    """kappa(x, y) for sparse elements of L; raises on index mismatch."""
    dim = L.dim
    for e in (x, y):
        if any(not 0 <= i < dim for i in e):
            raise InputError("element index out of range for this algebra")
    k = L.killing
    return sum((cx * cy * k[i][j] for i, cx in x.items()
                for j, cy in y.items() if k[i][j]), Q(0))


# ---------- small element helpers used across modules ----------

def elem_add(x, y, scale=Q(1)):
    out = dict(x)
    for i, c in y.items():
        v = out.get(i, 0) + scale * c
        if v:
            out[i] = v
        elif i in out:
            del out[i]
    return out


def elem_scale(x, s):
    if not s:
        return {}
    return {i: c * s for i, c in x.items()}
