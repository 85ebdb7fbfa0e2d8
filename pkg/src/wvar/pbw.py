"""Exact arithmetic in U(g)/I realized on the symmetric algebra of p-bar.

An element is a sparse map {monomial: coefficient} where a monomial is a
sorted tuple of (generator index, exponent) pairs over the ordered p-bar
basis.  Products are straightened recursively: an out-of-order adjacent
pair is swapped via x y = y x + [x, y], and any m-side generator that
reaches the right end of a word is evaluated to the scalar chi(y).  The
result is the canonical representative of the product of the canonical
representatives, which is all the downstream algorithms ever need.

Swap results are memoized per (generator, monomial); the same swaps recur
massively when commutators are rewritten, so the cache is load-bearing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .errors import InputError, InternalConsistencyError

Monomial = tuple  # ((x_index, exponent), ...) sorted by index


@dataclass(frozen=True)
class DegreeProfile:
    total: int
    kazhdan: int
    weight: tuple


class Enveloping:
    """Multiplication context attached to one polarization."""

    def __init__(self, polarization):
        P = polarization
        self.P = P
        self.L = P.N.L
        dim = self.L.dim
        self.nx = len(P.pbar_basis)
        self.ny = len(P.m_basis)
        self.vectors = list(P.pbar_basis) + list(P.m_basis)
        if self.nx + self.ny != dim:
            raise InternalConsistencyError("p-bar + m do not fill the algebra")
        self.chi_y = list(P.chi_m)
        self.kazhdan = [n + 2 for n in P.n_deg]
        self.alpha = list(P.alpha)
        self._decomp_cols = self._invert_basis()
        self._bracket_cache = {}
        self._mul_cache = {}

    def _invert_basis(self):
        """Sparse columns of the inverse change-of-basis matrix."""
        dim = self.L.dim
        m = [[Q(0)] * (2 * dim) for _ in range(dim)]
        for j, v in enumerate(self.vectors):
            for r, c in v.items():
                m[r][j] = c
        for r in range(dim):
            m[r][dim + r] = Q(1)
        # Gauss-Jordan
        row = 0
        for col in range(dim):
            piv = next((i for i in range(row, dim) if m[i][col]), None)
            if piv is None:
                raise InternalConsistencyError("adapted basis is singular")
            m[row], m[piv] = m[piv], m[row]
            pv = m[row][col]
            m[row] = [x / pv for x in m[row]]
            for i in range(dim):
                if i != row and m[i][col]:
                    c = m[i][col]
                    m[i] = [a - c * b for a, b in zip(m[i], m[row])]
            row += 1
        cols = [dict() for _ in range(dim)]
        for k in range(dim):
            for r in range(dim):
                v = m[k][dim + r]
                if v:
                    cols[r][k] = v
        return cols

    def decompose(self, x):
        """Chevalley-coordinate element -> {adapted index: coefficient}."""
        out = {}
        for r, c in x.items():
            for k, v in self._decomp_cols[r].items():
                w = out.get(k, 0) + c * v
                if w:
                    out[k] = w
                elif k in out:
                    del out[k]
        return out

    def bracket_adapted(self, i, j):
        key = (i, j)
        cached = self._bracket_cache.get(key)
        if cached is None:
            w = self.L.bracket(self.vectors[i], self.vectors[j])
            cached = sorted(self.decompose(w).items())
            self._bracket_cache[key] = cached
        return cached

    # ---- monomial utilities ----

    @staticmethod
    def mono_insert(mono, idx):
        out = []
        done = False
        for k, e in mono:
            if k == idx:
                out.append((k, e + 1))
                done = True
            elif k > idx and not done:
                out.append((idx, 1))
                out.append((k, e))
                done = True
            else:
                out.append((k, e))
        if not done:
            out.append((idx, 1))
        return tuple(out)

    @staticmethod
    def mono_pop_min(mono):
        """(smallest index, monomial with one copy removed)."""
        (k, e), rest = mono[0], mono[1:]
        if e > 1:
            return k, ((k, e - 1),) + rest
        return k, rest

    def profile(self, mono):
        """Degree profile (total, Kazhdan, torus weight) of a monomial."""
        total = sum(e for _, e in mono)
        kaz = sum(e * self.kazhdan[k] for k, e in mono)
        nw = len(self.P.N.te_basis)
        w = [Q(0)] * nw
        for k, e in mono:
            for t in range(nw):
                w[t] += e * self.alpha[k][t]
        return DegreeProfile(total, kaz, tuple(w))

    # ---- core straightening ----

    def mul_gen(self, g, mono):
        """Normal form of (adapted generator g) * x^mono as a term dict."""
        key = (g, mono)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        if g < self.nx:
            if not mono or g <= mono[0][0]:
                out = {self.mono_insert(mono, g): Q(1)}
                self._mul_cache[key] = out
                return out
        elif not mono:
            chi = self.chi_y[g - self.nx]
            out = {(): chi} if chi else {}
            self._mul_cache[key] = out
            return out
        j, rest = self.mono_pop_min(mono)
        out = {}
        for m2, c in self.mul_gen(g, rest).items():
            _acc(out, self.mul_gen(j, m2), c)
        for k, c in self.bracket_adapted(g, j):
            _acc(out, self.mul_gen(k, rest), c)
        self._mul_cache[key] = out
        return out

    def apply_gen(self, g, terms):
        out = {}
        for mono, c in terms.items():
            _acc(out, self.mul_gen(g, mono), c)
        return out

    def word_times(self, mono, terms):
        """Normal form of x^mono * (element in normal form)."""
        gens = []
        for k, e in mono:
            gens.extend([k] * e)
        for g in reversed(gens):
            terms = self.apply_gen(g, terms)
        return terms


def _acc(target, terms, scale):
    if not scale:
        return
    for m, c in terms.items():
        v = target.get(m, 0) + scale * c
        if v:
            target[m] = v
        elif m in target:
            del target[m]


@dataclass
class UEElement:
    """An element of U(g)/I in normal form over the p-bar PBW monomials."""

    terms: dict
    context: Enveloping

    def __post_init__(self):
        self.terms = {m: Q(c) for m, c in self.terms.items() if c}

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, UEElement)
                and self.context is other.context
                and self.terms == other.terms)

    def __add__(self, other):
        _same_context(self, other)
        out = dict(self.terms)
        _acc(out, other.terms, Q(1))
        return UEElement(out, self.context)

    def __sub__(self, other):
        _same_context(self, other)
        out = dict(self.terms)
        _acc(out, other.terms, Q(-1))
        return UEElement(out, self.context)

    def scale(self, s):
        return UEElement({m: c * s for m, c in self.terms.items()},
                         self.context)

    def max_kazhdan(self):
        ctx = self.context
        return max((ctx.profile(m).kazhdan for m in self.terms), default=None)


def ue_zero(ctx):
    return UEElement({}, ctx)


def ue_one(ctx, c=Q(1)):
    return UEElement({(): c}, ctx)


def ue_monomial(ctx, mono, c=Q(1)):
    return UEElement({tuple(mono): c}, ctx)


def ue_from_chevalley(ctx, x):
    """Class of a Lie-algebra element: p-bar part + chi of the m part."""
    terms = {}
    const = Q(0)
    for k, c in ctx.decompose(x).items():
        if k < ctx.nx:
            terms[((k, 1),)] = terms.get(((k, 1),), 0) + c
        else:
            const += c * ctx.chi_y[k - ctx.nx]
    if const:
        terms[()] = terms.get((), 0) + const
    return UEElement(terms, ctx)


def normal_order_product(u, v):
    """Product of canonical representatives, re-expressed in normal form."""
    _same_context(u, v)
    ctx = u.context
    out = {}
    for mono, c in sorted(u.terms.items()):
        _acc(out, ctx.word_times(mono, v.terms), c)
    return UEElement(out, ctx)


def adjoint_action(x, u):
    """Class of x*u - u*x for a Lie-algebra element x (Chevalley coords)."""
    ctx = u.context
    adapted = ctx.decompose(x)
    out = {}
    for k, c in sorted(adapted.items()):
        # left multiplication by the generator
        _acc(out, ctx.apply_gen(k, u.terms), c)
        # right multiplication: trailing m-side generators die into chi
        if k >= ctx.nx:
            chi = ctx.chi_y[k - ctx.nx]
            _acc(out, u.terms, -c * chi)
        else:
            single = {((k, 1),): Q(1)}
            for mono, cu in u.terms.items():
                _acc(out, ctx.word_times(mono, single), -c * cu)
    return UEElement(out, ctx)


def apply_automorphism(ctx, matrix, u):
    """Image of u under a grading-preserving automorphism of the algebra.

    Each monomial is expanded as a word, every letter is mapped through
    the matrix (in Chevalley coordinates), and the product of the images
    is re-straightened.  Valid whenever the automorphism fixes e and h
    and preserves the polarization subspaces, so the ideal I is stable.
    """
    from .autos import apply_matrix  # local import, no cycle at module load

    images = {}

    def gen_image(k):
        if k not in images:
            vec = apply_matrix(matrix, ctx.vectors[k])
            images[k] = sorted(ctx.decompose(vec).items())
        return images[k]

    out = {}
    for mono, c in u.terms.items():
        word = []
        for k, e in mono:
            word.extend([k] * e)
        acc = {(): Q(1)}
        for g in reversed(word):
            nxt = {}
            for k2, c2 in gen_image(g):
                for m2, c3 in acc.items():
                    _acc(nxt, ctx.mul_gen(k2, m2), c2 * c3)
            acc = nxt
        _acc(out, acc, c)
    return UEElement(out, ctx)


def degree_profile(ctx, mono):
    """(total degree, Kazhdan degree, torus weight) of an exponent vector."""
    mono = tuple(mono)
    if any(not 0 <= k < ctx.nx for k, _ in mono):
        raise InputError("exponent vector does not index p-bar")
    return ctx.profile(mono)


def _same_context(u, v):
    if u.context is not v.context:
        raise InputError("elements come from different polarizations")
