"""Commutative polynomial ideals over Q: Groebner bases, dimension,
verification of claimed component decompositions, and group actions.

Polynomials are dicts {exponent tuple: Fraction}.  The ambient order is
degree-reverse-lexicographic with the variable order given by index; an
elimination block order (first block beats second) is used internally for
images of parameterizations and ideal intersections.  Reduced bases are
monic, pairwise reduced and sorted, hence canonical for identical input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from itertools import combinations

from .errors import ClaimRefuted, InputError, InternalConsistencyError

# ---------- monomial orders ----------


def order_grevlex(nvars, block=None):
    """Sort key for exponent tuples; larger key = larger monomial.

    With block = k, monomials are compared first in variables < k
    (elimination order: the first block dominates).
    """
    if block is None:
        def key(m):
            return (sum(m), tuple(-e for e in reversed(m)))
    else:
        def key(m):
            a, b = m[:block], m[block:]
            return (sum(a), tuple(-e for e in reversed(a)),
                    sum(b), tuple(-e for e in reversed(b)))
    return key


def _lead(poly, key):
    return max(poly, key=key)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def poly_add(p, q, scale=Q(1)):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        elif m in out:
            del out[m]
    return out


def poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            elif m in out:
                del out[m]
    return out


def poly_scale(p, s):
    return {m: c * s for m, c in p.items()} if s else {}


def poly_pow(p, e):
    out = {tuple([0] * _nvars_of(p)): Q(1)} if p else {}
    for _ in range(e):
        out = poly_mul(out, p)
    return out


def _nvars_of(p):
    return len(next(iter(p)))


def normal_form(p, basis, key):
    """Remainder of p under multivariate division by basis (deterministic)."""
    p = dict(p)
    rem = {}
    leads = [(_lead(g, key), g) for g in basis if g]
    while p:
        m = _lead(p, key)
        c = p[m]
        for lm, g in leads:
            if _mono_divides(lm, m):
                shift = _mono_div(m, lm)
                factor = c / g[lm]
                for gm, gc in g.items():
                    mm = _mono_mul(gm, shift)
                    v = p.get(mm, 0) - factor * gc
                    if v:
                        p[mm] = v
                    elif mm in p:
                        del p[mm]
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _s_poly(f, g, key):
    lf, lg = _lead(f, key), _lead(g, key)
    l = _mono_lcm(lf, lg)
    a = {_mono_div(l, lf): Q(1) / f[lf]}
    b = {_mono_div(l, lg): Q(1) / g[lg]}
    return poly_add(poly_mul(a, f), poly_mul(b, g), Q(-1))


def groebner_basis(gens, nvars, key=None):
    """Reduced Groebner basis as a sorted list of monic polynomials."""
    key = key or order_grevlex(nvars)
    basis = [dict(g) for g in gens if g]
    basis = [poly_scale(g, Q(1) / g[_lead(g, key)]) for g in basis]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        pairs.sort(key=lambda ij: key(_mono_lcm(_lead(basis[ij[0]], key),
                                                _lead(basis[ij[1]], key))),
                   reverse=True)
        i, j = pairs.pop()
        li, lj = _lead(basis[i], key), _lead(basis[j], key)
        if _mono_lcm(li, lj) == _mono_mul(li, lj):
            continue  # coprime leading terms
        s = _s_poly(basis[i], basis[j], key)
        r = normal_form(s, basis, key)
        if r:
            r = poly_scale(r, Q(1) / r[_lead(r, key)])
            pairs.extend((len(basis), t) for t in range(len(basis)))
            basis.append(r)
    # minimalize: drop generators whose lead is divisible by another lead
    leads = [_lead(g, key) for g in basis]
    keep = []
    for i, g in enumerate(basis):
        if any(j != i and _mono_divides(leads[j], leads[i])
               and (leads[j] != leads[i] or j < i) for j in range(len(basis))):
            continue
        keep.append(g)
    # inter-reduce
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = normal_form(g, others, key)
        if r:
            reduced.append(poly_scale(r, Q(1) / r[_lead(r, key)]))
    reduced.sort(key=lambda g: key(_lead(g, key)))
    return reduced


@dataclass
class PolyIdeal:
    """An ideal of Q[theta_1..theta_n] under the fixed degrevlex order."""

    nvars: int
    gens: list
    var_names: list = None
    _gb: list = field(default=None, repr=False)

    def __post_init__(self):
        for g in self.gens:
            for m in g:
                if len(m) != self.nvars:
                    raise InputError("exponent length does not match nvars")
        if self.var_names is None:
            self.var_names = [f"theta_{i + 1}" for i in range(self.nvars)]

    @property
    def key(self):
        return order_grevlex(self.nvars)

    def groebner(self):
        if self._gb is None:
            self._gb = groebner_basis(self.gens, self.nvars)
        return self._gb

    def normal_form(self, p):
        return normal_form(p, self.groebner(), self.key)

    def contains(self, p):
        return not self.normal_form(p)

    def is_trivial(self):
        gb = self.groebner()
        return len(gb) == 1 and list(gb[0]) == [tuple([0] * self.nvars)]


def groebner(ideal):
    """Groebner-reduced copy of the ideal (idempotent)."""
    gb = ideal.groebner()
    out = PolyIdeal(ideal.nvars, [dict(g) for g in gb], list(ideal.var_names))
    out._gb = [dict(g) for g in gb]
    return out


def dimension(ideal):
    """Krull dimension of the variety; -1 when empty.

    Combinatorial reading of the leading-term ideal: the dimension is the
    largest set of variables not hit on its own by any leading monomial.
    """
    gb = ideal.groebner()
    if not gb:
        return ideal.nvars
    if ideal.is_trivial():
        return -1
    key = ideal.key
    lead_supports = [frozenset(i for i, e in enumerate(_lead(g, key)) if e)
                     for g in gb]
    best = -1
    for size in range(ideal.nvars, -1, -1):
        for S in combinations(range(ideal.nvars), size):
            sset = set(S)
            if all(not sup <= sset for sup in lead_supports):
                return size
    return best


# ---------- component claims ----------


@dataclass
class Component:
    """A point or a polynomial parameterization of an affine piece."""

    kind: str  # "point" | "param"
    point: tuple = None
    nparams: int = 0
    maps: list = None  # per theta variable, poly dict over parameter vars

    def substitute_into(self, poly, nvars):
        """poly(theta) composed with this component's parameterization."""
        if self.kind == "point":
            val = Q(0)
            for m, c in poly.items():
                term = c
                for i, e in enumerate(m):
                    term *= self.point[i] ** e
                val += term
            return {} if not val else {tuple([0] * max(self.nparams, 1)): val}
        out = {}
        for m, c in poly.items():
            term = {tuple([0] * self.nparams): c}
            for i, e in enumerate(m):
                if e:
                    term = poly_mul(term, poly_pow(self.maps[i], e))
            out = poly_add(out, term)
        return out

    def vanishing_ideal(self, nvars):
        """Ideal of the closure of the image, by elimination."""
        if self.kind == "point":
            gens = []
            for i, c in enumerate(self.point):
                m = tuple(1 if j == i else 0 for j in range(nvars))
                g = {m: Q(1)}
                if c:
                    g[tuple([0] * nvars)] = -Q(c)
                gens.append(g)
            return PolyIdeal(nvars, gens)
        d = self.nparams
        total = d + nvars
        gens = []
        for i in range(nvars):
            g = {}
            for m, c in self.maps[i].items():
                g[tuple(m) + tuple([0] * nvars)] = c
            m = tuple([0] * d) + tuple(1 if j == i else 0 for j in range(nvars))
            g[m] = g.get(m, 0) - 1
            gens.append({mm: cc for mm, cc in g.items() if cc})
        gb = groebner_basis(gens, total, order_grevlex(total, block=d))
        kept = []
        for g in gb:
            if all(all(e == 0 for e in m[:d]) for m in g):
                kept.append({m[d:]: c for m, c in g.items()})
        return PolyIdeal(nvars, kept)


@dataclass
class ComponentClaim:
    components: list
    intersections: dict = None  # (i, j) -> Component
    orbit_sizes: list = None  # expected component-orbit sizes under the group
    fixed_components: list = None  # claimed components of the fixed locus


def ideal_sum(a, b):
    return PolyIdeal(a.nvars, [dict(g) for g in a.gens + b.gens],
                     list(a.var_names))


def ideal_intersection(a, b):
    """a cap b via the auxiliary-variable elimination trick."""
    n = a.nvars
    gens = []
    for g in a.gens:  # t * f for f in a
        gens.append({(1,) + m: c for m, c in g.items()})
    for g in b.gens:
        h = {}
        for m, c in g.items():
            h[(0,) + m] = h.get((0,) + m, 0) + c
            h[(1,) + m] = h.get((1,) + m, 0) - c
        gens.append({m: c for m, c in h.items() if c})
    gb = groebner_basis(gens, n + 1, order_grevlex(n + 1, block=1))
    kept = [{m[1:]: c for m, c in g.items()}
            for g in gb if all(m[0] == 0 for m in g)]
    return PolyIdeal(n, kept, list(a.var_names))


def ideal_equal(a, b):
    ga = a.groebner()
    gb = b.groebner()
    return ga == gb


@dataclass
class DecompositionReport:
    checks: list  # (name, passed, detail)
    up_to_radical: bool = False

    @property
    def verified(self):
        return all(ok for _, ok, _ in self.checks)

    def lines(self):
        return [f"{'PASS' if ok else 'FAIL'}  {name}{': ' + d if d else ''}"
                for name, ok, d in self.checks]


def verify_decomposition(ideal, claim, radical_power=4):
    """Check a claimed component decomposition against the ideal, exactly.

    (a) every claimed component satisfies every generator;
    (b) the intersection of the components' vanishing ideals equals the
        ideal, by two-way containment of reduced bases, with an escape
        hatch that reports equality up to radical when only some power of
        a generator reduces to zero;
    (c) claimed pairwise intersections match.
    """
    n = ideal.nvars
    for comp in claim.components:
        if comp.kind == "point":
            if len(comp.point) != n:
                raise InputError("claim point has wrong dimension")
        else:
            if len(comp.maps) != n or comp.nparams < 1:
                raise InputError("claim parameterization has wrong shape")
    checks = []
    up_to_radical = False
    for k, comp in enumerate(claim.components):
        bad = [i for i, g in enumerate(ideal.gens)
               if comp.substitute_into(g, n)]
        checks.append((f"component {k} satisfies all generators", not bad,
                       "" if not bad else f"generators {bad} do not vanish"))
    comp_ideals = [comp.vanishing_ideal(n) for comp in claim.components]
    inter = comp_ideals[0]
    for ci in comp_ideals[1:]:
        inter = ideal_intersection(inter, ci)
    fwd_bad = [g for g in inter.groebner() if ideal.normal_form(g)]
    fwd_ok = not fwd_bad
    fwd_detail = ""
    if not fwd_ok:
        powers_ok = True
        for g in fwd_bad:
            p = dict(g)
            hit = False
            for _ in range(radical_power):
                p = poly_mul(p, g)
                if not ideal.normal_form(p):
                    hit = True
                    break
            powers_ok = powers_ok and hit
        if powers_ok:
            fwd_ok = True
            up_to_radical = True
            fwd_detail = "equal up to radical"
        else:
            fwd_detail = "components miss part of the variety"
    checks.append(("union of components covers the variety", fwd_ok, fwd_detail))
    back_bad = [g for g in ideal.gens if inter.normal_form(g)]
    checks.append(("every generator vanishes on the union", not back_bad,
                   "" if not back_bad else "ideal not contained in intersection"))
    if claim.intersections:
        for (i, j), comp in sorted(claim.intersections.items()):
            meet = groebner(ideal_sum(comp_ideals[i], comp_ideals[j]))
            want = comp.vanishing_ideal(n)
            ok = ideal_equal(meet, want)
            checks.append((f"intersection of components {i},{j} as claimed",
                           ok, ""))
    return DecompositionReport(checks, up_to_radical)


# ---------- group actions ----------


@dataclass
class GammaAction:
    """Generators acting on theta coordinates.

    A generator is either ("subs", [poly per variable]): the coordinate
    function theta_i pulls back to the i-th polynomial (a rational matrix
    action is the special case of degree-one substitutions); or
    ("torus", order, phases): a finite-order torus element scaling
    theta_i by a root of unity with the given integer phase, which forces
    every coordinate with nonzero phase to vanish on the fixed locus.
    """

    generators: list

    @staticmethod
    def linear(mats):
        out = []
        for mat in mats:
            n = len(mat)
            subs = []
            for i in range(n):
                p = {}
                for j in range(n):
                    if mat[i][j]:
                        m = tuple(1 if t == j else 0 for t in range(n))
                        p[m] = Q(mat[i][j])
                subs.append(p)
            out.append(("subs", subs))
        return GammaAction(out)


def apply_action_poly(poly, nvars, subs):
    """poly with theta_i replaced by its pullback polynomial."""
    out = {}
    for m, c in poly.items():
        term = {tuple([0] * nvars): c}
        for i, e in enumerate(m):
            for _ in range(e):
                term = poly_mul(term, subs[i])
        out = poly_add(out, term)
    return out


def _check_stabilizes(ideal, gen):
    if gen[0] == "torus":
        _, order, phases = gen
        for g in ideal.gens:
            parts = {}
            for m, c in g.items():
                ph = sum(e * phases[i] for i, e in enumerate(m)) % order
                parts.setdefault(ph, {})[m] = c
            for part in parts.values():
                if ideal.normal_form(part):
                    return g
        return None
    _, subs = gen
    for g in ideal.gens:
        if ideal.normal_form(apply_action_poly(g, ideal.nvars, subs)):
            return g
    return None


def gamma_fixed_ideal(ideal, action):
    """ideal + (theta - gamma.theta); the fixed locus of the action."""
    n = ideal.nvars
    gens = [dict(g) for g in ideal.gens]
    for gen in action.generators:
        witness = _check_stabilizes(ideal, gen)
        if witness is not None:
            raise InputError(
                "group generator does not stabilize the variety; witness "
                + poly_str(witness, ideal.var_names))
        if gen[0] == "torus":
            _, order, phases = gen
            for i in range(n):
                if phases[i] % order:
                    m = tuple(1 if t == i else 0 for t in range(n))
                    gens.append({m: Q(1)})
            continue
        _, subs = gen
        for i in range(n):
            m = tuple(1 if t == i else 0 for t in range(n))
            form = poly_add({m: Q(1)}, subs[i], Q(-1))
            if form:
                gens.append(form)
    out = PolyIdeal(n, gens, list(ideal.var_names))
    return groebner(out)


def component_permutation(ideal, claim, subs):
    """How a generator permutes the claimed components, or None if it fails.

    A polynomial vanishes on the image of a component exactly when its
    pullback vanishes on the component, so composing parameterizations
    with the pullback polynomials and matching vanishing ideals against
    the claimed list identifies the permutation (for the generator or its
    inverse; the generated group and orbit structure are the same).
    """
    n = ideal.nvars
    comp_ideals = [groebner(c.vanishing_ideal(n)) for c in claim.components]
    perm = []
    for comp in claim.components:
        img = _component_image(comp, n, subs)
        target = None
        for k, ci in enumerate(comp_ideals):
            if ideal_equal(img, ci):
                target = k
                break
        if target is None:
            return None
        perm.append(target)
    return perm


def _component_image(comp, nvars, subs):
    """Vanishing ideal of the image of a component under the point map."""
    if comp.kind == "point":
        img = []
        for i in range(nvars):
            val = Q(0)
            for m, c in subs[i].items():
                term = c
                for j, e in enumerate(m):
                    term *= comp.point[j] ** e
                val += term
            img.append(val)
        return groebner(Component("point", point=tuple(img))
                        .vanishing_ideal(nvars))
    fake = Component(comp.kind, point=comp.point, nparams=comp.nparams,
                     maps=comp.maps)
    maps = [fake.substitute_into(subs[i], nvars) for i in range(nvars)]
    moved = Component("param", nparams=comp.nparams, maps=maps)
    return groebner(moved.vanishing_ideal(nvars))


def orbit_sizes(perms, ncomp):
    """Orbit size multiset of the group generated by the permutations."""
    group = {tuple(range(ncomp))}
    frontier = [tuple(range(ncomp))]
    gens = [tuple(p) for p in perms]
    while frontier:
        g = frontier.pop()
        for p in gens:
            h = tuple(p[g[i]] for i in range(ncomp))
            if h not in group:
                group.add(h)
                frontier.append(h)
    seen = set()
    sizes = []
    for i in range(ncomp):
        if i in seen:
            continue
        orbit = {g[i] for g in group}
        seen |= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


def poly_str(poly, names):
    """Human-readable polynomial with exact rational coefficients."""
    if not poly:
        return "0"
    terms = []
    key = order_grevlex(len(names))
    for m in sorted(poly, key=key, reverse=True):
        c = poly[m]
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        body = "*".join(factors)
        if not body:
            terms.append(str(c))
        elif c == 1:
            terms.append(body)
        elif c == -1:
            terms.append(f"-{body}")
        else:
            terms.append(f"{c}*{body}")
    out = " + ".join(terms)
    return out.replace("+ -", "- ")
