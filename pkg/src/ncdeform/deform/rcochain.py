"""Cochains with coefficients in an Artin algebra R.

An RCochain is Σ_u u ⊗ C_u with u running over the standard basis of R and
C_u a PolyDiffCochain; all components share source, target and arity.
The unit component (u = 0) carries the classical part, e.g. the commutative
product or φ⁰.
"""


from ..algebra.linalg import vec_axpy
from ..hochschild import (PolyDiffCochain, JetCache, apply_op, identity_cochain, precompose,
                          push, restriction_cochain)


class RCochain:
    __slots__ = ("R", "cover", "src", "tgt", "arity", "comps")

    def __init__(self, R, cover, src, tgt, arity, comps=None):
        self.R = R
        self.cover = cover
        self.src = src
        self.tgt = tgt
        self.arity = arity
        self.comps = {u: c for u, c in (comps or {}).items() if c}

    def __getitem__(self, u):
        c = self.comps.get(u)
        return c if c is not None else PolyDiffCochain(self.cover, self.src, self.tgt, self.arity)

    def zero_like(self):
        return RCochain(self.R, self.cover, self.src, self.tgt, self.arity)

    def __bool__(self):
        return bool(self.comps)

    def is_zero(self):
        return not self.comps

    def __add__(self, other):
        out = dict(self.comps)
        for u, c in other.comps.items():
            out[u] = out[u] + c if u in out else c
        return RCochain(self.R, self.cover, self.src, self.tgt, self.arity, out)

    def __neg__(self):
        return RCochain(self.R, self.cover, self.src, self.tgt, self.arity,
                        {u: -c for u, c in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, RCochain) and (self.src, self.tgt, self.arity) == (other.src, other.tgt, other.arity)
                and self.comps.keys() == other.comps.keys()
                and all(self.comps[u] == other.comps[u] for u in self.comps))

    def scale(self, a):
        return RCochain(self.R, self.cover, self.src, self.tgt, self.arity,
                        {u: c.scale(a) for u, c in self.comps.items()})

    def rmul(self, elem):
        """Multiply by an element of R (dict over basis indices)."""
        R = self.R
        out = {}
        for v, a in elem.items():
            for u, c in self.comps.items():
                for w, x in R.mul_basis(v, u).items():
                    term = c.scale(a * x)
                    out[w] = out[w] + term if w in out else term
        return RCochain(R, self.cover, self.src, self.tgt, self.arity, out)

    def corrections(self):
        """Components at the maximal ideal (everything but the unit)."""
        return {u: c for u, c in self.comps.items() if u != 0}

    def with_src(self, s):
        """Re-source a 0-cochain (its source chart is immaterial)."""
        if self.arity:
            raise ValueError("only 0-cochains can be re-sourced")
        return RCochain(self.R, self.cover, s, self.tgt, 0,
                        {u: PolyDiffCochain(self.cover, s, self.tgt, 0, c.terms) for u, c in self.comps.items()})

    def degree_part(self, n):
        return RCochain(self.R, self.cover, self.src, self.tgt, self.arity,
                        {u: c for u, c in self.comps.items() if self.R.degrees[u] == n})

    def truncate(self, n):
        return RCochain(self.R, self.cover, self.src, self.tgt, self.arity,
                        {u: c for u, c in self.comps.items() if self.R.degrees[u] <= n})

    def __repr__(self):
        return f"RCochain({self.src}->{self.tgt}, arity {self.arity}, {len(self.comps)} comps)"


def constant(R, c):
    """c ⊗ 1."""
    return RCochain(R, c.cover, c.src, c.tgt, c.arity, {0: c})


def rc_identity(R, cover, i):
    return constant(R, identity_cochain(cover, i))


def rc_restriction(R, cover, j, i):
    return constant(R, restriction_cochain(cover, j, i))


def rc_unit(R, cover, k, src=None):
    """The element 1 of R ⊗ A_k as a 0-cochain."""
    from ..hochschild import element_cochain
    return constant(R, element_cochain(cover, k, "1", src=src))


def _bounded_combos(arg_items, degs, budget):
    """Tuples of components, one per argument, of total degree <= budget."""
    if not arg_items:
        yield ()
        return
    first, rest = arg_items[0], arg_items[1:]
    for item in first:
        d = degs[item[0]]
        if d > budget:
            break
        for tail in _bounded_combos(rest, degs, budget - d):
            yield (item,) + tail


def compose(op, args, keep=None, cache=None):
    """op(args) over R.  ``keep`` restricts the output basis indices."""
    R = op.R
    if op.arity != len(args):
        raise ValueError("arity mismatch in composition")
    cache = cache or JetCache()
    out = {}
    degs = R.degrees
    arg_items = [sorted(a.comps.items(), key=lambda kv: (degs[kv[0]], kv[0])) for a in args]
    top = R.order
    for u, cu in sorted(op.comps.items()):
        for combo in _bounded_combos(arg_items, degs, top - degs[u]):
            coef = {u: R.field(1)}
            for v, _ in combo:
                nxt = {}
                for a, x in coef.items():
                    vec_axpy(nxt, R.mul_basis(a, v), x)
                coef = nxt
                if not coef:
                    break
            if keep is not None:
                coef = {w: x for w, x in coef.items() if w in keep}
            if not coef:
                continue
            val = apply_op(cu, [c for _, c in combo], cache)
            if not val:
                continue
            for w, x in coef.items():
                term = val.scale(x)
                out[w] = out[w] + term if w in out else term
    if args:
        src = args[0].src
    else:
        src = op.src
    arity = sum(a.arity for a in args)
    return RCochain(R, op.cover, src, op.tgt, arity, out)


def rc_push(rc, B):
    return RCochain(rc.R, rc.cover, rc.src, B, rc.arity, {u: push(c, B) for u, c in rc.comps.items()})


def rc_precompose(rc, i):
    return RCochain(rc.R, rc.cover, i, rc.tgt, rc.arity, {u: precompose(c, i) for u, c in rc.comps.items()})


def change_base(rc, hom):
    """Apply a homomorphism of Artin algebras to the coefficients."""
    out = {}
    for u, c in rc.comps.items():
        for w, x in hom.matrix[u].items():
            term = c.scale(x)
            out[w] = out[w] + term if w in out else term
    return RCochain(hom.target, rc.cover, rc.src, rc.tgt, rc.arity, out)


def lift_along(rc, ext):
    """Verbatim lift R -> R' through the section of a small extension."""
    out = {}
    for u, c in rc.comps.items():
        for w, x in ext.section[u].items():
            term = c.scale(x)
            out[w] = out[w] + term if w in out else term
    return RCochain(ext.source, rc.cover, rc.src, rc.tgt, rc.arity, out)


def j_project(rc, ext):
    """J-coordinates {a: PolyDiffCochain} of an R'-cochain."""
    out = {}
    for u, c in rc.comps.items():
        for a, x in ext._proj_by_u.get(u, ()):
            term = c.scale(x)
            out[a] = out[a] + term if a in out else term
    return {a: c for a, c in out.items() if c}


def j_embed(jvals, ext, template):
    """Σ_a j_a ⊗ c_a as an R'-cochain, from {a: PolyDiffCochain}."""
    out = {}
    for a, c in jvals.items():
        for w, x in ext.J[a].items():
            term = c.scale(x)
            out[w] = out[w] + term if w in out else term
    return RCochain(ext.source, template.cover, template.src, template.tgt, template.arity, out)


def j_support(ext):
    return frozenset(ext._proj_by_u)


def inverse_series(x, mult, unit):
    """Inverse of a unit 1 + n (n nilpotent) under the product ``mult``."""
    n = x - unit
    out = unit
    power = unit
    for _ in range(x.R.nilpotency()):
        power = -mult(power, n)
        if not power:
            break
        out = out + power
    return out
