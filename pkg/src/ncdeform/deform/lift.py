"""Module-level lifts over a small extension and their defect cochains.

A CandidateLift carries products, gluings (and twists) over R' reducing
to a given deformation over R.  Its failures to be a deformation are
measured by J-valued Hochschild cochains:

    f_i      (x×y)×z − x×(y×z)                         A_i^⊗3 -> J⊗A_i
    g_ji     φ(x×y) − φ(x)×φ(y)                         A_i^⊗2 -> J⊗A_j
    h_kji    φ_kj φ_ji(x) − φ_ki(x)  (or τ⁻¹φ_ki(x)τ)    A_i    -> J⊗A_k
    σ_lkji   τ_lji τ_lkj − τ_lki φ_lk(τ_kji)              J⊗A_l

Defects are returned as {J index: PolyDiffCochain}.
"""

from ..errors import IdentityViolation, IncompatibleData
from ..hochschild import PolyDiffCochain, coboundary, precompose, push
from .deformation import NCDeformation
from .rcochain import RCochain, compose, inverse_series, j_embed, j_project, j_support, lift_along


class CandidateLift:
    """Products and gluings over R' = ext.source lifting D; no identities assumed."""

    def __init__(self, D, ext, mult, glue, twist=None):
        if ext.target != D.R:
            raise IncompatibleData("small extension does not end at the deformation's base")
        self.D = D
        self.ext = ext
        self.deformation = NCDeformation(ext.source, D.cover, mult, glue, twist)
        self.keep = j_support(ext)

    @property
    def cover(self):
        return self.D.cover

    @property
    def twisted(self):
        return self.D.twisted

    @property
    def mult(self):
        return self.deformation.mult

    @property
    def glue(self):
        return self.deformation.glue

    @property
    def twist(self):
        return self.deformation.twist

    def replace(self, mult=None, glue=None, twist=None):
        d = self.deformation
        return CandidateLift(self.D, self.ext, mult or d.mult, glue or d.glue,
                             twist if twist is not None else d.twist)

    def truncate(self):
        """Back to the base R."""
        return self.deformation.pushforward(self.ext.map)

    def __repr__(self):
        return f"CandidateLift({self.D!r} -> base dim {self.ext.source.dim})"


def lift_candidate(D, ext):
    """Lift every correction verbatim through the section R -> R'."""
    mult = {i: lift_along(c, ext) for i, c in D.mult.items()}
    glue = {k: lift_along(c, ext) for k, c in D.glue.items()}
    twist = None if D.twist is None else {k: lift_along(c, ext) for k, c in D.twist.items()}
    return CandidateLift(D, ext, mult, glue, twist)


# defects -----------------------------------------------------------------------

def defect_f(L, i):
    d = L.deformation
    mu, e = d.mult[i], d.identity(i)
    r = compose(mu, [mu, e], L.keep) - compose(mu, [e, mu], L.keep)
    return j_project(r, L.ext)


def defect_g(L, j, i):
    d = L.deformation
    phi = d.glue[j, i]
    r = compose(phi, [d.mult[i]], L.keep) - compose(d.mult[j], [phi, phi], L.keep)
    return j_project(r, L.ext)


def _tau_inv_cache(L):
    cache = L.__dict__.setdefault("_tau_inv", {})
    return cache


def defect_h(L, k, j, i):
    d = L.deformation
    lhs = compose(d.glue[k, j], [d.glue[j, i]], L.keep)
    if not L.twisted:
        rhs = RCochain(d.R, d.cover, i, k, 1, {u: c for u, c in d.glue[k, i].comps.items() if u in L.keep})
    else:
        cache = _tau_inv_cache(L)
        key = (k, j, i, id(d.twist[k, j, i]))
        if key not in cache:
            cache[key] = d.tau_inverse(k, j, i)
        rhs = d.conjugate(k, d.tau(k, j, i), cache[key], d.glue[k, i], L.keep)
    return j_project(lhs - rhs, L.ext)


def defect_sigma(L, l, k, j, i):
    from .deformation import twist_defect
    if not L.twisted:
        raise IncompatibleData("twist compatibility defect needs a twisted lift")
    return j_project(twist_defect(L.deformation, l, k, j, i, L.keep), L.ext)


def all_defects(L, kinds=("f", "g", "h", "sigma")):
    cover = L.cover
    out = {}
    if "f" in kinds:
        out["f"] = {(i,): defect_f(L, i) for i in cover.ids}
    if "g" in kinds:
        out["g"] = {ch: defect_g(L, *ch) for ch in cover.chains(2)}
    if "h" in kinds:
        out["h"] = {ch: defect_h(L, *ch) for ch in cover.chains(3)}
    if "sigma" in kinds and L.twisted:
        out["sigma"] = {ch: defect_sigma(L, *ch) for ch in cover.chains(4)}
    return out


# choice data -------------------------------------------------------------------

class ChoiceData:
    """J-valued changes of products (b), gluings (c) and twists (t)."""

    def __init__(self, b=None, c=None, t=None):
        self.b = {k: dict(v) for k, v in (b or {}).items()}
        self.c = {k: dict(v) for k, v in (c or {}).items()}
        self.t = {k: dict(v) for k, v in (t or {}).items()}

    def __repr__(self):
        return f"ChoiceData(b={len(self.b)}, c={len(self.c)}, t={len(self.t)})"


def transform(L, choice):
    """New products x×y + b(x̄,ȳ), gluings φ(x) + c(x̄), twists τ + t."""
    d = L.deformation
    mult = dict(d.mult)
    for i, vals in choice.b.items():
        mult[i] = mult[i] + j_embed(vals, L.ext, mult[i])
    glue = dict(d.glue)
    for key, vals in choice.c.items():
        glue[key] = glue[key] + j_embed(vals, L.ext, glue[key])
    twist = None if d.twist is None else dict(d.twist)
    for key, vals in choice.t.items():
        twist[key] = twist[key] + j_embed(vals, L.ext, twist[key])
    return L.replace(mult, glue, twist)


def _jadd(x, y, sign=1):
    out = dict(x)
    for a, c in y.items():
        c = c if sign == 1 else -c
        if a in out:
            s = out[a] + c
            if s:
                out[a] = s
            else:
                del out[a]
        elif c:
            out[a] = c
    return out


def _jmap(fn, x):
    return {a: v for a, v in ((a, fn(c)) for a, c in x.items()) if v}


def updated_f(f, b):
    """f' = f − db."""
    return {k: _jadd(f[k], _jmap(coboundary, b.get(k[0], {})), -1) for k in f}


def updated_g(g, b, c, cover):
    """g' = g + φ⁰b_i − b_j(φ⁰)^⊗2 − dc_ji."""
    out = {}
    for (j, i), gv in g.items():
        r = _jadd(gv, _jmap(lambda x: push(x, j), b.get(i, {})))
        r = _jadd(r, _jmap(lambda x: precompose(x, i), b.get(j, {})), -1)
        r = _jadd(r, _jmap(coboundary, c.get((j, i), {})), -1)
        out[j, i] = r
    return out


def updated_h(h, c):
    """h' = h + φ⁰_kj c_ji − c_ki + c_kj φ⁰_ji."""
    out = {}
    for (k, j, i), hv in h.items():
        r = _jadd(hv, _jmap(lambda x: push(x, k), c.get((j, i), {})))
        r = _jadd(r, c.get((k, i), {}), -1)
        r = _jadd(r, _jmap(lambda x: precompose(x, i), c.get((k, j), {})))
        out[k, j, i] = r
    return out


# the defect identities ---------------------------------------------------------

def _zero_or_raise(x, what, where):
    if any(v for v in x.values()):
        raise IdentityViolation(f"{what} fails on {where}", where)


def check_identities(defects, cover, which=(1, 2, 3, 4), twisted_sigma=False, mutate=None, opposite_sign=False):
    """Assert the coboundary identities relating f, g, h (and σ) exactly.

    ``mutate`` names an identity whose check is deliberately corrupted by a
    sign flip; used to confirm that the checker can fail.  ``opposite_sign``
    checks identity 2 with the opposite overall sign instead.
    """
    f, g, h = defects.get("f"), defects.get("g"), defects.get("h")
    checked = []
    if 1 in which and f is not None:
        for (i,), fv in f.items():
            r = _jmap(coboundary, fv)
            _zero_or_raise(r, "df = 0", (i,))
        checked.append(1)
    if 2 in which and f is not None and g is not None:
        for (j, i), gv in g.items():
            # with f = (xy)z − x(yz) the expansion gives dg = f_j(φ⁰)^⊗3 − φ⁰f_i
            sign = -1 if opposite_sign else 1
            r = _jmap(coboundary, gv)
            r = _jadd(r, _jmap(lambda x: precompose(x, i), f[(j,)]), -sign)
            r = _jadd(r, _jmap(lambda x: push(x, j), f[(i,)]), sign if mutate != 2 else -sign)
            _zero_or_raise(r, "dg = f_j(φ⁰)^⊗3 − φ⁰f_i", (j, i))
        checked.append(2)
    if 3 in which and g is not None and h is not None:
        for (k, j, i), hv in h.items():
            r = _jmap(coboundary, hv)
            r = _jadd(r, _jmap(lambda x: precompose(x, i), g[k, j]))
            r = _jadd(r, g[k, i], -1 if mutate != 3 else 1)
            r = _jadd(r, _jmap(lambda x: push(x, k), g[j, i]))
            _zero_or_raise(r, "dh = −g(φ⁰)^⊗2 + g − φ⁰g", (k, j, i))
        checked.append(3)
    if 4 in which and h is not None:
        for l, k, j, i in cover.chains(4):
            r = _jmap(lambda x: push(x, l), h[k, j, i])
            r = _jadd(r, h[l, j, i], -1 if mutate != 4 else 1)
            r = _jadd(r, h[l, k, i])
            r = _jadd(r, _jmap(lambda x: precompose(x, i), h[l, k, j]), -1)
            _zero_or_raise(r, "φ⁰h − h + h − hφ⁰ = 0", (l, k, j, i))
        checked.append(4)
    if twisted_sigma and defects.get("sigma") is not None:
        s = defects["sigma"]
        for m, l, k, j, i in cover.chains(5):
            r = _jmap(lambda x: push(x, m), s[l, k, j, i])
            r = {a: PolyDiffCochain(x.cover, m, m, 0, x.terms) for a, x in r.items()}
            r = _jadd(r, _resrc(s[m, k, j, i], m), -1 if mutate != 5 else 1)
            r = _jadd(r, _resrc(s[m, l, j, i], m))
            r = _jadd(r, _resrc(s[m, l, k, i], m), -1)
            r = _jadd(r, _resrc(s[m, l, k, j], m))
            _zero_or_raise(r, "five-term twist identity", (m, l, k, j, i))
        checked.append(5)
    return checked


def _resrc(x, s):
    return {a: PolyDiffCochain(c.cover, s, c.tgt, 0, c.terms) for a, c in x.items()}


# random data -------------------------------------------------------------------

def random_cochain(cover, src, tgt, arity, rng, max_order=2, max_degree=2, terms=3, normalized=True, min_order=None):
    """A random polydifferential cochain with small integer coefficients."""
    from itertools import product as iproduct
    ds = cover.dim(src)
    dt = cover.dim(tgt)
    ring_t = cover.ring(tgt)
    lo = min_order if min_order is not None else int(normalized)
    out = {}
    for _ in range(terms):
        slots = []
        for _s in range(arity):
            while True:
                D = tuple(rng.randint(0, max_order) for _ in range(ds))
                if lo <= sum(D) <= max_order:
                    break
            slots.append(D)
        while True:
            e = tuple(rng.randint(-max_degree, max_degree) for _ in range(dt))
            if sum(abs(x) for x in e) <= max_degree and ring_t.is_legal(e):
                break
        c = cover.field(rng.choice([-3, -2, -1, 1, 2, 3]))
        k = (tuple(slots), e)
        out[k] = out.get(k, 0) + c
    return PolyDiffCochain(cover, src, tgt, arity, out)


def random_choice(L, rng, terms=2, max_order=2, max_degree=1, kinds="bct"):
    cover = L.cover
    dimJ = L.ext.dimJ
    b, c, t = {}, {}, {}
    if "b" in kinds:
        for i in cover.ids:
            b[i] = {a: random_cochain(cover, i, i, 2, rng, max_order, max_degree, terms) for a in range(dimJ)}
    if "c" in kinds:
        for (j, i) in cover.chains(2):
            c[j, i] = {a: random_cochain(cover, i, j, 1, rng, max_order, max_degree, terms) for a in range(dimJ)}
    if "t" in kinds and L.twisted:
        for ch in cover.chains(3):
            t[ch] = {a: random_cochain(cover, ch[0], ch[0], 0, rng, 0, max_degree, terms) for a in range(dimJ)}
    return ChoiceData(b, c, t)


__all__ = [
    "CandidateLift", "ChoiceData", "all_defects", "check_identities", "defect_f", "defect_g", "defect_h",
    "defect_sigma", "lift_candidate", "random_choice", "random_cochain", "transform", "updated_f",
    "updated_g", "updated_h",
]
