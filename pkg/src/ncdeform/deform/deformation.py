"""NC deformations of a covered variety over an Artin algebra.

Chart algebras are R ⊗ A_i as R-modules.  The product on chart i is an
RCochain of arity 2 whose unit component is the commutative product; the
gluing for i < j is an RCochain of arity 1 whose unit component is φ⁰_ji.
Twisted deformations also carry τ_kji as R-valued 0-cochains on chart k.
"""

from ..algebra.artin import ArtinLocalAlgebra, ground_field_algebra
from ..errors import CompatibilityViolated, IncompatibleData, InvalidDeformation
from ..hochschild import PolyDiffCochain, element_cochain, restriction_cochain
from .rcochain import RCochain, change_base, compose, constant, inverse_series, rc_identity, rc_unit


def commutative_product(cover, i):
    z = (0,) * cover.dim(i)
    return PolyDiffCochain(cover, i, i, 2, {((z, z), cover.ring(i).zero_exp): cover.field(1)})


class NCDeformation:
    """Immutable deformation data; see the module docstring."""

    def __init__(self, R, cover, mult, glue, twist=None):
        self.R = R
        self.cover = cover
        self.mult = dict(mult)
        self.glue = dict(glue)
        self.twist = None if twist is None else dict(twist)

    # construction -----------------------------------------------------------
    @classmethod
    def trivial(cls, cover, R=None, twisted=False):
        R = R or ground_field_algebra(cover.field)
        mult = {i: constant(R, commutative_product(cover, i)) for i in cover.ids}
        glue = {(j, i): constant(R, restriction_cochain(cover, j, i)) for j, i in cover.chains(2)}
        twist = None
        if twisted:
            twist = {ch: rc_unit(R, cover, ch[0]) for ch in cover.chains(3)}
        return cls(R, cover, mult, glue, twist)

    @classmethod
    def from_corrections(cls, cover, R, mult=None, glue=None, twist=None, twisted=False):
        """Add corrections {chart: {basis index or name: cochain}} to trivial data."""
        D = cls.trivial(cover, R, twisted or twist is not None)
        m = dict(D.mult)
        for i, comps in (mult or {}).items():
            m[i] = m[i] + RCochain(R, cover, i, i, 2, _index_comps(R, comps))
        g = dict(D.glue)
        for key, comps in (glue or {}).items():
            g[key] = g[key] + RCochain(R, cover, key[1], key[0], 1, _index_comps(R, comps))
        t = None if D.twist is None else dict(D.twist)
        for key, comps in (twist or {}).items():
            t[key] = t[key] + RCochain(R, cover, key[0], key[0], 0, _index_comps(R, comps))
        return cls(R, cover, m, g, t)

    @property
    def twisted(self):
        return self.twist is not None

    @property
    def field(self):
        return self.cover.field

    # products and maps ------------------------------------------------------
    def identity(self, i):
        return rc_identity(self.R, self.cover, i)

    def unit(self, k, src=None):
        return rc_unit(self.R, self.cover, k, src)

    def multiply(self, k, a, b, keep=None, cache=None):
        """a ×_k b for RCochains a, b with target k and a common source."""
        return compose(self.mult[k], [a, b], keep, cache)

    def gluing(self, j, i):
        if i == j:
            return self.identity(i)
        return self.glue[j, i]

    def tau(self, k, j, i):
        if self.twist is None or len({i, j, k}) < 3:
            return self.unit(k)
        return self.twist[k, j, i]

    def tau_inverse(self, k, j, i):
        t = self.tau(k, j, i)
        return inverse_series(t, lambda a, b: self.multiply(k, a, b), self.unit(k))

    def conjugate(self, k, tau, tau_inv, x, keep=None, cache=None):
        """(τ⁻¹ × x) × τ with x an RCochain of target k."""
        s = x.src
        left = self.multiply(k, tau_inv.with_src(s), x, None, cache)
        return self.multiply(k, left, tau.with_src(s), keep, cache)

    def apply_gluing(self, j, i, x, keep=None):
        return compose(self.gluing(j, i), [x], keep)

    # validity ---------------------------------------------------------------
    def defects(self, keep=None):
        """Yield (kind, chain, RCochain) for every nonzero defining-identity failure."""
        cover = self.cover
        for i in cover.ids:
            mu, e = self.mult[i], self.identity(i)
            left = compose(mu, [mu, e], keep)
            right = compose(mu, [e, mu], keep)
            r = left - right
            if r:
                yield "associativity", (i,), r
            if mu.comps.get(0) != commutative_product(cover, i):
                yield "reduction", (i,), mu
        for j, i in cover.chains(2):
            phi = self.glue[j, i]
            r = compose(phi, [self.mult[i]], keep) - compose(self.mult[j], [phi, phi], keep)
            if r:
                yield "multiplicativity", (j, i), r
            if phi.comps.get(0) != restriction_cochain(cover, j, i):
                yield "reduction", (j, i), phi
        for k, j, i in cover.chains(3):
            lhs = compose(self.glue[k, j], [self.glue[j, i]], keep)
            rhs = self.glue[k, i]
            if self.twisted:
                rhs = self.conjugate(k, self.tau(k, j, i), self.tau_inverse(k, j, i), rhs, keep)
            r = lhs - rhs
            if keep is not None:
                r = RCochain(r.R, r.cover, r.src, r.tgt, r.arity, {u: c for u, c in r.comps.items() if u in keep})
            if r:
                yield "transitivity", (k, j, i), r
        if self.twisted:
            for ch in cover.chains(3):
                t = self.twist[ch]
                if t.comps.get(0) != element_cochain(cover, ch[0], "1"):
                    yield "twist-unit", ch, t
            for l, k, j, i in cover.chains(4):
                r = twist_defect(self, l, k, j, i, keep)
                if r:
                    yield "twist-compatibility", (l, k, j, i), r

    def check(self, keep=None):
        for kind, chain, r in self.defects(keep):
            if kind == "twist-compatibility":
                raise CompatibilityViolated(f"twist compatibility fails on {chain}")
            raise InvalidDeformation(f"{kind} fails on {chain}")
        return True

    def is_valid(self, keep=None):
        for _ in self.defects(keep):
            return False
        return True

    # base change ------------------------------------------------------------
    def pushforward(self, hom):
        if hom.source != self.R:
            raise IncompatibleData("base change does not start at the deformation's base")
        mult = {i: change_base(c, hom) for i, c in self.mult.items()}
        glue = {k: change_base(c, hom) for k, c in self.glue.items()}
        twist = None if self.twist is None else {k: change_base(c, hom) for k, c in self.twist.items()}
        return NCDeformation(hom.target, self.cover, mult, glue, twist)

    def same_data(self, other):
        if self.cover is not other.cover or self.twisted != other.twisted:
            return False
        if self.R.basis != other.R.basis:
            return False
        keys = [(self.mult, other.mult), (self.glue, other.glue)]
        if self.twisted:
            keys.append((self.twist, other.twist))
        return all(a.keys() == b.keys() and all(a[k] == b[k] for k in a) for a, b in keys)

    def __eq__(self, other):
        return isinstance(other, NCDeformation) and self.same_data(other)

    def __repr__(self):
        return (f"NCDeformation({self.cover.name}, base dim {self.R.dim}, "
                f"{'twisted' if self.twisted else 'untwisted'})")

    # serialization ----------------------------------------------------------
    def to_json(self):
        R = self.R

        def block(rc):
            return {R.basis_name(u): c.to_json() for u, c in sorted(rc.corrections().items())}

        out = {
            "base": R.to_json(),
            "variety": self.cover.name,
            "mode": "twisted" if self.twisted else "untwisted",
            "mult": {i: block(self.mult[i]) for i in self.cover.ids},
            "glue": [{"chain": list(k), "comps": block(self.glue[k])} for k in self.cover.chains(2)],
        }
        if self.twisted:
            out["twist"] = [{"chain": list(k), "comps": block(self.twist[k])} for k in self.cover.chains(3)]
        return out

    @classmethod
    def from_json(cls, data, cover=None):
        from ..geometry import builtin_variety
        if cover is None:
            if "cover" in data:
                from ..geometry import Cover
                cover = Cover.from_json(data["cover"])
            else:
                cover = builtin_variety(data["variety"])
        R = ArtinLocalAlgebra.from_json(data["base"], cover.field)

        def comps(block):
            return {name: PolyDiffCochain.from_json(cover, c) for name, c in block.items()}

        twisted = data.get("mode", "untwisted") == "twisted"
        return cls.from_corrections(
            cover, R,
            mult={i: comps(b) for i, b in data.get("mult", {}).items()},
            glue={tuple(g["chain"]): comps(g["comps"]) for g in data.get("glue", [])},
            twist={tuple(t["chain"]): comps(t["comps"]) for t in data.get("twist", [])} if twisted else None,
            twisted=twisted)


def _index_comps(R, comps):
    out = {}
    for u, c in comps.items():
        if isinstance(u, str):
            elem = R.normal_form(u)
            if len(elem) != 1 or next(iter(elem.values())) != 1:
                raise IncompatibleData(f"{u!r} is not a basis monomial of the base")
            u = next(iter(elem))
        if u == 0:
            raise IncompatibleData("corrections must lie in the maximal ideal")
        out[u] = out[u] + c if u in out else c
    return out


def twist_defect(D, l, k, j, i, keep=None):
    """τ_lji τ_lkj − τ_lki φ_lk(τ_kji) as an R-valued 0-cochain on chart l."""
    a = D.multiply(l, D.tau(l, j, i), D.tau(l, k, j), keep)
    phi_t = compose(D.gluing(l, k), [D.tau(k, j, i)]).with_src(l)
    b = D.multiply(l, D.tau(l, k, i), phi_t, keep)
    return a - b


def moyal(cover=None, order=1, R=None, param="t"):
    """The Moyal product Σ t^n/n! ∂_x^n ⊗ ∂_y^n on affine(2), truncated."""
    from ..algebra.artin import truncation
    from ..geometry import affine
    cover = cover or affine(2)
    if cover.dim("A") != 2 or len(cover.ids) != 1:
        raise IncompatibleData("the Moyal product is defined here on affine(2)")
    R = R or truncation([param], order, cover.field)
    comps = {}
    zero = cover.ring("A").zero_exp
    for n in range(1, R.order + 1):
        u = R.index.get((n,) if R.nparams == 1 else None)
        if u is None:
            continue
        coeff = cover.field.inv_factorial(n)
        comps[u] = PolyDiffCochain(cover, "A", "A", 2, {(((n, 0), (0, n)), zero): coeff})
    return NCDeformation.from_corrections(cover, R, mult={"A": comps})


def describe(D):
    """Human-readable listing of the corrections."""
    lines = [repr(D)]
    R = D.R
    for i in D.cover.ids:
        for u, c in sorted(D.mult[i].corrections().items()):
            lines.append(f"  mult[{i}] {R.basis_name(u)}: {c}")
    for k in D.cover.chains(2):
        for u, c in sorted(D.glue[k].corrections().items()):
            lines.append(f"  glue[{','.join(k)}] {R.basis_name(u)}: {c}")
    if D.twisted:
        for k in D.cover.chains(3):
            for u, c in sorted(D.twist[k].corrections().items()):
                lines.append(f"  twist[{','.join(k)}] {R.basis_name(u)}: {c}")
    return "\n".join(lines)


__all__ = ["NCDeformation", "commutative_product", "describe", "moyal", "twist_defect"]
