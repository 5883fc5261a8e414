"""Gluing deformations over fiber products, and functoriality of obstructions."""

from ..algebra.artin import fiber_product, quotient_map
from ..algebra.linalg import EchelonBasis
from ..errors import IncompatibleData, InvalidBaseChange, NotGluable
from .deformation import NCDeformation
from .equivalence import Equivalence, apply_equivalence
from .lift import lift_candidate
from .obstruction import obstructions
from .rcochain import RCochain, compose, inverse_series


def _lift_coeffs(rc, target_R):
    """Move an RCochain to an algebra whose standard basis contains its own."""
    R = rc.R
    pos = [target_R.params.index(p) for p in R.params]
    out = {}
    for u, c in rc.comps.items():
        e = [0] * target_R.nparams
        for k, x in zip(pos, R.basis[u]):
            e[k] = x
        w = target_R.index.get(tuple(e))
        if w is None:
            raise IncompatibleData("basis monomial missing in the larger algebra")
        out[w] = c
    return RCochain(target_R, rc.cover, rc.src, rc.tgt, rc.arity, out)


def _lift_equivalence(eq, R):
    maps = {i: _lift_coeffs(m, R) for i, m in eq.maps.items()}
    rho = None if eq.rho is None else {k: _lift_coeffs(r, R) for k, r in eq.rho.items()}
    return Equivalence(R, eq.cover, maps, rho)


class _Preimage:
    """Solve x in R' from its images (x1, x2) in R1 x R2."""

    def __init__(self, Rp, p1, p2):
        self.Rp = Rp
        self.eb = EchelonBasis()
        for u in range(Rp.dim):
            v = {("1", k): c for k, c in p1.matrix[u].items()}
            v.update({("2", k): c for k, c in p2.matrix[u].items()})
            self.eb.add(v, tag=u)

    def solve(self, x1, x2):
        rhs = {("1", k): c for k, c in x1.items() if c}
        rhs.update({("2", k): c for k, c in x2.items() if c})
        return self.eb.solve(rhs)


def _glue_cochains(a, b, pre, Rp):
    """The R'-cochain with images a (over R1) and b (over R2)."""
    terms = {}
    for side, rc in (("1", a), ("2", b)):
        for u, c in rc.comps.items():
            for key, x in c.terms.items():
                terms.setdefault(key, ({}, {}))[side == "2"][u] = x
    out = {}
    template = next((c for c in list(a.comps.values()) + list(b.comps.values())), None)
    for key, (x1, x2) in terms.items():
        sol = pre.solve(x1, x2)
        if sol is None:
            raise NotGluable("the two deformations disagree over the common quotient")
        for w, x in sol.items():
            if x:
                out.setdefault(w, {})[key] = x
    comps = {w: type(template)(a.cover, a.src, a.tgt, a.arity, t) for w, t in out.items()}
    return RCochain(Rp, a.cover, a.src, a.tgt, a.arity, comps)


def glue(D1, D2, R0, iso=None):
    """A deformation over R1 ×_{R0} R2 restricting to D1 and (up to iso) D2.

    ``iso`` is an Equivalence over R0 from D1|R0 to D2|R0 (identity if None).
    Returns (D', p1, p2) with D'.pushforward(p1) == D1 and
    D'.pushforward(p2) equivalent to D2 through the lifted iso.
    """
    if D1.cover is not D2.cover or D1.twisted != D2.twisted:
        raise NotGluable("deformations of different covers or modes")
    q1 = quotient_map(D1.R, R0)
    q2 = quotient_map(D2.R, R0)
    A0, B0 = D1.pushforward(q1), D2.pushforward(q2)
    if iso is None:
        iso = Equivalence.identity(D1.cover, R0, D1.twisted)
    if not apply_equivalence(A0, iso).same_data(B0):
        raise NotGluable("the given identification is not an equivalence of the truncations")
    Rp, p1, p2 = fiber_product(D1.R, D2.R, R0)
    D2t = D2
    if not iso.is_identity():
        # transport D2 back along the lifted iso so that both truncations agree on the nose
        lifted = _lift_equivalence(iso, D2.R)
        D2t = apply_equivalence(D2, _inverse_from_target(lifted, D2))
        if not D2t.pushforward(q2).same_data(A0):
            raise NotGluable("transported truncations still differ")
    pre = _Preimage(Rp, p1, p2)
    cover = D1.cover
    mult = {i: _glue_cochains(D1.mult[i], D2t.mult[i], pre, Rp) for i in cover.ids}
    glue_ = {k: _glue_cochains(D1.glue[k], D2t.glue[k], pre, Rp) for k in cover.chains(2)}
    twist = None
    if D1.twisted:
        twist = {k: _glue_cochains(D1.twist[k], D2t.twist[k], pre, Rp) for k in cover.chains(3)}
    Dp = NCDeformation(Rp, cover, mult, glue_, twist)
    return Dp, p1, p2


def _inverse_from_target(eq, D):
    """The inverse of an equivalence eq: X -> D, computed from D alone."""
    maps = {i: eq.map_inverse(i) for i in eq.maps}
    rho = None
    if eq.rho is not None:
        # ρ' = ε(ρ)⁻¹ in the algebra of D
        rho = {}
        for (j, i), r in eq.rho.items():
            pulled = compose(eq.maps[j], [r]).with_src(j)
            rho[j, i] = inverse_series(pulled, lambda a, b: D.multiply(j, a, b), D.unit(j))
    return Equivalence(eq.R, eq.cover, maps, rho)


# functoriality -------------------------------------------------------------------

def pushforward(D, hom):
    return D.pushforward(hom)


def j_matrix(beta_p, ext, ext1):
    """β_J: J -> J1 as {a: {a1: coeff}} for β': R' -> R1'."""
    if beta_p.source != ext.source or beta_p.target != ext1.source:
        raise InvalidBaseChange("β' does not map between the two extensions")
    out = {}
    for a, j in enumerate(ext.J):
        img = beta_p(j)
        if ext1.map(img):
            raise InvalidBaseChange("β' does not send J into J1")
        out[a] = ext1.j_coords(img)
    return out


def check_commutes(ext, ext1, beta, beta_p):
    for u in range(ext.source.dim):
        e = {u: ext.source.field(1)}
        if beta(ext.map(e)) != ext1.map(beta_p(e)):
            raise InvalidBaseChange("the small-extension square does not commute")
    return True


def functoriality_check(D, ext, ext1, beta, beta_p, check=True):
    """Compare β_J(ξ) with the classes ξ^(1) of the pushed-forward lift.

    Both reports are computed independently; returns (ok, details).
    """
    check_commutes(ext, ext1, beta, beta_p)
    M = j_matrix(beta_p, ext, ext1)
    rep = obstructions(lift_candidate(D, ext), check)
    rep1 = obstructions(lift_candidate(D.pushforward(beta), ext1), check)
    details = {}
    ok = True
    for stage, cls in rep.classes.items():
        if stage not in rep1.classes:
            # β_J of a vanishing class vanishes, so the second report cannot stop earlier
            ok = False
            details[stage] = "missing downstream"
            continue
        same = cls.map_J(M, ext1.dimJ).equals(rep1.classes[stage])
        details[stage] = same
        ok = ok and same
    for stage in rep1.classes:
        if stage not in rep.classes:
            details[stage] = "downstream only"
    return ok, details


__all__ = ["check_commutes", "functoriality_check", "glue", "j_matrix", "pushforward"]
