"""Twist calculus: compatibility checks, change of twist, twist coboundaries."""

from ..cech import OrderedCochain, cech_d, is_coboundary
from ..errors import CompatibilityViolated, IdentityViolation, IncompatibleData, NotClosed
from ..geometry import PolyVectorSection
from ..hochschild import PolyDiffCochain
from .deformation import twist_defect
from .lift import ChoiceData, defect_h, defect_sigma, transform


def check_twist(D, keep=None):
    """Raise CompatibilityViolated unless τ is a valid twist for D."""
    if not D.twisted:
        raise IncompatibleData("not a twisted deformation")
    cover = D.cover
    one = D.unit
    for ch, t in D.twist.items():
        if t.comps.get(0) != one(ch[0]).comps[0]:
            raise CompatibilityViolated(f"τ_{ch} is not 1 modulo the maximal ideal")
        inv = D.tau_inverse(*ch)
        if D.multiply(ch[0], t, inv) != one(ch[0]) or D.multiply(ch[0], inv, t) != one(ch[0]):
            raise CompatibilityViolated(f"geometric-series inverse of τ_{ch} fails")
    for ch in cover.chains(4):
        if twist_defect(D, *ch, keep):
            raise CompatibilityViolated(f"τ_lji τ_lkj ≠ τ_lki φ_lk(τ_kji) on {ch}")
    return True


def _as_sections(t, cover, level):
    vals = {}
    for ch, c in t.items():
        if isinstance(c, PolyVectorSection):
            vals[ch] = c
        elif c:
            vals[ch] = PolyVectorSection(cover, ch[0], 0, {((), e): a for (_s, e), a in c.terms.items()})
    return OrderedCochain(level, vals)


def _as_elements(sections):
    return {ch: PolyDiffCochain(s.cover, ch[0], ch[0], 0, {((), e): a for (_L, e), a in s.terms.items()})
            for ch, s in sections.items()}


def twist_cochain_d(t, cover, level=2):
    """Čech coboundary of {chain: 0-cochain}; at level 2,
    (δt)_lkji = −φ⁰_lk(t_kji) + t_lji − t_lki + t_lkj."""
    return _as_elements(cech_d(_as_sections(t, cover, level), cover.poset).values)


def change_twist(L, t, check=True):
    """Add J-valued t_kji to the twists of a candidate lift.

    Verifies σ̃ − σ = δt exactly and, if δt = 0, that the transitivity
    defects (hence the gluing of algebras) are bit-identical.  Returns the new lift.
    """
    if not L.twisted:
        raise IncompatibleData("not a twisted lift")
    cover = L.cover
    new = transform(L, ChoiceData(t=t))
    if not check:
        return new
    labels = sorted({a for vals in t.values() for a in vals})
    closed = True
    for a in labels:
        dt = twist_cochain_d({ch: vals[a] for ch, vals in t.items() if a in vals}, cover)
        closed = closed and not dt
        for ch in cover.chains(4):
            diff = _sub(defect_sigma(new, *ch).get(a), defect_sigma(L, *ch).get(a), cover, ch[0])
            if diff != _sub(dt.get(ch), None, cover, ch[0]):
                raise IdentityViolation("σ̃ − σ differs from the Čech coboundary of t", ch)
    if closed:
        for ch in cover.chains(3):
            if defect_h(L, *ch) != defect_h(new, *ch):
                raise IdentityViolation("closed twist change altered the gluing defect", ch)
    return new


def _sub(a, b, cover, chart):
    zero = PolyDiffCochain(cover, chart, chart, 0)
    a = a if a is not None else zero
    b = b if b is not None else zero
    return PolyDiffCochain(cover, chart, chart, 0, (a - b).terms)


def twist_coboundary(t, cover):
    """s with t_kji = φ⁰_kj(s_ji) − s_ki + s_kj, or None if t is not a coboundary."""
    c = _as_sections(t, cover, 2)
    if cech_d(c, cover.poset):
        raise NotClosed("twist cochain is not closed")
    s = is_coboundary(c, cover, 0, check=False)
    if s is None:
        return None
    return _as_elements(s.values)


__all__ = ["change_twist", "check_twist", "twist_coboundary", "twist_cochain_d"]
