"""Equivalences of deformations and their order-by-order solution.

An equivalence D -> D' is a family ε_i = 1 + e_i of R-linear chart maps
(e_i with coefficients in M) and, in twisted mode, units ρ_ji = 1 + s_ji
of the chart-j algebra of D, such that

    ×'_i       = ε_i ∘ ×_i ∘ (ε_i⁻¹ ⊗ ε_i⁻¹)
    φ'_ji      = ε_j ∘ (ρ_ji⁻¹ φ_ji(·) ρ_ji) ∘ ε_i⁻¹
    τ'_kji     = ε_k(ρ_ki⁻¹ τ_kji φ_kj(ρ_ji) ρ_kj)

At the level of a single small extension this gives b' − b = −de and
c' − c = e_j φ⁰ − φ⁰ e_i.
"""

from ..cech import OrderedCochain, is_coboundary
from ..errors import IdentityViolation, IncompatibleData, NotClosed
from ..geometry import PolyVectorSection
from ..hochschild import coboundary, hkr_class, lift_polyvector, precompose, push, solve_coboundary
from .deformation import NCDeformation
from .rcochain import RCochain, compose, inverse_series, rc_identity, rc_unit


class Equivalence:
    """Chart maps ε_i (arity-1 RCochains) and optional twist units ρ_ji."""

    def __init__(self, R, cover, maps, rho=None):
        self.R = R
        self.cover = cover
        self.maps = dict(maps)
        self.rho = None if rho is None else dict(rho)

    @classmethod
    def identity(cls, cover, R, twisted=False):
        maps = {i: rc_identity(R, cover, i) for i in cover.ids}
        rho = {(j, i): rc_unit(R, cover, j) for j, i in cover.chains(2)} if twisted else None
        return cls(R, cover, maps, rho)

    @classmethod
    def from_corrections(cls, cover, R, e=None, s=None, twisted=None):
        """ε_i = 1 + Σ_u u⊗e_i[u], ρ_ji = 1 + Σ_u u⊗s_ji[u]."""
        twisted = bool(s) if twisted is None else twisted
        eq = cls.identity(cover, R, twisted)
        for i, comps in (e or {}).items():
            eq.maps[i] = eq.maps[i] + RCochain(R, cover, i, i, 1, _no_unit(comps))
        for (j, i), comps in (s or {}).items():
            eq.rho[j, i] = eq.rho[j, i] + RCochain(R, cover, j, j, 0, _no_unit(comps))
        return eq

    @property
    def twisted(self):
        return self.rho is not None

    @property
    def e(self):
        return {i: m.corrections() for i, m in self.maps.items() if m.corrections()}

    @property
    def s(self):
        if self.rho is None:
            return {}
        return {k: r.corrections() for k, r in self.rho.items() if r.corrections()}

    def is_identity(self):
        return not self.e and not self.s

    def map_inverse(self, i):
        cache = self.__dict__.setdefault("_inv", {})
        if i not in cache:
            m = self.maps[i]
            cache[i] = inverse_series(m, lambda a, b: compose(a, [b]), rc_identity(self.R, self.cover, i))
        return cache[i]

    def __repr__(self):
        return f"Equivalence({len(self.e)} chart maps, {len(self.s)} twist units)"


def _no_unit(comps):
    if 0 in comps:
        raise IncompatibleData("equivalence corrections must lie in the maximal ideal")
    return comps


def _rho(D, eq, j, i):
    if eq.rho is None or (j, i) not in eq.rho:
        return D.unit(j)
    return eq.rho[j, i]


def apply_equivalence(D, eq):
    """The deformation D' that eq identifies D with."""
    if eq.R != D.R or eq.cover is not D.cover:
        raise IncompatibleData("equivalence and deformation live over different data")
    if eq.twisted and not D.twisted and eq.s:
        raise IncompatibleData("twist units need a twisted deformation")
    cover = D.cover
    mult = {}
    for i in cover.ids:
        inv = eq.map_inverse(i)
        mult[i] = compose(eq.maps[i], [compose(D.mult[i], [inv, inv])])
    glue = {}
    for j, i in cover.chains(2):
        x = compose(D.glue[j, i], [eq.map_inverse(i)])
        rho = _rho(D, eq, j, i)
        if rho.corrections():
            rho_inv = inverse_series(rho, lambda a, b: D.multiply(j, a, b), D.unit(j))
            x = D.conjugate(j, rho, rho_inv, x)
        glue[j, i] = compose(eq.maps[j], [x])
    twist = None
    if D.twisted:
        twist = {}
        for k, j, i in cover.chains(3):
            r_ki = _rho(D, eq, k, i)
            r_ki_inv = inverse_series(r_ki, lambda a, b: D.multiply(k, a, b), D.unit(k))
            moved = compose(D.glue[k, j], [_rho(D, eq, j, i)]).with_src(k)
            x = D.multiply(k, r_ki_inv, D.tau(k, j, i))
            x = D.multiply(k, x, moved)
            x = D.multiply(k, x, _rho(D, eq, k, j))
            twist[k, j, i] = compose(eq.maps[k], [x]).with_src(k)
    return NCDeformation(D.R, cover, mult, glue, twist)


def compose_equivalences(first, second, D):
    """The equivalence 'second after first', both starting from D and D' = first(D)."""
    cover = D.cover
    maps = {i: compose(second.maps[i], [first.maps[i]]) for i in cover.ids}
    rho = None
    if first.twisted or second.twisted:
        rho = {}
        for j, i in cover.chains(2):
            r2 = _rho(D, second, j, i)
            pulled = compose(first.map_inverse(j), [r2]).with_src(j)
            rho[j, i] = D.multiply(j, _rho(D, first, j, i), pulled)
    return Equivalence(D.R, cover, maps, rho)


def inverse_equivalence(eq, D):
    """The equivalence D' -> D for D' = eq(D)."""
    cover = D.cover
    maps = {i: eq.map_inverse(i) for i in cover.ids}
    rho = None
    if eq.twisted:
        rho = {}
        for j, i in cover.chains(2):
            r = _rho(D, eq, j, i)
            r_inv = inverse_series(r, lambda a, b: D.multiply(j, a, b), D.unit(j))
            rho[j, i] = compose(eq.maps[j], [r_inv]).with_src(j)
    return Equivalence(D.R, cover, maps, rho)


def equivalent(D1, D2):
    """An Equivalence with apply_equivalence(D1, eq) == D2, or None.

    Solved greedily through the M-adic filtration: at degree n the new
    components of ε (and ρ) are determined by linear problems; the freedom
    left at each degree is fixed by the minimal-norm choice of the solvers.
    """
    if D1.cover is not D2.cover or D1.R != D2.R or D1.twisted != D2.twisted:
        raise IncompatibleData("deformations over different bases, covers or modes")
    R, cover = D1.R, D1.cover
    twisted = D1.twisted
    total = Equivalence.identity(cover, R, twisted)
    cur = D1
    for n in range(1, R.order + 1):
        us = [u for u in range(R.dim) if R.degrees[u] == n]
        if not us:
            continue
        E = {i: {} for i in cover.ids}
        for i in cover.ids:
            for u in us:
                dm = D2.mult[i][u] - cur.mult[i][u]
                if not dm:
                    continue
                if coboundary(dm):
                    return None
                B = solve_coboundary(dm, check=False)
                if B is None:
                    return None
                E[i][u] = -B
        for u in us:
            vals = {}
            for j, i in cover.chains(2):
                r = D2.glue[j, i][u] - cur.glue[j, i][u]
                if u in E[j]:
                    r = r - precompose(E[j][u], i)
                if u in E[i]:
                    r = r + push(E[i][u], j)
                if not r:
                    continue
                if coboundary(r):
                    return None
                v = hkr_class(r, check=False)
                if lift_polyvector(v, src=i) != r:
                    return None
                vals[j, i] = v
            if not vals:
                continue
            try:
                xi = is_coboundary(OrderedCochain(1, vals), cover, 1)
            except NotClosed:
                return None
            if xi is None:
                return None
            for (i,), sec in xi.items():
                d = lift_polyvector(sec)
                E[i][u] = E[i][u] + d if u in E[i] else d
        step = Equivalence.from_corrections(cover, R, e={i: c for i, c in E.items() if c}, twisted=twisted)
        if not step.is_identity():
            nxt = apply_equivalence(cur, step)
            total = compose_equivalences(total, step, D1)
            cur = nxt
        if twisted:
            S = {}
            for u in us:
                vals = {}
                for ch in cover.chains(3):
                    r = D2.twist[ch][u] - cur.twist[ch][u]
                    if r:
                        vals[ch] = PolyVectorSection(cover, ch[0], 0, {((), e): a for ((), e), a in r.terms.items()})
                if not vals:
                    continue
                try:
                    s = is_coboundary(OrderedCochain(2, vals), cover, 0)
                except NotClosed:
                    return None
                if s is None:
                    return None
                for (j, i), sec in s.items():
                    S.setdefault((j, i), {})[u] = _element(sec)
            if S:
                step = Equivalence.from_corrections(cover, R, s=S, twisted=True)
                nxt = apply_equivalence(cur, step)
                total = compose_equivalences(total, step, D1)
                cur = nxt
        for kind, a, b in _blocks(cur, D2):
            if any(R.degrees[u] <= n and a[u] != b[u] for u in set(a.comps) | set(b.comps)):
                raise IdentityViolation(f"equivalence solve left a {kind} mismatch at degree {n}")
    if not apply_equivalence(D1, total).same_data(D2):
        raise IdentityViolation("composed equivalence does not reproduce the target")
    return total


def _element(sec):
    from ..hochschild import PolyDiffCochain
    return PolyDiffCochain(sec.cover, sec.chart, sec.chart, 0, {((), e): a for (_L, e), a in sec.terms.items()})


def _blocks(D1, D2):
    for i in D1.cover.ids:
        yield "product", D1.mult[i], D2.mult[i]
    for k in D1.cover.chains(2):
        yield "gluing", D1.glue[k], D2.glue[k]
    if D1.twisted:
        for k in D1.cover.chains(3):
            yield "twist", D1.twist[k], D2.twist[k]


def are_equivalent(D1, D2):
    return equivalent(D1, D2) is not None


__all__ = ["Equivalence", "apply_equivalence", "are_equivalent", "compose_equivalences", "equivalent",
           "inverse_equivalence"]
