"""Staged obstruction classes and extension over a small extension.

Stages, each run only if the previous class vanishes:

    xi30  H⁰(∧³T)  from the associators f_i
    xi21  H¹(∧²T)  from the multiplicativity defects g_ji
    xi03  H³(O)    from the twist defects σ_lkji (twisted mode only)
    xi12  H²(T)    from the transitivity defects h_kji

Each vanishing class is used to repair the lift (products, then gluings,
then twists, then gluings again); the repairs are recorded in the report.
"""

from ..cech import CechClass, OrderedCochain, cech_d, class_coordinates, is_coboundary
from ..errors import IdentityViolation, NotClosed, Obstructed
from ..geometry import PolyVectorSection
from ..hochschild import PolyDiffCochain, hkr_class, lift_polyvector, solve_coboundary_ex
from .lift import (ChoiceData, _jadd, all_defects, check_identities, defect_h, defect_sigma, lift_candidate,
                   transform, updated_g, updated_h)

STAGES = ("xi30", "xi21", "xi03", "xi12")
CLASS_TYPE = {"xi30": (3, 0), "xi21": (2, 1), "xi03": (0, 3), "xi12": (1, 2)}


class JClass:
    """An element Σ_a j_a ⊗ [rep_a] of J ⊗ H^q(∧^p T)."""

    def __init__(self, cover, p, q, reps, dimJ):
        self.cover = cover
        self.p = p
        self.q = q
        self.reps = {a: r for a, r in reps.items() if r}
        self.dimJ = dimJ

    def component(self, a):
        return CechClass(self.cover, self.p, self.reps.get(a, OrderedCochain(self.q)), check=False)

    def is_zero(self):
        return all(self.component(a).is_zero() for a in self.reps)

    def nonzero_components(self):
        return [a for a in sorted(self.reps) if not self.component(a).is_zero()]

    def primitives(self):
        out = {}
        for a, r in self.reps.items():
            b = is_coboundary(r, self.cover, self.p, check=False)
            if b is None:
                return None
            out[a] = b
        return out

    def coordinates(self):
        return {a: class_coordinates(r, self.cover, self.p) for a, r in sorted(self.reps.items())}

    def map_J(self, matrix, dimJ1):
        """Push along a linear map J -> J1 given as {a: {a1: coeff}}."""
        reps = {}
        for a, r in self.reps.items():
            for a1, x in matrix.get(a, {}).items():
                term = r.scale(x)
                reps[a1] = reps[a1] + term if a1 in reps else term
        return JClass(self.cover, self.p, self.q, reps, dimJ1)

    def equals(self, other):
        if (self.p, self.q) != (other.p, other.q):
            return False
        for a in set(self.reps) | set(other.reps):
            d = self.reps.get(a, OrderedCochain(self.q)) - other.reps.get(a, OrderedCochain(other.q))
            if d and is_coboundary(d, self.cover, self.p, check=False) is None:
                return False
        return True

    def summary(self):
        return {"type": f"H^{self.q}(wedge^{self.p} T)", "zero": self.is_zero(),
                "nonzero_J_components": self.nonzero_components()}

    def __repr__(self):
        return f"JClass(p={self.p}, q={self.q}, zero={self.is_zero()})"


class ObstructionReport:
    def __init__(self, stage, classes, witnesses, bounds, repaired=None):
        self.stage = stage  # first nonzero class, or "complete"
        self.classes = classes
        self.witnesses = witnesses
        self.bounds = bounds
        self.repaired = repaired

    @property
    def unobstructed(self):
        return self.stage == "complete"

    def to_json(self):
        return {
            "stage": self.stage,
            "classes": {k: v.summary() for k, v in self.classes.items()},
            "bounds": self.bounds,
        }

    def __repr__(self):
        return f"ObstructionReport(stage={self.stage}, classes={list(self.classes)})"


def _section_of_element(c):
    """A J-valued 0-cochain as a section of O on its target chart."""
    return PolyVectorSection(c.cover, c.tgt, 0, {((), e): a for ((), e), a in c.terms.items()})


def _element_of_section(sec, src=None):
    return PolyDiffCochain(sec.cover, src or sec.chart, sec.chart, 0,
                           {((), e): a for ((), e), a in sec.terms.items()})


def _levels(jvals_by_chain, level, convert, dimJ):
    reps = {}
    for chain, vals in jvals_by_chain.items():
        for a, c in vals.items():
            v = convert(c)
            if v:
                reps.setdefault(a, {})[chain] = v
    return {a: OrderedCochain(level, vals) for a, vals in reps.items()}


def _solve_all(jvals_by_chain, bounds_log, key, bounds=None):
    out = {}
    bounds = bounds or {}
    for chain, vals in jvals_by_chain.items():
        for a, c in vals.items():
            if not c:
                continue
            B, used = solve_coboundary_ex(c, bounds.get("max_order"), bounds.get("max_degree"))
            if B is None:
                raise IdentityViolation(f"class vanished but {key} on {chain} has nonzero HKR class", chain)
            out.setdefault(chain if len(chain) > 1 else chain[0], {})[a] = B
            if used:
                prev = bounds_log.setdefault(key, 0)
                bounds_log[key] = max(prev, used.get("max_order") or 0)
    return out


def obstructions(L, check=True, bounds=None):
    """Run the staged obstruction calculus on a candidate lift."""
    cover = L.cover
    dimJ = L.ext.dimJ
    classes, witnesses, used = {}, {}, {}
    kinds = ("f", "g", "h") if check else ("f", "g")
    defects = all_defects(L, kinds)
    if check:
        check_identities(defects, cover, which=(1, 2, 3, 4) if not L.twisted else (1, 2))
    f, g = defects["f"], defects["g"]
    witnesses["f"], witnesses["g"] = f, g

    # stage xi30
    reps = _levels(f, 0, lambda c: hkr_class(c), dimJ)
    classes["xi30"] = JClass(cover, 3, 0, reps, dimJ)
    if not classes["xi30"].is_zero():
        return ObstructionReport("xi30", classes, witnesses, used)
    b1 = _solve_all(f, used, "b")
    g1 = updated_g(g, b1, {}, cover)
    if check:
        zero_f = {k: {} for k in f}
        check_identities({"f": zero_f, "g": g1}, cover, which=(2,))

    # stage xi21
    reps = _levels(g1, 1, lambda c: hkr_class(c), dimJ)
    classes["xi21"] = JClass(cover, 2, 1, reps, dimJ)
    prim = classes["xi21"].primitives()
    if prim is None:
        return ObstructionReport("xi21", classes, witnesses, used)
    b2 = {}
    for a, beta in prim.items():
        for (i,), sec in beta.items():
            b2.setdefault(i, {})[a] = lift_polyvector(sec)
    g2 = updated_g(g1, b2, {}, cover)
    c1 = _solve_all(g2, used, "c")
    g3 = updated_g(g2, {}, c1, cover)
    if any(v for vals in g3.values() for v in vals.values()):
        raise IdentityViolation("gluing repair left a multiplicativity defect")
    b = {}
    for src in (b1, b2):
        for i, vals in src.items():
            b[i] = _jadd(b.get(i, {}), vals)
    L2 = transform(L, ChoiceData(b=b, c=c1))
    witnesses["b"], witnesses["c"] = b, c1

    # stage xi03 (twisted)
    t = {}
    if L.twisted:
        sigma = {ch: defect_sigma(L2, *ch) for ch in cover.chains(4)}
        witnesses["sigma"] = sigma
        if check:
            check_identities({"sigma": sigma}, cover, which=(), twisted_sigma=True)
        reps = _levels(sigma, 3, _section_of_element, dimJ)
        classes["xi03"] = JClass(cover, 0, 3, reps, dimJ)
        prim = classes["xi03"].primitives()
        if prim is None:
            return ObstructionReport("xi03", classes, witnesses, used)
        for a, zeta in prim.items():
            for chain, sec in zeta.items():
                t.setdefault(chain, {})[a] = -_element_of_section(sec)
        L2 = transform(L2, ChoiceData(t=t))
        witnesses["t"] = t
        if check:
            for ch in cover.chains(4):
                if defect_sigma(L2, *ch):
                    raise IdentityViolation("twist repair left a compatibility defect", ch)

    # stage xi12
    h = {ch: defect_h(L2, *ch) for ch in cover.chains(3)}
    witnesses["h"] = h
    if check:
        zero_g = {k: {} for k in cover.chains(2)}
        check_identities({"g": zero_g, "h": h}, cover, which=(3, 4))
    reps = _levels(h, 2, lambda c: hkr_class(c), dimJ)
    classes["xi12"] = JClass(cover, 1, 2, reps, dimJ)
    prim = classes["xi12"].primitives()
    if prim is None:
        return ObstructionReport("xi12", classes, witnesses, used)
    c2 = {}
    for a, gamma in prim.items():
        for (j, i), sec in gamma.items():
            c2.setdefault((j, i), {})[a] = -lift_polyvector(sec, src=i)
    h2 = updated_h(h, c2)
    if any(v for vals in h2.values() for v in vals.values()):
        raise IdentityViolation("transitivity repair left a defect")
    L3 = transform(L2, ChoiceData(c=c2))
    witnesses["c2"] = c2
    return ObstructionReport("complete", classes, witnesses, used, L3)


class T1Choice:
    """A tangent vector: J-indexed global bivectors, 1-cocycles of vector
    fields and (twisted) 2-cocycles of functions."""

    def __init__(self, bivectors=None, vectors=None, functions=None):
        self.bivectors = dict(bivectors or {})
        self.vectors = dict(vectors or {})
        self.functions = dict(functions or {})

    def is_empty(self):
        return not (self.bivectors or self.vectors or self.functions)

    def choice_data(self, cover):
        b, c, t = {}, {}, {}
        for a, beta in self.bivectors.items():
            if cech_d(beta, cover.poset):
                raise NotClosed("bivector choice is not a global section")
            for (i,), sec in beta.items():
                b.setdefault(i, {})[a] = lift_polyvector(sec)
        for a, gamma in self.vectors.items():
            if cech_d(gamma, cover.poset):
                raise NotClosed("vector-field choice is not a Čech cocycle")
            for (j, i), sec in gamma.items():
                c.setdefault((j, i), {})[a] = lift_polyvector(sec, src=i)
        for a, zeta in self.functions.items():
            if cech_d(zeta, cover.poset):
                raise NotClosed("twist choice is not a Čech cocycle")
            for chain, sec in zeta.items():
                t.setdefault(chain, {})[a] = _element_of_section(sec)
        return ChoiceData(b, c, t)


def extend_with_report(D, ext, choice=None, check=True, validate=True, bounds=None):
    L = lift_candidate(D, ext)
    report = obstructions(L, check, bounds)
    if not report.unobstructed:
        raise Obstructed(report)
    L = report.repaired
    if choice is not None and not choice.is_empty():
        if choice.functions and not L.twisted:
            raise NotClosed("H²(O) choices need twisted mode")
        L = transform(L, choice.choice_data(L.cover))
    Dp = L.deformation
    if validate:
        Dp.check(keep=L.keep)
    return Dp, report


def extend(D, ext, choice=None, check=True, validate=True, bounds=None):
    """An extension of D over ext.source; raises Obstructed if impossible."""
    return extend_with_report(D, ext, choice, check, validate, bounds)[0]


__all__ = ["JClass", "ObstructionReport", "STAGES", "T1Choice", "extend", "extend_with_report", "obstructions"]
