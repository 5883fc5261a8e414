"""Randomized verification suites shared by the command line and the tests.

Each suite takes a seed and size parameters and returns a SuiteResult; a
failing check stops the suite and records a counterexample.
"""

import random
import time
from itertools import combinations, product

import numpy as np

from .algebra.artin import ArtinHom, ArtinLocalAlgebra, fiber_product, ground_field_algebra, small_extension, truncation
from .cech import OrderedCochain, cech_d, extend_Sn, sheaf_cohomology, total_coboundary
from .errors import IdentityViolation, NCDefError
from .geometry import PolyVectorSection, Poset, affine, builtin_variety, proj
from .hochschild import coboundary, evaluate, hkr_class, lift_polyvector
from .deform.deformation import NCDeformation, moyal
from .deform.equivalence import Equivalence, apply_equivalence, equivalent
from .deform.gluing import functoriality_check, glue
from .deform.lift import (_jadd, all_defects, check_identities, lift_candidate, random_choice, random_cochain, transform,
                          updated_f, updated_g, updated_h)
from .deform.obstruction import T1Choice, extend, obstructions
from .deform.twist import change_twist, check_twist, twist_coboundary, twist_cochain_d


class SuiteResult:
    def __init__(self, name, seed):
        self.name = name
        self.seed = seed
        self.ok = True
        self.checked = 0
        self.counterexample = None
        self.notes = {}
        self._t0 = time.perf_counter()
        self.elapsed = 0.0

    def fail(self, where, message):
        self.ok = False
        self.counterexample = {"where": _jsonable(where), "message": str(message)}

    def done(self):
        self.elapsed = time.perf_counter() - self._t0
        return self

    def to_json(self):
        return {"suite": self.name, "seed": self.seed, "ok": self.ok, "checked": self.checked,
                "counterexample": self.counterexample, "notes": _jsonable(self.notes)}

    def __repr__(self):
        return f"SuiteResult({self.name}, ok={self.ok}, checked={self.checked})"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


# hochschild ------------------------------------------------------------------------

def hochschild_suite(seed=1, n_cochains=200, n_hkr=100):
    """d∘d = 0 and hkr∘d = 0 on random polydifferential cochains."""
    res = SuiteResult("hochschild", seed)
    rng = random.Random(seed)
    covers = [affine(2), affine(3), proj(2)]
    for k in range(n_cochains + n_hkr):
        X = covers[k % len(covers)]
        src = rng.choice(X.ids)
        tgt = rng.choice([j for j in X.ids if j == src or X.lt(src, j)])
        p = rng.randint(0, 3)
        c = random_cochain(X, src, tgt, p, rng, max_order=2, max_degree=3, terms=4, normalized=False)
        dc = coboundary(c)
        if k < n_cochains:
            if coboundary(dc):
                res.fail((X.name, src, tgt, p), "d(d c) != 0")
                return res.done()
        elif hkr_class(dc, check=False):
            res.fail((X.name, src, tgt, p), "hkr(d c) != 0")
            return res.done()
        res.checked += 1
    return res.done()


# defect identities --------------------------------------------------------------------------

def five_chain_cover():
    """The subcover 4 < 34 < 234 < 1234 < 01234 of proj(4)."""
    return builtin_variety("proj(4)").subcover(["4", "34", "234", "1234", "01234"])


def random_deformation(X, R, rng, twisted=False, max_order=2):
    """A valid deformation: the trivial one moved by a random equivalence."""
    D = NCDeformation.trivial(X, R, twisted)
    us = list(range(1, R.dim))
    e = {i: {u: random_cochain(X, i, i, 1, rng, max_order, 1, 2) for u in us} for i in X.ids}
    s = None
    if twisted:
        s = {k: {u: random_cochain(X, k[0], k[0], 0, rng, 0, 1, 2) for u in us} for k in X.chains(2)}
    return apply_equivalence(D, Equivalence.from_corrections(X, R, e=e, s=s, twisted=twisted))


def _terms(v):
    return {a: dict(c.terms) for a, c in v.items() if c}


def _same_defects(x, y):
    return all(_terms(x.get(k, {})) == _terms(y.get(k, {})) for k in set(x) | set(y))


def lemma_df_suite(seed=1, trials=50, twisted_trials=10, mutate=None, opposite_sign=False):
    """Coboundary identities of the defects and the choice-change formulas."""
    res = SuiteResult("lemma-df", seed)
    rng = random.Random(seed)
    R = truncation(["t"], 1)
    ext = small_extension(truncation(["t"], 2), R)
    plans = [(affine(2) if n % 2 == 0 else builtin_variety("proj(1)"), False) for n in range(trials)]
    if twisted_trials:
        plans += [(five_chain_cover(), True)] * twisted_trials
    for n, (X, twisted) in enumerate(plans):
        if X.name == "affine(2)" and n % 4 == 0:
            D = moyal(X, 1)
        else:
            D = random_deformation(X, R, rng, twisted)
        L0 = lift_candidate(D, ext)
        L = transform(L0, random_choice(L0, rng, terms=2))
        d = all_defects(L)
        which = (1, 2) if twisted else (1, 2, 3, 4)
        try:
            check_identities(d, X, which, twisted_sigma=twisted, mutate=mutate, opposite_sign=opposite_sign)
        except IdentityViolation as exc:
            res.fail({"trial": n, "cover": X.name, "tuple": exc.where}, exc)
            return res.done()
        ch = random_choice(L, rng, terms=2)
        d2 = all_defects(transform(L, ch))
        for name, pred in (("f", updated_f(d["f"], ch.b)), ("g", updated_g(d["g"], ch.b, ch.c, X)),
                           ("h", updated_h(d["h"], ch.c))):
            if not _same_defects(pred, d2[name]):
                res.fail({"trial": n, "cover": X.name}, f"{name}' transform formula fails")
                return res.done()
        if twisted:
            sig_pred = {k: _jadd(v, twist_cochain_d_labelled(ch.t, X).get(k, {})) for k, v in d["sigma"].items()}
            if not _same_defects(sig_pred, d2["sigma"]):
                res.fail({"trial": n, "cover": X.name}, "sigma' transform formula fails")
                return res.done()
        res.checked += 1
    return res.done()


def twist_cochain_d_labelled(t, cover):
    """δ applied label by label to {chain: {a: 0-cochain}}."""
    labels = sorted({a for vals in t.values() for a in vals})
    out = {}
    for a in labels:
        dt = twist_cochain_d({ch: vals[a] for ch, vals in t.items() if a in vals}, cover)
        for ch, v in dt.items():
            out.setdefault(ch, {})[a] = v
    return out


# S_n extension ---------------------------------------------------------------------

def random_semilattice(rng, max_elements=6, ground=4):
    """A random join-semilattice: nonempty subsets of a small set closed under union."""
    while True:
        sets = set()
        for _ in range(rng.randint(2, max_elements)):
            s = frozenset(x for x in range(ground) if rng.random() < 0.5)
            if s:
                sets.add(s)
        closed = set(sets)
        grown = True
        while grown:
            grown = False
            for a in list(closed):
                for b in list(closed):
                    if a | b not in closed:
                        closed.add(a | b)
                        grown = True
        if 2 <= len(closed) <= max_elements:
            names = {s: "".join(map(str, sorted(s))) for s in closed}
            rel = [(names[a], names[b]) for a in closed for b in closed if a < b]
            return Poset(sorted(names.values()), rel)


def _vec(rng, dim):
    return np.array([rng.randint(-5, 5) for _ in range(dim)], dtype=np.int64)


def random_cocycle(P, n, rng, dim=5):
    """A random Z^dim-valued ordered cocycle on n-chains."""
    if n == 1:
        c = _vec(rng, dim)
        return OrderedCochain(0, {(x,): c.copy() for x in P.elements})
    base = OrderedCochain(n - 2, {ch: _vec(rng, dim) for ch in P.chains(n - 1)})
    return cech_d(base, P)


def sn_extension_suite(seed=7, trials=50, ns=(1, 2, 3), dim=5):
    """extend_Sn restricts to h and is a cocycle on every tuple."""
    res = SuiteResult("sn-extension", seed)
    rng = random.Random(seed)
    zero = np.zeros(dim, dtype=np.int64)
    for n in ns:
        for trial in range(trials):
            P = random_semilattice(rng)
            h = random_cocycle(P, n, rng, dim)
            tc = extend_Sn(h, P, zero=zero)
            for ch in P.chains(n):
                if not np.array_equal(tc(ch), h.values.get(ch, zero)):
                    res.fail({"n": n, "trial": trial, "chain": ch}, "extension does not restrict to h")
                    return res.done()
            for tup in product(P.elements, repeat=n + 1):
                if np.any(total_coboundary(tc, tup)):
                    res.fail({"n": n, "trial": trial, "tuple": tup}, "cocycle condition fails")
                    return res.done()
            res.checked += 1
    return res.done()


# cohomology ------------------------------------------------------------------------

EXPECTED_TABLES = {
    "proj(1)": {0: {0: 1}, 1: {0: 3}},
    "proj(2)": {0: {0: 1}, 1: {0: 8}, 2: {0: 10}},
    "product(proj(1),proj(1))": {0: {0: 1}, 1: {0: 6}, 2: {0: 9}},
}


def cohomology_table(X, window=None):
    """{p: {q: h^q(∧^p T)}} for p = 0..min(dim, 3)."""
    dim = X.dim(X.top)
    return {p: dict(sheaf_cohomology(X, p, window).dims) for p in range(min(dim, 3) + 1)}


def tangent_dims(table, twisted=False):
    h = lambda p, q: table.get(p, {}).get(q, 0)
    t1 = h(2, 0) + h(1, 1) + (h(0, 2) if twisted else 0)
    t2 = h(3, 0) + h(2, 1) + h(1, 2) + (h(0, 3) if twisted else 0)
    return t1, t2


def cohomology_suite(seed=0, varieties=("proj(1)", "proj(2)", "product(proj(1),proj(1))")):
    res = SuiteResult("cohomology", seed)
    for name in varieties:
        table = cohomology_table(builtin_variety(name))
        want = EXPECTED_TABLES.get(name)
        res.notes[name] = {"table": table, "T1": tangent_dims(table), "T1_twisted": tangent_dims(table, True)}
        if want is not None:
            for p, row in table.items():
                for q, k in row.items():
                    if k != want.get(p, {}).get(q, 0):
                        res.fail({"variety": name, "p": p, "q": q}, f"h^{q}(wedge^{p} T) = {k}")
                        return res.done()
        res.checked += 1
    return res.done()


# moyal -----------------------------------------------------------------------------

def star(D, chart, F, G):
    """Product of R-valued polynomials {u: Poly} in the chart algebra of D."""
    R = D.R
    out = {}
    for w, op in D.mult[chart].comps.items():
        for u, f in F.items():
            for v, g in G.items():
                coef = {}
                for z, x in R.mul_basis(w, u).items():
                    for y, c in R.mul_basis(z, v).items():
                        coef[y] = coef.get(y, 0) + x * c
                coef = {y: c for y, c in coef.items() if c}
                if not coef:
                    continue
                val = evaluate(op, [f, g])
                for y, c in coef.items():
                    out[y] = out[y] + val * c if y in out else val * c
    return {y: p for y, p in out.items() if p}


def _random_poly(ring, rng, terms=3, degree=3):
    out = ring.poly()
    for _ in range(terms):
        e = tuple(rng.randint(0, degree) for _ in ring.names)
        out = out + ring.monomial(e, rng.randint(-3, 3))
    return out


def moyal_expansion(f, g, n, field):
    """The t^n coefficient of the Moyal product: ∂x^n f · ∂y^n g / n!."""
    return f.derivative_multi((n, 0)) * g.derivative_multi((0, n)) * field.inv_factorial(n)


def moyal_suite(seed=1, order=3, samples=5):
    """Iterated extension of ∂x⊗∂y is associative and equivalent to the Moyal product."""
    res = SuiteResult("moyal", seed)
    rng = random.Random(seed)
    X = affine(2)
    F = X.field
    D = moyal(X, 1)
    for n in range(2, order + 1):
        D = extend(D, small_extension(truncation(["t"], n, F), D.R))
    D.check()
    res.checked += 1
    M = moyal(X, order, R=D.R)
    if equivalent(D, M) is None:
        res.fail({"order": order}, "extension not equivalent to the Moyal product")
        return res.done()
    res.notes["identical_to_moyal"] = D.same_data(M)
    res.checked += 1
    ring = X.ring("A")
    for _ in range(samples):
        f, g, h = (_random_poly(ring, rng) for _ in range(3))
        for name, E in (("extension", D), ("moyal", M)):
            left = star(E, "A", star(E, "A", {0: f}, {0: g}), {0: h})
            right = star(E, "A", {0: f}, star(E, "A", {0: g}, {0: h}))
            if left != right:
                res.fail({"product": name, "f": str(f), "g": str(g), "h": str(h)}, "not associative")
                return res.done()
        prod = star(M, "A", {0: f}, {0: g})
        for n in range(order + 1):
            if prod.get(D.R.index[(n,)], ring.poly()) != moyal_expansion(f, g, n, F):
                res.fail({"n": n, "f": str(f), "g": str(g)}, "t^n term differs from ∂x^n f ∂y^n g / n!")
                return res.done()
        res.checked += 1
    return res.done()


# torsor ----------------------------------------------------------------------------

def slice_bivectors(X, cap):
    (i,) = X.ids
    d = X.dim(i)
    out = []
    for L in combinations(range(d), 2):
        for total in range(cap + 1):
            for e in product(range(total + 1), repeat=d):
                if sum(e) == total:
                    out.append(PolyVectorSection(X, i, 2, {(L, e): X.field(1)}))
    return out


def torsor_suite(seed=1, cap=1, coeffs=(-1, 0, 1), gauges=1):
    """Extensions from distinct slice vectors are inequivalent; equal vectors give equivalent ones."""
    res = SuiteResult("torsor", seed)
    rng = random.Random(seed)
    X = affine(2)
    F = X.field
    basis = slice_bivectors(X, cap)
    res.notes["rank"] = len(basis)
    k = ground_field_algebra(F)
    R1 = truncation(["t"], 1, F)
    ext = small_extension(R1, k)
    D0 = NCDeformation.trivial(X, k)
    vectors = list(product(coeffs, repeat=len(basis)))
    exts = []
    for v in vectors:
        terms = {}
        for a, sec in zip(v, basis):
            for key, x in sec.terms.items():
                terms[key] = terms.get(key, 0) + F(a) * x
        choice = T1Choice(bivectors={0: OrderedCochain(0, {("A",): PolyVectorSection(X, "A", 2, terms)})})
        exts.append(extend(D0, ext, choice))
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            if equivalent(exts[a], exts[b]) is not None:
                res.fail({"v": vectors[a], "w": vectors[b]}, "distinct tangent vectors gave equivalent extensions")
                return res.done()
            res.checked += 1
    for a, D in enumerate(exts):
        for _ in range(gauges):
            e = {"A": {1: random_cochain(X, "A", "A", 1, rng, 2, 2, 3, normalized=False)}}
            D2 = apply_equivalence(D, Equivalence.from_corrections(X, R1, e=e))
            if equivalent(D, D2) is None:
                res.fail({"v": vectors[a]}, "gauge-equivalent extensions reported inequivalent")
                return res.done()
            res.checked += 1
    return res.done()


# functoriality ---------------------------------------------------------------------

def _random_bivector(X, rng, cap=1):
    (i,) = X.ids
    terms = {}
    for sec in slice_bivectors(X, cap):
        c = rng.randint(-2, 2)
        if c:
            for key, x in sec.terms.items():
                terms[key] = terms.get(key, 0) + x * c
    return PolyVectorSection(X, i, 2, terms)


def functoriality_suite(seed=1, trials=20):
    """β_J(ξ) equals the classes of the pushed-forward lift on random diagrams."""
    res = SuiteResult("functoriality", seed)
    rng = random.Random(seed)
    F = affine(3).field
    stages = {}
    for trial in range(trials):
        X = affine(3) if trial % 4 else affine(2)
        two = trial % 3 == 2
        params = ["t", "u"] if two else ["t"]
        R = truncation(params, 1, F)
        Rp = truncation(params, 2, F)
        ext = small_extension(Rp, R)
        mult = {}
        for p in params:
            mult[p] = lift_polyvector(_random_bivector(X, rng)) if X.dim("A") == 3 else moyal(X, 1).mult["A"][1]
        D = NCDeformation.from_corrections(X, R, mult={"A": mult})
        S1 = truncation(["s"], 1, F)
        S2 = truncation(["s"], 2, F)
        images_p = {p: f"{rng.choice([-2, -1, 1, 2, 3])}*s + {rng.randint(-2, 2)}*s^2" for p in params}
        images = {p: img.split(" + ")[0] for p, img in images_p.items()}
        beta = ArtinHom(R, S1, images)
        beta_p = ArtinHom(Rp, S2, images_p)
        ok, details = functoriality_check(D, ext, small_extension(S2, S1), beta, beta_p)
        for st in details:
            stages[st] = stages.get(st, 0) + 1
        if not ok:
            res.fail({"trial": trial, "details": details}, "β_J(ξ) differs from ξ of the pushforward")
            return res.done()
        res.checked += 1
    res.notes["stages_compared"] = stages
    return res.done()


# gluing ----------------------------------------------------------------------------

def _monomials_upto(n, N):
    return [e for e in product(range(N + 1), repeat=n) if sum(e) <= N]


def _in_monomial_ideal(e, gens):
    return any(all(a >= b for a, b in zip(e, g)) for g in gens)


def glue_suite(seed=1, trials=20, max_vars=3, max_order=5):
    """Fiber products of monomial quotients, and gluing of deformations."""
    res = SuiteResult("glue", seed)
    rng = random.Random(seed)
    F = affine(2).field
    X = affine(2)
    M = moyal(X, 1)
    T = NCDeformation.trivial(X, truncation(["s"], 1, F))
    Dp, p1, p2 = glue(M, T, ground_field_algebra(F))
    if not (Dp.is_valid() and Dp.pushforward(p1).same_data(M) and Dp.pushforward(p2).same_data(T)):
        res.fail("moyal+trivial", "glued deformation does not truncate back to its inputs")
        return res.done()
    res.notes["moyal_trivial_base"] = [Dp.R.basis_name(u) for u in range(Dp.R.dim)]
    res.checked += 1
    names = ["x", "y", "z"]
    for trial in range(trials):
        n = rng.randint(1, max_vars)
        N = rng.randint(2, max_order)
        params = names[:n]

        def ideal():
            return [tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(rng.randint(1, 3))]

        I1, I2 = [g for g in ideal() if sum(g)], [g for g in ideal() if sum(g)]
        R1 = ArtinLocalAlgebra(params, [{g: 1} for g in I1], N, F)
        R2 = ArtinLocalAlgebra(params, [{g: 1} for g in I2], N, F)
        R0 = ArtinLocalAlgebra(params, [{g: 1} for g in I1 + I2], N, F)
        Rp, q1, q2 = fiber_product(R1, R2, R0)
        lcms = [tuple(max(a, b) for a, b in zip(g, h)) for g in I1 for h in I2]
        want = {e for e in _monomials_upto(n, N) if not _in_monomial_ideal(e, lcms)}
        if set(Rp.basis) != want:
            res.fail({"I1": I1, "I2": I2, "order": N}, "fiber product differs from P/(I1 ∩ I2)")
            return res.done()
        res.checked += 1
    # a glue with a nontrivial identification over the common quotient
    R1 = truncation(["t"], 2, F)
    D1 = moyal(X, 2, R=R1)
    R2 = ArtinLocalAlgebra(["t", "s"], ["s^2", "t*s"], 2, F)
    D2 = NCDeformation.from_corrections(X, R2, mult={"A": {"t": M.mult["A"][1], "t^2": moyal(X, 2).mult["A"][2]}})
    e = {"A": {1: random_cochain(X, "A", "A", 1, rng, 2, 1, 2, normalized=False)}}
    R0 = truncation(["t"], 2, F)
    D2e = apply_equivalence(D2, Equivalence.from_corrections(
        X, R2, e={"A": {R2.index[(1, 0)]: e["A"][1]}}))
    iso = Equivalence.from_corrections(X, R0, e=e)
    Dq, p1, p2 = glue(D1, D2e, R0, iso)
    if not (Dq.is_valid() and Dq.pushforward(p1).same_data(D1)):
        res.fail("iso-glue", "glued deformation does not restrict to the first input")
        return res.done()
    if equivalent(Dq.pushforward(p2), D2e) is None:
        res.fail("iso-glue", "second truncation not equivalent to the second input")
        return res.done()
    res.checked += 1
    return res.done()


# twist -----------------------------------------------------------------------------

def _random_level1(Y, rng):
    return {ch: random_cochain(Y, ch[0], ch[0], 0, rng, 0, 2, 2) for ch in Y.chains(2)}


def twist_suite(seed=1, trials=50):
    """Change-of-twist formula, closed twist changes, and the twist-coboundary criterion."""
    res = SuiteResult("twist", seed)
    rng = random.Random(seed)
    Y = five_chain_cover()
    R = truncation(["t"], 1)
    ext = small_extension(truncation(["t"], 2), R)
    for trial in range(trials):
        D = random_deformation(Y, R, rng, twisted=True, max_order=1)
        L0 = lift_candidate(D, ext)
        L = transform(L0, random_choice(L0, rng, terms=1))
        t = {ch: {0: random_cochain(Y, ch[0], ch[0], 0, rng, 0, 2, 2)} for ch in Y.chains(3)}
        closed = twist_cochain_d(_random_level1(Y, rng), Y, level=1)
        try:
            change_twist(L, t)
            L2 = change_twist(L, {ch: {0: c} for ch, c in closed.items()})
        except IdentityViolation as exc:
            res.fail({"trial": trial, "where": exc.where}, exc)
            return res.done()
        if any(L2.glue[k] != L.glue[k] for k in L.glue) or any(L2.mult[i] != L.mult[i] for i in Y.ids):
            res.fail({"trial": trial}, "closed twist change altered products or gluings")
            return res.done()
        s = twist_coboundary(closed, Y)
        if s is None or twist_cochain_d(s, Y, level=1) != closed:
            res.fail({"trial": trial}, "no primitive found for a twist coboundary")
            return res.done()
        Dp = extend(D, ext)
        check_twist(Dp)
        u = Dp.R.index[(2,)]
        Dq = apply_equivalence(Dp, Equivalence.from_corrections(Y, Dp.R, s={k: {u: c} for k, c in s.items()}))
        check_twist(Dq)
        for ch in Y.chains(3):
            before, after = Dp.twist[ch][u], Dq.twist[ch][u]
            want = dict(before.terms)
            if ch in closed:
                for key, x in closed[ch].terms.items():
                    want[key] = want.get(key, 0) + x
            if {k: v for k, v in want.items() if v} != dict(after.terms):
                res.fail({"trial": trial, "chain": ch}, "ρ = 1 + s does not move τ to τ + δs")
                return res.done()
        if any(Dq.glue[k] != Dp.glue[k] for k in Dp.glue) or any(Dq.mult[i] != Dp.mult[i] for i in Y.ids):
            res.fail({"trial": trial}, "twist-unit equivalence changed products or gluings")
            return res.done()
        res.checked += 1
    return res.done()


SUITES = {
    "hochschild": hochschild_suite,
    "lemma-df": lemma_df_suite,
    "sn-extension": sn_extension_suite,
    "cohomology": cohomology_suite,
    "moyal": moyal_suite,
    "torsor": torsor_suite,
    "functoriality": functoriality_suite,
    "glue": glue_suite,
    "twist": twist_suite,
}


def run_suite(name, seed=1, **kwargs):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    try:
        return SUITES[name](seed=seed, **kwargs)
    except NCDefError as exc:
        res = SuiteResult(name, seed)
        res.fail(type(exc).__name__, exc)
        return res.done()


__all__ = ["SUITES", "SuiteResult", "run_suite", "star", "five_chain_cover", "random_deformation",
           "random_semilattice", "cohomology_table", "tangent_dims"]
