"""Polydifferential Hochschild cochains between chart algebras.

A cochain A_i^{⊗p} -> A_j (i <= j) is a finite sum of atomic terms

    x^e · φ⁰_ji(∂^{D_1} a_1) · … · φ⁰_ji(∂^{D_p} a_p)

with x^e a Laurent monomial of chart j and D_s multi-indices in the
coordinates of chart i.  Terms are stored flat as ``{(slots, e): coeff}``
with ``slots = (D_1, …, D_p)``; since the ∂^D are independent over A_j in
characteristic zero this representation is canonical.
"""

from itertools import permutations, product

from .algebra.linalg import EchelonBasis
from .algebra.poly import Poly, mono_mul
from .errors import ArityMismatch, BoundsTooSmall, IdentityViolation, IncompatibleData, NotACocycle
from .geometry import PolyVectorSection, _perm_sign


def _acc(out, k, v):
    nv = out.get(k, 0) + v
    if nv:
        out[k] = nv
    else:
        out.pop(k, None)


def _incr(D, l, by=1):
    return D[:l] + (D[l] + by,) + D[l + 1:]


class PolyDiffCochain:
    """Immutable polydifferential p-cochain from chart ``src`` to chart ``tgt``."""

    __slots__ = ("cover", "src", "tgt", "arity", "terms")

    def __init__(self, cover, src, tgt, arity, terms=None):
        self.cover = cover
        self.src = src
        self.tgt = tgt
        self.arity = arity
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    # construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, cover, src, tgt, arity, items):
        """From [(coeff, [slot, ...])] where a slot is a multi-index or a list
        of variable names such as ["x", "x"] or ["dx", "dx"]."""
        cover.check_comparable(src, tgt)
        ring_t = cover.ring(tgt)
        names = cover.ring(src).names
        terms = {}
        for coeff, slots in items:
            if len(slots) != arity:
                raise ArityMismatch(f"term has {len(slots)} slots, expected {arity}")
            Ds = tuple(_parse_slot(s, names) for s in slots)
            poly = coeff if isinstance(coeff, Poly) else ring_t.parse(str(coeff))
            for e, c in poly.terms.items():
                _acc(terms, (Ds, e), c)
        return cls(cover, src, tgt, arity, terms)

    def zero_like(self):
        return PolyDiffCochain(self.cover, self.src, self.tgt, self.arity)

    # linear structure ---------------------------------------------------
    def _check(self, other):
        if (other.src, other.tgt, other.arity) != (self.src, self.tgt, self.arity):
            raise IncompatibleData(f"cochains {self.src}->{self.tgt}/{self.arity} and "
                                   f"{other.src}->{other.tgt}/{other.arity} are not comparable")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return PolyDiffCochain(self.cover, self.src, self.tgt, self.arity, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, -c)
        return PolyDiffCochain(self.cover, self.src, self.tgt, self.arity, out)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a):
        if not a:
            return self.zero_like()
        return PolyDiffCochain(self.cover, self.src, self.tgt, self.arity,
                               {k: a * c for k, c in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, PolyDiffCochain) and self.cover is other.cover
                and (self.src, self.tgt, self.arity) == (other.src, other.tgt, other.arity)
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.src, self.tgt, self.arity, frozenset(self.terms.items())))

    def max_order(self):
        return max((sum(D) for slots, _ in self.terms for D in slots), default=0)

    def min_slot_order(self):
        return min((sum(D) for slots, _ in self.terms for D in slots), default=0)

    def max_degree(self):
        return max((sum(abs(x) for x in e) for _, e in self.terms), default=0)

    def grouped(self):
        """{slots: Poly coefficient} in canonical order."""
        ring = self.cover.ring(self.tgt)
        out = {}
        for (slots, e), c in self.terms.items():
            out.setdefault(slots, {})[e] = c
        return {s: Poly(ring, t) for s, t in sorted(out.items(), key=lambda kv: _slots_key(kv[0]))}

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.cover.ring(self.src).names
        parts = []
        for slots, poly in self.grouped().items():
            sl = "⊗".join(_fmt_slot(D, names) for D in slots)
            parts.append(f"({poly})·[{sl}]" if slots else f"({poly})")
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyDiffCochain[{self.src}->{self.tgt}, p={self.arity}]({self})"

    def to_json(self):
        names = self.cover.ring(self.src).names
        return {"arity": self.arity, "src": self.src, "tgt": self.tgt,
                "terms": [{"coeff": str(poly), "slots": [_slot_names(D, names) for D in slots]}
                          for slots, poly in self.grouped().items()]}

    @classmethod
    def from_json(cls, cover, data):
        return cls.from_terms(cover, data["src"], data["tgt"], data["arity"],
                              [(t["coeff"], t["slots"]) for t in data["terms"]])


def _slots_key(slots):
    return tuple((-sum(D),) + tuple(-x for x in D) for D in slots)


def _parse_slot(s, names):
    if isinstance(s, tuple) and all(isinstance(x, int) for x in s):
        return s
    D = [0] * len(names)
    for v in s:
        v = v[1:] if v.startswith("d") and v[1:] in names else v
        D[names.index(v)] += 1
    return tuple(D)


def _slot_names(D, names):
    out = []
    for n, k in zip(names, D):
        out.extend(["d" + n] * k)
    return out


def _fmt_slot(D, names):
    s = "".join(f"d{n}" + (f"^{k}" if k > 1 else "") for n, k in zip(names, D) if k)
    return s or "1"


# basic cochains ----------------------------------------------------------------

def zero_cochain(cover, src, tgt, arity):
    return PolyDiffCochain(cover, src, tgt, arity)


def restriction_cochain(cover, j, i):
    """φ⁰_ji as a 1-cochain (the identity when i = j)."""
    cover.check_comparable(i, j)
    z = (0,) * cover.dim(i)
    return PolyDiffCochain(cover, i, j, 1, {((z,), cover.ring(j).zero_exp): cover.field(1)})


def identity_cochain(cover, i):
    return restriction_cochain(cover, i, i)


def element_cochain(cover, chart, value, src=None):
    """An element of A_chart viewed as a 0-cochain."""
    if not isinstance(value, Poly):
        value = cover.ring(chart).parse(str(value))
    return PolyDiffCochain(cover, chart if src is None else src, chart, 0,
                           {((), e): c for e, c in value.terms.items()})


# jet calculus ------------------------------------------------------------------

def _derive_terms(cover, S, T, terms, l):
    """∂_{y_l} applied to the output of a cochain (y = coordinates of T)."""
    out = {}
    same = S == T
    if not same:
        mm = cover.monomial_map(T, S)
        if mm is not None and mm[2]:
            same = True
        else:
            jac = cover.jac(T, S)[l]
    for (slots, e), c in terms.items():
        el = e[l]
        if el:
            _acc(out, (slots, _incr(e, l, -1)), c * el)
        for t, D in enumerate(slots):
            if same:
                _acc(out, (slots[:t] + (_incr(D, l),) + slots[t + 1:], e), c)
            else:
                for m, jt in enumerate(jac):
                    if not jt:
                        continue
                    ns = slots[:t] + (_incr(D, m),) + slots[t + 1:]
                    for f, a in jt.items():
                        _acc(out, (ns, mono_mul(e, f)), c * a)
    return out


def derive(E, l):
    return PolyDiffCochain(E.cover, E.src, E.tgt, E.arity, _derive_terms(E.cover, E.src, E.tgt, E.terms, l))


def _push_terms(cover, terms, C, B):
    if C == B:
        return terms
    mm = cover.monomial_map(B, C)
    if mm is not None and mm[2]:
        return terms
    out = {}
    cache = {}
    for (slots, e), c in terms.items():
        img = cache.get(e)
        if img is None:
            img = cover.push_monomial(e, C, B)
            cache[e] = img
        for f, a in img.items():
            _acc(out, (slots, f), a * c)
    return out


def push(E, B):
    """φ⁰_{B,tgt} ∘ E."""
    E.cover.check_comparable(E.tgt, B)
    return PolyDiffCochain(E.cover, E.src, B, E.arity, _push_terms(E.cover, E.terms, E.tgt, B))


def _mul_terms(t1, t2):
    out = {}
    for (s1, e1), c1 in t1.items():
        for (s2, e2), c2 in t2.items():
            _acc(out, (s1 + s2, mono_mul(e1, e2)), c1 * c2)
    return out


def product_cochain(a, b):
    """(a·b)(x_1..x_p, y_1..y_q) = a(x)·b(y) in the common target."""
    if a.src != b.src or a.tgt != b.tgt:
        raise IncompatibleData("product of cochains with different charts")
    return PolyDiffCochain(a.cover, a.src, a.tgt, a.arity + b.arity, _mul_terms(a.terms, b.terms))


class JetCache:
    """Memoizes derivatives ∂^a E (pushed to a target chart) across compositions."""

    def __init__(self):
        self.store = {}

    def get(self, E, a, B):
        key = (id(E), a, B)
        r = self.store.get(key)
        if r is not None:
            return r[1]
        if B != E.tgt:
            base = self.get(E, a, E.tgt)
            r = _push_terms(E.cover, base, E.tgt, B)
        elif not any(a):
            r = E.terms
        else:
            l = next(k for k, x in enumerate(a) if x)
            prev = self.get(E, _incr(a, l, -1), B)
            r = _derive_terms(E.cover, E.src, E.tgt, prev, l)
        self.store[key] = (E, r)  # keep E alive so its id stays unique
        return r


def apply_op(op, args, cache=None):
    """op(args_1, …, args_p): compose cochains, args mapping chart S to op.src."""
    if len(args) != op.arity:
        raise ArityMismatch(f"operator of arity {op.arity} applied to {len(args)} cochains")
    cover = op.cover
    C, B = op.src, op.tgt
    if args:
        S = args[0].src
        for a in args:
            if a.tgt != C or a.src != S:
                raise IncompatibleData("arguments do not compose with the operator")
    else:
        S = op.src
    arity = sum(a.arity for a in args)
    cache = cache or JetCache()
    out = {}
    for (aslots, eb), cb in op.terms.items():
        partial = {((), eb): cb}
        for a_s, arg in zip(aslots, args):
            F = cache.get(arg, a_s, B)
            if not F:
                partial = {}
                break
            partial = _mul_terms(partial, F)
        for k, v in partial.items():
            _acc(out, k, v)
    return PolyDiffCochain(cover, S, B, arity, out)


def precompose(c, i):
    """c ∘ (φ⁰_{src,i})^{⊗p}."""
    if i == c.src:
        return c
    phi = restriction_cochain(c.cover, c.src, i)
    return apply_op(c, [phi] * c.arity)


# evaluation --------------------------------------------------------------------

def evaluate(c, args):
    """Σ coeff · Π φ⁰(∂^{D_s} a_s), exactly."""
    if len(args) != c.arity:
        raise ArityMismatch(f"{c.arity}-cochain evaluated on {len(args)} arguments")
    cover = c.cover
    rs, rt = cover.ring(c.src), cover.ring(c.tgt)
    args = [a if isinstance(a, Poly) else rs.parse(str(a)) for a in args]
    derived = {}
    out = rt.poly()
    for slots, coeff in c.grouped().items():
        term = coeff
        for s, D in enumerate(slots):
            key = (s, D)
            if key not in derived:
                derived[key] = cover.restrict_poly(args[s].derivative_multi(D), c.src, c.tgt)
            term = term * derived[key]
            if not term:
                break
        out = out + term
    return out


# coboundary --------------------------------------------------------------------

_LEIBNIZ = {}


def _leibniz(D):
    r = _LEIBNIZ.get(D)
    if r is None:
        r = []
        for A in product(*(range(k + 1) for k in D)):
            coef = 1
            for k, a in zip(D, A):
                coef *= _binom(k, a)
            r.append((A, tuple(k - a for k, a in zip(D, A)), coef))
        _LEIBNIZ[D] = r
    return r


def _binom(n, k):
    from math import comb
    return comb(n, k)


def _coboundary_terms(terms, p, z):
    out = {}
    for (slots, e), c in terms.items():
        _acc(out, ((z,) + slots, e), c)
        for s in range(1, p + 1):
            sign = -1 if s % 2 else 1
            D = slots[s - 1]
            for A, Bm, coef in _leibniz(D):
                _acc(out, (slots[:s - 1] + (A, Bm) + slots[s:], e), sign * coef * c)
        _acc(out, (slots + (z,), e), c if (p + 1) % 2 == 0 else -c)
    return out


def coboundary(c):
    """Hochschild coboundary with the bimodule structure through φ⁰."""
    p = c.arity
    if p == 0:
        return PolyDiffCochain(c.cover, c.src, c.tgt, 1)
    z = (0,) * c.cover.dim(c.src)
    return PolyDiffCochain(c.cover, c.src, c.tgt, p + 1, _coboundary_terms(c.terms, p, z))


# HKR ---------------------------------------------------------------------------

def _symbol_terms(c):
    """Antisymmetrized first-order symbol in source directions: {(L, e): coeff}."""
    out = {}
    for (slots, e), coeff in c.terms.items():
        dirs = []
        for D in slots:
            if sum(D) != 1:
                break
            dirs.append(D.index(1))
        else:
            if len(set(dirs)) == len(dirs):
                order = sorted(range(len(dirs)), key=lambda k: dirs[k])
                _acc(out, (tuple(sorted(dirs)), e), _perm_sign(order) * coeff)
    return out


def hkr_class(c, check=True):
    """The polyvector field representing the class of a cocycle."""
    if check and coboundary(c):
        raise NotACocycle(f"cochain {c.src}->{c.tgt} of arity {c.arity} is not closed")
    cover = c.cover
    cover.field.inv_factorial(c.arity)
    sym = _symbol_terms(c)
    if c.src == c.tgt or (cover.monomial_map(c.tgt, c.src) or (None, None, False))[2]:
        return PolyVectorSection(cover, c.tgt, c.arity, sym)
    out = {}
    for (L, e), coeff in sym.items():
        for (L2, f), a in cover.wedge_transport(L, c.src, c.tgt).items():
            _acc(out, (L2, mono_mul(e, f)), a * coeff)
    return PolyVectorSection(cover, c.tgt, c.arity, out)


def lift_polyvector(sec, src=None):
    """The cochain (1/p!) Σ_π sgn(π) ∂_{L_π(1)} ⊗ … ⊗ ∂_{L_π(p)} with coefficients."""
    cover = sec.cover
    T = sec.chart
    p = sec.p
    d = cover.dim(T)
    w = cover.field.inv_factorial(p)
    units = [tuple(int(k == l) for k in range(d)) for l in range(d)]
    terms = {}
    for (L, e), c in sec.terms.items():
        for perm in permutations(range(p)):
            slots = tuple(units[L[k]] for k in perm)
            _acc(terms, (slots, e), _perm_sign(perm) * c * w)
    B = PolyDiffCochain(cover, T, T, p, terms)
    if src is None or src == T:
        return B
    return precompose(B, src)


def antisymmetric_part(c):
    """The totally antisymmetric multi-derivation part of c (a cocycle)."""
    q = c.arity
    if q == 0:
        return c.zero_like()
    d = c.cover.dim(c.src)
    units = [tuple(int(k == l) for k in range(d)) for l in range(d)]
    w = c.cover.field.inv_factorial(q)
    terms = {}
    for (L, e), a in _symbol_terms(c).items():
        for perm in permutations(range(q)):
            _acc(terms, (tuple(units[L[k]] for k in perm), e), _perm_sign(perm) * a * w)
    return PolyDiffCochain(c.cover, c.src, c.tgt, q, terms)


# solving dB = c ----------------------------------------------------------------

def cochain_weight(cover, S, T, slots, e):
    w = list(cover.character(T, e))
    chS = cover.chars[S]
    for D in slots:
        for l, k in enumerate(D):
            if k:
                for t, v in enumerate(chS[l]):
                    w[t] -= k * v
    return tuple(w)


def _multi_indices(d, lo, hi):
    out = []
    for D in product(range(hi + 1), repeat=d):
        if lo <= sum(D) <= hi:
            out.append(D)
    out.sort(key=lambda D: (sum(D), tuple(-x for x in D)))
    return out


def _solver(cover, S, T, q, w, K, normalized, max_degree):
    cache = cover._solver_cache
    key = (S, T, q, w, K, normalized, max_degree if w is None else None)
    hit = cache.get(key)
    if hit is not None:
        return hit
    d = cover.dim(S)
    z = (0,) * d
    Ds = _multi_indices(d, 1 if normalized else 0, K)
    unknowns = []
    if w is not None:
        chS = cover.chars[S]
        for slots in product(Ds, repeat=q):
            shift = list(w)
            for D in slots:
                for l, k in enumerate(D):
                    if k:
                        for t, v in enumerate(chS[l]):
                            shift[t] += k * v
            e = cover.exponent_of(T, shift)
            if cover.is_legal(T, e):
                unknowns.append((slots, e))
    else:
        ring = cover.ring(T)
        ranges = [range(-max_degree if l in ring.inverted else 0, max_degree + 1) for l in range(ring.nvars)]
        exps = [e for e in product(*ranges) if sum(abs(x) for x in e) <= max_degree]
        for slots in product(Ds, repeat=q):
            for e in exps:
                unknowns.append((slots, e))
    eb = EchelonBasis()
    one = cover.field(1)
    for k, u in enumerate(unknowns):
        col = _coboundary_terms({u: one}, q, z) if q else {}
        if col:
            eb.add(col, tag=k)
    hit = (eb, unknowns)
    cache[key] = hit
    return hit


def solve_coboundary_ex(c, max_order=None, max_degree=None, check=True, normalize=True):
    """Find B with dB = c.  Returns (B or None, bounds used).

    None means the class of c is nonzero.  Raises BoundsTooSmall if the class
    vanishes but no primitive exists within the searched bounds.
    """
    cover = c.cover
    q = c.arity - 1
    if not c.terms:
        return PolyDiffCochain(cover, c.src, c.tgt, max(q, 0)), {"max_order": 0, "max_degree": 0}
    if q < 0:
        raise ArityMismatch("0-cochains are never coboundaries of anything nonzero")
    if check and coboundary(c):
        raise NotACocycle("solve_coboundary needs a cocycle")
    if hkr_class(c, check=False):
        return None, {}
    normalized = c.min_slot_order() >= 1
    graded = cover.toric
    blocks = {}
    for k, v in c.terms.items():
        w = cochain_weight(cover, c.src, c.tgt, *k) if graded else None
        blocks.setdefault(w, {})[k] = v
    K0 = c.max_order() if max_order is None else max_order
    tries = [K0] if max_order is not None else [K0, K0 + 1, K0 + 2]
    deg = max_degree if max_degree is not None else c.max_degree() + K0 + 1
    for K in tries:
        total = {}
        ok = True
        for w, rhs in sorted(blocks.items(), key=lambda kv: (kv[0] is None, kv[0])):
            eb, unknowns = _solver(cover, c.src, c.tgt, q, w, K, normalized, deg)
            sol = eb.solve(rhs)
            if sol is None:
                ok = False
                break
            for k, a in sol.items():
                _acc(total, unknowns[k], a)
        if ok:
            B = PolyDiffCochain(cover, c.src, c.tgt, q, total)
            if normalize and q >= 1:
                B = B - antisymmetric_part(B)
            if coboundary(B) != c:
                raise IdentityViolation("primitive does not reproduce the cocycle")
            return B, {"max_order": K, "max_degree": deg if not graded else None}
    raise BoundsTooSmall(f"no primitive with slot order <= {tries[-1]} although the HKR class vanishes",
                         {"max_order": tries[-1], "max_degree": deg})


def solve_coboundary(c, max_order=None, max_degree=None, check=True):
    return solve_coboundary_ex(c, max_order, max_degree, check)[0]


__all__ = [
    "JetCache", "PolyDiffCochain", "antisymmetric_part", "apply_op", "coboundary", "cochain_weight",
    "derive", "element_cochain", "evaluate", "hkr_class", "identity_cochain", "lift_polyvector",
    "precompose", "product_cochain", "push", "restriction_cochain", "solve_coboundary",
    "solve_coboundary_ex", "zero_cochain",
]
