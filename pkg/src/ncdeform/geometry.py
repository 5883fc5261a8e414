"""Charts, chart posets, restriction maps and polyvector-field sections.

A :class:`Cover` is a finite poset with joins whose elements carry affine
charts Spec A_i; ``i < j`` means U_j ⊂ U_i, with restriction A_i -> A_j given
by substituting Laurent polynomials for the coordinates of A_i.  Built-in
varieties are toric: every restriction sends coordinates to monomials, which
gives each section space a grading by the character lattice of the top chart.
"""

import re
from fractions import Fraction
from itertools import combinations

from .algebra.field import QQ
from .algebra.poly import LaurentRing, Poly, mono_mul
from .errors import IncompatibleData, NotComparable, Unsupported


class Poset:
    """Finite poset with all pairwise joins.

    ``elements`` is kept in a fixed linear extension, used for every
    deterministic enumeration.
    """

    def __init__(self, elements, relations):
        self.elements = list(elements)
        self.pos = {x: k for k, x in enumerate(self.elements)}
        if len(self.pos) != len(self.elements):
            raise IncompatibleData("duplicate poset elements")
        up = {x: {x} for x in self.elements}
        for a, b in relations:
            up[a].add(b)
        changed = True
        while changed:
            changed = False
            for x in self.elements:
                new = set().union(*(up[y] for y in up[x]))
                if new != up[x]:
                    up[x] = new
                    changed = True
        for x in self.elements:
            for y in up[x]:
                if x != y and x in up[y]:
                    raise IncompatibleData(f"relation cycle between {x} and {y}")
        self.up = {x: frozenset(v) for x, v in up.items()}
        self.elements.sort(key=lambda x: (len([y for y in self.elements if x in self.up[y]]), self.pos[x]))
        self.pos = {x: k for k, x in enumerate(self.elements)}
        self._join = {}
        for a in self.elements:
            for b in self.elements:
                common = self.up[a] & self.up[b]
                least = [c for c in common if common <= self.up[c]]
                if len(least) != 1:
                    raise IncompatibleData(f"no join for {a} and {b}")
                self._join[a, b] = least[0]
        self._chains = {}

    def le(self, a, b):
        return b in self.up[a]

    def lt(self, a, b):
        return a != b and b in self.up[a]

    def join(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self._join[out, x]
        return out

    @property
    def top(self):
        return self.join(*self.elements)

    @property
    def bottom_elements(self):
        return [x for x in self.elements if not any(self.lt(y, x) for y in self.elements)]

    def chains(self, n):
        """Strict chains of length n as descending tuples (max first)."""
        if n not in self._chains:
            if n == 1:
                out = [(x,) for x in self.elements]
            else:
                out = []
                for c in self.chains(n - 1):
                    for x in self.elements:
                        if self.lt(c[0], x):
                            out.append((x,) + c)
            out.sort(key=lambda c: [self.pos[x] for x in reversed(c)])
            self._chains[n] = out
        return self._chains[n]

    def max_chain_length(self):
        n = 1
        while self.chains(n + 1):
            n += 1
        return n

    def relations(self):
        return [(a, b) for a in self.elements for b in self.elements if self.lt(a, b)]

    def __len__(self):
        return len(self.elements)


class Chart:
    """An affine chart Spec A with A a Laurent-localized polynomial ring."""

    def __init__(self, cid, ring):
        self.id = cid
        self.ring = ring
        self.dim = ring.nvars

    def derivation_names(self):
        return ["d" + n for n in self.ring.names]

    def __repr__(self):
        return f"Chart({self.id!r}, {self.ring!r})"


def _int_inverse(rows):
    """Inverse of a square integer matrix, as Fractions, or None if singular."""
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == k)) for k in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [r[n:] for r in m]


class Cover:
    """A chart poset with restriction maps; the standing model of X."""

    def __init__(self, poset, charts, maps, field=QQ, name=None):
        self.poset = poset
        self.charts = dict(charts)
        self.field = field
        self.name = name
        for c in self.charts.values():
            if c.ring.field != field:
                raise IncompatibleData("chart ring over a different field")
        self.maps = {}
        for (j, i), imgs in maps.items():
            if not poset.lt(i, j):
                raise NotComparable(f"restriction {i} -> {j} but not {i} < {j}")
            self.maps[j, i] = [self._as_poly(im, j) for im in imgs]
        self._complete_maps()
        self._mono = {}
        self._jac = {}
        self._jinv = {}
        self._wedge = {}
        self._solver_cache = {}
        self._init_characters()

    def _as_poly(self, im, j):
        ring = self.charts[j].ring
        if isinstance(im, Poly):
            if im.ring != ring:
                raise IncompatibleData("restriction image in the wrong ring")
            return im
        return ring.parse(str(im))

    def _complete_maps(self):
        P = self.poset
        for n in range(2, len(P) + 1):
            progress = False
            for j in P.elements:
                for i in P.elements:
                    if P.lt(i, j) and (j, i) not in self.maps:
                        for k in P.elements:
                            if P.lt(i, k) and P.lt(k, j) and (k, i) in self.maps and (j, k) in self.maps:
                                self.maps[j, i] = [im.substitute(self.maps[j, k], self.charts[j].ring)
                                                   for im in self.maps[k, i]]
                                progress = True
                                break
            if not progress:
                break
        for j in P.elements:
            for i in P.elements:
                if P.lt(i, j) and (j, i) not in self.maps:
                    raise IncompatibleData(f"no restriction map {i} -> {j}")
                if P.lt(i, j) and len(self.maps[j, i]) != self.charts[i].dim:
                    raise IncompatibleData(f"restriction {i} -> {j} has the wrong number of images")

    # basic accessors ----------------------------------------------------
    @property
    def ids(self):
        return self.poset.elements

    def chart(self, i):
        return self.charts[i]

    def dim(self, i):
        return self.charts[i].dim

    def ring(self, i):
        return self.charts[i].ring

    def lt(self, i, j):
        return self.poset.lt(i, j)

    def join(self, *xs):
        return self.poset.join(*xs)

    def chains(self, n):
        return self.poset.chains(n)

    def check_comparable(self, i, j):
        if not (i == j or self.poset.lt(i, j)):
            raise NotComparable(f"{i} is not below {j}")

    def phi(self, j, i):
        """Images of the coordinates of chart i in chart j."""
        if i == j:
            return self.ring(i).gens()
        self.check_comparable(i, j)
        return self.maps[j, i]

    def restrict_poly(self, p, i, j):
        if i == j:
            return p
        return p.substitute(self.phi(j, i), self.ring(j))

    # monomial data ------------------------------------------------------
    def monomial_map(self, j, i):
        """(exps, coeffs, is_identity) if every coordinate maps to a monomial."""
        key = (j, i)
        if key not in self._mono:
            if i == j:
                d = self.dim(i)
                exps = [self.ring(i).unit(l) for l in range(d)]
                self._mono[key] = (exps, [self.field(1)] * d, True)
            else:
                imgs = self.phi(j, i)
                if all(len(im.terms) == 1 for im in imgs):
                    exps = [next(iter(im.terms)) for im in imgs]
                    coeffs = [next(iter(im.terms.values())) for im in imgs]
                    ident = (self.dim(i) == self.dim(j) and all(
                        e == self.ring(j).unit(l) for l, e in enumerate(exps)) and all(c == 1 for c in coeffs))
                    self._mono[key] = (exps, coeffs, ident)
                else:
                    self._mono[key] = None
        return self._mono[key]

    def push_monomial(self, e, i, j):
        """φ⁰_ji(x^e) as a dict {exp: coeff}."""
        mm = self.monomial_map(j, i)
        if mm is not None:
            exps, coeffs, ident = mm
            if ident:
                return {e: self.field(1)}
            c = self.field(1)
            f = self.ring(j).zero_exp
            for k, ek in enumerate(e):
                if ek:
                    c = c * coeffs[k] ** ek
                    f = tuple(a + ek * b for a, b in zip(f, exps[k]))
            return {f: c}
        if any(x < 0 for x in e):
            raise Unsupported("negative powers through a non-monomial restriction")
        return self.restrict_poly(Poly(self.ring(i), {e: self.field(1)}), i, j).terms

    def jac(self, j, i):
        """jac[l][m] = ∂_{y_l} φ⁰_ji(x_m) as term dicts, y = coords of j."""
        key = (j, i)
        if key not in self._jac:
            imgs = self.phi(j, i)
            self._jac[key] = [[im.derivative(l).terms for im in imgs] for l in range(self.dim(j))]
        return self._jac[key]

    def jinv(self, j, i):
        """jinv[a][m]: transported ∂_{x_a} = Σ_m jinv[a][m] ∂_{y_m} on chart j."""
        key = (j, i)
        if key not in self._jinv:
            if i == j:
                d = self.dim(i)
                z = self.ring(i).zero_exp
                self._jinv[key] = [[({z: self.field(1)} if a == m else {}) for m in range(d)] for a in range(d)]
                return self._jinv[key]
            mm = self.monomial_map(j, i)
            if mm is None or self.dim(i) != self.dim(j):
                raise Unsupported(f"vector field transport {i} -> {j} needs an invertible monomial map")
            exps, coeffs, _ = mm
            F = _int_inverse(exps)
            if F is None:
                raise Unsupported(f"restriction {i} -> {j} is not invertible")
            # x_a = c_a y^{E_a} gives y_m = Π_a (x_a / c_a)^{G[m][a]} with G = E^{-1},
            # so ∂_{x_a} y_m = G[m][a] y_m / x_a
            d = self.dim(i)
            out = []
            for a in range(d):
                row = []
                for m in range(d):
                    g = F[m][a]
                    if g == 0:
                        row.append({})
                        continue
                    if g.denominator != 1:
                        raise Unsupported("restriction is not unimodular")
                    e = tuple(int(u == m) - v for u, v in zip(range(d), exps[a]))
                    row.append({e: self.field(int(g)) / coeffs[a]})
                out.append(row)
            self._jinv[key] = out
        return self._jinv[key]

    def wedge_transport(self, L, i, j):
        """Transport ∂_{L_1}∧…∧∂_{L_p} from chart i to chart j: {(L', exp): coeff}."""
        key = (L, i, j)
        if key not in self._wedge:
            ji = self.jinv(j, i)
            acc = {((), self.ring(j).zero_exp): self.field(1)}
            for a in L:
                new = {}
                for (Ls, e), c in acc.items():
                    for m, terms in enumerate(ji[a]):
                        if not terms or m in Ls:
                            continue
                        pos = sum(1 for x in Ls if x > m)
                        sgn = -1 if pos % 2 else 1
                        Ln = tuple(sorted(Ls + (m,)))
                        for f, b in terms.items():
                            k = (Ln, mono_mul(e, f))
                            new[k] = new.get(k, 0) + sgn * c * b
                acc = {k: v for k, v in new.items() if v}
            self._wedge[key] = acc
        return self._wedge[key]

    # characters ---------------------------------------------------------
    def _init_characters(self):
        top = self.poset.top
        self.top = top
        self.toric = True
        self.chars = {}
        self.char_inv = {}
        n = self.dim(top)
        for i in self.ids:
            if any(self.dim(i) != n for i in self.ids):
                self.toric = False
                break
            mm = self.monomial_map(top, i)
            if mm is None:
                self.toric = False
                break
            self.chars[i] = [tuple(e) for e in mm[0]]
            inv = _int_inverse(self.chars[i])
            if inv is None or any(x.denominator != 1 for r in inv for x in r):
                self.toric = False
                break
            self.char_inv[i] = [[int(x) for x in r] for r in inv]
        if not self.toric:
            self.chars = {}
            self.char_inv = {}

    def character(self, i, e):
        """Lattice character of the monomial x^e on chart i."""
        ch = self.chars[i]
        w = [0] * len(ch[0]) if ch else []
        for k, ek in enumerate(e):
            if ek:
                for t, v in enumerate(ch[k]):
                    w[t] += ek * v
        return tuple(w)

    def exponent_of(self, i, w):
        """The unique exponent on chart i with character w."""
        inv = self.char_inv[i]
        d = len(inv)
        return tuple(sum(w[t] * inv[t][k] for t in range(d)) for k in range(d))

    def is_legal(self, i, e):
        return self.ring(i).is_legal(e)

    # validation ---------------------------------------------------------
    def check(self):
        """Verify join axioms and transitivity of restrictions on generators."""
        P = self.poset
        for a in P.elements:
            if P.join(a, a) != a:
                raise IncompatibleData("join not idempotent")
            for b in P.elements:
                if P.join(a, b) != P.join(b, a):
                    raise IncompatibleData("join not commutative")
                for c in P.elements:
                    if P.join(P.join(a, b), c) != P.join(a, P.join(b, c)):
                        raise IncompatibleData("join not associative")
        for k, j, i in P.chains(3):
            comp = [im.substitute(self.maps[k, j], self.ring(k)) for im in self.maps[j, i]]
            if comp != self.maps[k, i]:
                raise IncompatibleData(f"restrictions not transitive on {i} < {j} < {k}")
        return True

    def to_json(self):
        return {
            "name": self.name,
            "characteristic": self.field.characteristic,
            "elements": list(self.ids),
            "relations": [[a, b] for a, b in self.poset.relations()],
            "charts": {i: {"vars": list(self.ring(i).names),
                           "inverted": [self.ring(i).names[k] for k in sorted(self.ring(i).inverted)]}
                       for i in self.ids},
            "maps": [{"source": i, "target": j,
                      "images": {self.ring(i).names[m]: str(im) for m, im in enumerate(self.maps[j, i])}}
                     for (j, i) in sorted(self.maps, key=lambda p: (self.poset.pos[p[1]], self.poset.pos[p[0]]))],
        }

    @classmethod
    def from_json(cls, data):
        from .algebra.field import Field
        field = Field(int(data.get("characteristic", 0)))
        poset = Poset(data["elements"], [tuple(r) for r in data["relations"]])
        charts = {i: Chart(i, LaurentRing(c["vars"], c.get("inverted", []), field))
                  for i, c in data["charts"].items()}
        maps = {}
        for m in data["maps"]:
            i, j = m["source"], m["target"]
            maps[j, i] = [m["images"][v] for v in charts[i].ring.names]
        cover = cls(poset, charts, maps, field, data.get("name"))
        cover.check()
        return cover

    def subcover(self, elements):
        """The cover restricted to a join-closed subset of the poset."""
        elements = list(elements)
        s = set(elements)
        for a in elements:
            for b in elements:
                if self.join(a, b) not in s:
                    raise IncompatibleData("subset is not closed under joins")
        poset = Poset(elements, [(a, b) for a in elements for b in elements if self.lt(a, b)])
        maps = {(j, i): self.maps[j, i] for (j, i) in self.maps if i in s and j in s}
        return Cover(poset, {i: self.charts[i] for i in elements}, maps, self.field,
                     f"{self.name}[{','.join(elements)}]")

    def __repr__(self):
        return f"Cover({self.name or '?'}, {len(self.ids)} charts)"


# built-in varieties -----------------------------------------------------------

_AFFINE_NAMES = {1: ["x"], 2: ["x", "y"], 3: ["x", "y", "z"]}


def affine(d, field=QQ):
    if d < 1:
        raise Unsupported("affine space needs d >= 1")
    names = _AFFINE_NAMES.get(d, [f"x{k}" for k in range(1, d + 1)])
    poset = Poset(["A"], [])
    return Cover(poset, {"A": Chart("A", LaurentRing(names, (), field))}, {}, field, f"affine({d})")


def proj(n, field=QQ, letter="x"):
    """P^n with charts U_S = {X_s != 0 for s in S} for nonempty S."""
    if n < 1:
        raise Unsupported("projective space needs n >= 1")
    if n > 9:
        raise Unsupported("projective space of dimension > 9")
    subsets = [S for r in range(1, n + 2) for S in combinations(range(n + 1), r)]
    sid = {S: "".join(map(str, S)) for S in subsets}
    rel = [(sid[S], sid[T]) for S in subsets for T in subsets if S != T and set(S) <= set(T)]
    poset = Poset([sid[S] for S in subsets], rel)

    def names(b):
        return [f"{letter}{k}_{b}" for k in range(n + 1) if k != b]

    charts = {}
    for S in subsets:
        b = S[0]
        inv = [f"{letter}{k}_{b}" for k in S if k != b]
        charts[sid[S]] = Chart(sid[S], LaurentRing(names(b), inv, field))
    maps = {}
    for S in subsets:
        for T in subsets:
            if S != T and set(S) <= set(T):
                b, c = S[0], T[0]
                ring = charts[sid[T]].ring
                imgs = []
                for k in range(n + 1):
                    if k == b:
                        continue
                    if b == c:
                        imgs.append(ring.gen(f"{letter}{k}_{c}"))
                    elif k == c:
                        imgs.append(ring.gen(f"{letter}{b}_{c}") ** -1)
                    else:
                        imgs.append(ring.gen(f"{letter}{k}_{c}") * ring.gen(f"{letter}{b}_{c}") ** -1)
                maps[sid[T], sid[S]] = imgs
    return Cover(poset, charts, maps, field, f"proj({n})")


def product_cover(A, B):
    """Product of two covers: product poset, tensor product charts."""
    if A.field != B.field:
        raise IncompatibleData("factors over different fields")
    field = A.field
    namesA = {i: list(A.ring(i).names) for i in A.ids}
    namesB = {}
    for j in B.ids:
        nb = list(B.ring(j).names)
        clash = set(nb) & set().union(*(set(v) for v in namesA.values()))
        if clash:
            nb = [n + "_2" for n in nb]
        namesB[j] = nb
    elems = [(a, b) for a in A.ids for b in B.ids]
    pid = {(a, b): f"{a}|{b}" for a, b in elems}
    rel = [(pid[p], pid[q]) for p in elems for q in elems
           if p != q and A.poset.le(p[0], q[0]) and B.poset.le(p[1], q[1])]
    poset = Poset([pid[p] for p in elems], rel)
    charts = {}
    for a, b in elems:
        ra, rb = A.ring(a), B.ring(b)
        inv = [namesA[a][k] for k in sorted(ra.inverted)] + [namesB[b][k] for k in sorted(rb.inverted)]
        charts[pid[a, b]] = Chart(pid[a, b], LaurentRing(namesA[a] + namesB[b], inv, field))
    maps = {}
    for p in elems:
        for q in elems:
            if p != q and A.poset.le(p[0], q[0]) and B.poset.le(p[1], q[1]):
                ring = charts[pid[q]].ring
                da = A.dim(q[0])
                imgs = []
                for im in A.phi(q[0], p[0]):
                    imgs.append(Poly(ring, {e + (0,) * B.dim(q[1]): c for e, c in im.terms.items()}))
                for im in B.phi(q[1], p[1]):
                    imgs.append(Poly(ring, {(0,) * da + e: c for e, c in im.terms.items()}))
                maps[pid[q], pid[p]] = imgs
    return Cover(poset, charts, maps, field, f"product({A.name},{B.name})")


_NAME = re.compile(r"^\s*(affine|proj)\s*\(\s*(\d+)\s*\)\s*$")


_BUILTIN_CACHE = {}


def builtin_variety(name, field=QQ):
    """Parse ``affine(d)``, ``proj(n)`` or ``product(X,Y)`` of those.

    Covers are cached per (name, characteristic), so repeated lookups (for
    instance when reading serialized deformations) share one Cover object.
    """
    key = ("".join(name.split()), field.characteristic)
    if key not in _BUILTIN_CACHE:
        _BUILTIN_CACHE[key] = _build_variety(name, field)
    return _BUILTIN_CACHE[key]


def _build_variety(name, field):
    s = name.strip()
    m = _NAME.match(s)
    if m:
        kind, k = m.group(1), int(m.group(2))
        return affine(k, field) if kind == "affine" else proj(k, field)
    if s.startswith("product(") and s.endswith(")"):
        inner = s[len("product("):-1]
        depth = 0
        for pos, ch in enumerate(inner):
            depth += ch == "("
            depth -= ch == ")"
            if ch == "," and depth == 0:
                A = _build_variety(inner[:pos], field)
                B = _build_variety(inner[pos + 1:], field)
                if A.name.startswith("proj") and B.name.startswith("proj"):
                    B = proj(int(B.name[5:-1]), field, letter="y")
                C = product_cover(A, B)
                C.name = f"product({A.name},{B.name})"
                return C
    raise Unsupported(f"unsupported variety {name!r}")


# polyvector sections -----------------------------------------------------------

class PolyVectorSection:
    """A section of ∧^p T on one chart: Σ coeff_L · ∂_{L_1}∧…∧∂_{L_p}.

    ``terms`` maps (L, e) with L a sorted index tuple to the coefficient of
    x^e ∂_L.  Antisymmetry is structural.
    """

    __slots__ = ("cover", "chart", "p", "terms")

    def __init__(self, cover, chart, p, terms=None):
        self.cover = cover
        self.chart = chart
        self.p = p
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def from_coeffs(cls, cover, chart, p, coeffs):
        """From {L (tuple of variable indices or names): Poly or string}."""
        ring = cover.ring(chart)
        terms = {}
        for L, coeff in coeffs.items():
            idx = [ring.index[v] if isinstance(v, str) else v for v in L]
            if len(set(idx)) != len(idx):
                continue
            order = sorted(range(len(idx)), key=lambda k: idx[k])
            sgn = _perm_sign(order)
            poly = coeff if isinstance(coeff, Poly) else ring.parse(str(coeff))
            key = tuple(sorted(idx))
            for e, c in poly.terms.items():
                terms[key, e] = terms.get((key, e), 0) + sgn * c
        return cls(cover, chart, p, terms)

    def coeffs(self):
        ring = self.cover.ring(self.chart)
        out = {}
        for (L, e), c in self.terms.items():
            out.setdefault(L, {})[e] = c
        return {L: Poly(ring, t) for L, t in sorted(out.items())}

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if other.chart != self.chart or other.p != self.p:
            raise IncompatibleData("sections on different charts or of different degree")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return PolyVectorSection(self.cover, self.chart, self.p, out)

    def __neg__(self):
        return PolyVectorSection(self.cover, self.chart, self.p, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        return PolyVectorSection(self.cover, self.chart, self.p, {k: a * c for k, c in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, PolyVectorSection) and self.chart == other.chart
                and self.p == other.p and self.terms == other.terms)

    def __hash__(self):
        return hash((self.chart, self.p, frozenset(self.terms.items())))

    def restrict(self, target):
        return restrict(self, target)

    def characters(self):
        cov = self.cover
        out = {}
        for (L, e), c in self.terms.items():
            w = section_character(cov, self.chart, L, e)
            out.setdefault(w, {})[L, e] = c
        return out

    def __str__(self):
        ring = self.cover.ring(self.chart)
        if not self.terms:
            return "0"
        parts = []
        for L, poly in self.coeffs().items():
            wedge = "^".join("d" + ring.names[k] for k in L) or "1"
            parts.append(f"({poly})*{wedge}" if L else f"({poly})")
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyVectorSection[{self.chart}, p={self.p}]({self})"


def section_character(cover, chart, L, e):
    w = list(cover.character(chart, e))
    ch = cover.chars[chart]
    for l in L:
        for t, v in enumerate(ch[l]):
            w[t] -= v
    return tuple(w)


def _perm_sign(order):
    sgn = 1
    order = list(order)
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                sgn = -sgn
    return sgn


def restrict_terms(cover, terms, i, j):
    """Restrict flat section terms {(L, e): c} from chart i to chart j."""
    if i == j:
        return dict(terms)
    out = {}
    for (L, e), c in terms.items():
        coef = cover.push_monomial(e, i, j)
        wt = cover.wedge_transport(L, i, j)
        for f, a in coef.items():
            for (L2, g), b in wt.items():
                k = (L2, mono_mul(f, g))
                v = out.get(k, 0) + a * b * c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return out


def restrict(s, target):
    """Restrict a polyvector section along the poset order."""
    cover = s.cover
    if s.chart != target and not cover.lt(s.chart, target):
        raise NotComparable(f"cannot restrict from {s.chart} to {target}")
    return PolyVectorSection(cover, target, s.p, restrict_terms(cover, s.terms, s.chart, target))


def section_basis(cover, chart, p, w):
    """Monomial basis (L, e) of Γ(U_chart, ∧^p T) in character w."""
    d = cover.dim(chart)
    out = []
    ch = cover.chars[chart]
    for L in combinations(range(d), p):
        shift = list(w)
        for l in L:
            for t, v in enumerate(ch[l]):
                shift[t] += v
        e = cover.exponent_of(chart, shift)
        if cover.is_legal(chart, e):
            out.append((L, e))
    return out


def sheaf_cohomology(X, p, window=None):
    """Dimensions of H^q(X, ∧^p T) with Čech cocycle bases; see :mod:`cech`."""
    from .cech import sheaf_cohomology as _impl
    return _impl(X, p, window)


__all__ = [
    "Chart", "Cover", "Poset", "PolyVectorSection", "affine", "builtin_variety", "product_cover",
    "proj", "restrict", "restrict_terms", "section_basis", "section_character", "sheaf_cohomology",
]
