"""Čech complexes on chart posets.

Cochains of level q live on strict chains i_0 < … < i_q, stored as
descending tuples ``(i_q, …, i_0)`` whose first entry is the deepest chart;
values are transported there.  The coboundary is

    (dc)(i_{q+1}, …, i_0) = Σ_p (−1)^p c(…, î_p, …)

where only the face missing the top index needs a restriction (and, for
cochain-valued data, the face missing the bottom index a precomposition).

For toric covers, polyvector-valued complexes split into finite pieces by
lattice character, which makes cohomology and coboundary solving exact.
"""

from itertools import permutations, product

from .algebra.linalg import EchelonBasis, nullspace
from .errors import NotClosed, WindowTooSmall
from .geometry import PolyVectorSection, _perm_sign, restrict, restrict_terms, section_basis


class OrderedCochain:
    """Level-q cochain: {descending chain tuple: value}."""

    def __init__(self, level, values=None):
        self.level = level
        self.values = {k: v for k, v in (values or {}).items() if _nonzero(v)}

    def __getitem__(self, chain):
        return self.values.get(chain)

    def get(self, chain, default=None):
        return self.values.get(chain, default)

    def items(self):
        return self.values.items()

    def is_zero(self):
        return not self.values

    def __bool__(self):
        return bool(self.values)

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out[k] + v if k in out else v
        return OrderedCochain(self.level, out)

    def __neg__(self):
        return OrderedCochain(self.level, {k: -v for k, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        return OrderedCochain(self.level, {k: _scale(v, a) for k, v in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, OrderedCochain) or other.level != self.level:
            return False
        return (self - other).is_zero()

    def __repr__(self):
        return f"OrderedCochain(level={self.level}, {len(self.values)} values)"


def _nonzero(v):
    if hasattr(v, "any") and callable(v.any):
        return bool(v.any())
    return bool(v)


def _scale(v, a):
    return v.scale(a) if hasattr(v, "scale") else v * a


def default_transport(value, face, full):
    """Move a value from chain ``face`` to the context of chain ``full``."""
    if isinstance(value, PolyVectorSection):
        return value if value.chart == full[0] else restrict(value, full[0])
    from .hochschild import PolyDiffCochain, precompose, push
    if isinstance(value, PolyDiffCochain):
        if value.tgt != full[0]:
            value = push(value, full[0])
        if value.arity and value.src != full[-1]:
            value = precompose(value, full[-1])
        elif not value.arity and value.src != full[-1]:
            value = PolyDiffCochain(value.cover, full[-1], value.tgt, 0, value.terms)
        return value
    return value


def cech_d(c, poset, transport=default_transport):
    """Alternating-face coboundary, level q -> q+1."""
    q = c.level
    out = {}
    for sigma in poset.chains(q + 2):
        acc = None
        for pos in range(q + 2):
            face = sigma[:pos] + sigma[pos + 1:]
            v = c.values.get(face)
            if v is None:
                continue
            v = transport(v, face, sigma)
            if (q + 1 - pos) % 2:
                v = -v
            acc = v if acc is None else acc + v
        if acc is not None and _nonzero(acc):
            out[sigma] = acc
    return OrderedCochain(q + 1, out)


class TotalCochain:
    """A cochain defined on arbitrary index tuples, computed on demand."""

    def __init__(self, n, func, poset, zero=None):
        self.n = n
        self.func = func
        self.poset = poset
        self.zero = zero
        self._memo = {}

    def __call__(self, tup):
        tup = tuple(tup)
        if len(tup) != self.n:
            raise ValueError(f"expected a {self.n}-tuple")
        if tup not in self._memo:
            self._memo[tup] = self.func(tup)
        return self._memo[tup]

    def table(self):
        return {t: self(t) for t in product(self.poset.elements, repeat=self.n)}


def extend_Sn(h, poset, transport=None, zero=0, check=True):
    """Extend an ordered cocycle on n-chains to all n-tuples by the
    symmetric-group formula with joins of initial segments."""
    n = h.level + 1
    if check and cech_d(h, poset, transport or default_transport):
        raise NotClosed("ordered cochain is not a cocycle")
    perms = [(s, _perm_sign(s)) for s in permutations(range(n))]

    def func(tup):
        # tup = (i_n, …, i_1): i_k is tup[n - k]
        idx = [tup[n - k] for k in range(1, n + 1)]
        top = poset.join(*idx)
        acc = None
        for s, sgn in perms:
            js = []
            cur = None
            for k in range(n):
                x = idx[s[k]]
                cur = x if cur is None else poset.join(cur, x)
                js.append(cur)
            if len(set(js)) != n:
                continue
            chain = tuple(reversed(js))
            v = h.values.get(chain)
            if v is None:
                continue
            if transport is not None:
                v = transport(v, chain, (top,) + chain)
            if sgn < 0:
                v = -v
            acc = v if acc is None else acc + v
        return zero if acc is None else acc

    return TotalCochain(n, func, poset, zero)


def unorder_pairwise(g, poset, zero=0):
    """Level-1 data on arbitrary pairs: g̃(j, i) = g(l, i) − g(l, j), l = max{i, j}."""
    if g.level != 1:
        raise ValueError("unorder_pairwise needs a level-1 cochain")

    def func(tup):
        j, i = tup
        if i == j:
            return zero
        l = poset.join(i, j)
        a = g.values.get((l, i)) if l != i else None
        b = g.values.get((l, j)) if l != j else None
        if a is None and b is None:
            return zero
        if b is None:
            return a
        if a is None:
            return -b
        return a - b

    return TotalCochain(2, func, poset, zero)


def total_coboundary(tc, tup, transport=None):
    """Σ_p (−1)^p tc(tup with entry p removed) on an arbitrary (n+1)-tuple."""
    n = len(tup) - 1
    poset = tc.poset
    top = poset.join(*tup)
    acc = None
    for pos in range(n + 1):
        face = tup[:pos] + tup[pos + 1:]
        v = tc(face)
        if transport is not None:
            v = transport(v, (poset.join(*face),), (top,))
        if (n - pos) % 2:
            v = -v
        acc = v if acc is None else acc + v
    return acc


def section_transport(value, face, full):
    if isinstance(value, PolyVectorSection) and value.chart != full[0]:
        return restrict(value, full[0])
    return value


# graded complexes on toric covers ------------------------------------------------

class GradedCech:
    """The Čech complex of ∧^p T on a toric cover, split by lattice character."""

    def __init__(self, cover, p):
        self.cover = cover
        self.p = p
        self.maxlen = cover.poset.max_chain_length()
        self._basis = {}
        self._cols = {}
        self._coface = {}
        self._restr = {}
        self._hom = {}

    def basis(self, q, w):
        key = (q, w)
        if key not in self._basis:
            out = []
            if 0 <= q < self.maxlen:
                cache = {}
                for chain in self.cover.chains(q + 1):
                    top = chain[0]
                    if top not in cache:
                        cache[top] = section_basis(self.cover, top, self.p, w)
                    for L, e in cache[top]:
                        out.append((chain, L, e))
            self._basis[key] = out
        return self._basis[key]

    def _cofaces(self, q):
        if q not in self._coface:
            table = {}
            for sigma in self.cover.chains(q + 2):
                for pos in range(q + 2):
                    face = sigma[:pos] + sigma[pos + 1:]
                    table.setdefault(face, []).append((sigma, pos))
            self._coface[q] = table
        return self._coface[q]

    def _restrict_term(self, L, e, a, b):
        key = (L, e, a, b)
        r = self._restr.get(key)
        if r is None:
            r = restrict_terms(self.cover, {(L, e): self.cover.field(1)}, a, b)
            self._restr[key] = r
        return r

    def column(self, q, elem):
        """δ of one basis element of C^q."""
        chain, L, e = elem
        one = self.cover.field(1)
        col = {}
        for sigma, pos in self._cofaces(q).get(chain, ()):
            sign = -one if (q + 1 - pos) % 2 else one
            if pos == 0:
                for (L2, e2), c in self._restrict_term(L, e, chain[0], sigma[0]).items():
                    k = (sigma, L2, e2)
                    col[k] = col.get(k, 0) + sign * c
            else:
                k = (sigma, L, e)
                col[k] = col.get(k, 0) + sign
        return {k: v for k, v in col.items() if v}

    def columns(self, q, w):
        key = (q, w)
        if key not in self._cols:
            self._cols[key] = [self.column(q, b) for b in self.basis(q, w)]
        return self._cols[key]

    def cohomology(self, w):
        """(dims by q, H-basis vectors by q, echelon data) for one character."""
        if w in self._hom:
            return self._hom[w]
        dims, bases, ebs = {}, {}, {}
        ranks = {-1: 0}
        kernels = {}
        for q in range(self.maxlen):
            cols = self.columns(q, w)
            ker = nullspace(cols, one=self.cover.field(1))
            ranks[q] = len(cols) - len(ker)
            kernels[q] = ker
        for q in range(self.maxlen):
            basisq = self.basis(q, w)
            dim = len(basisq) - ranks[q] - ranks[q - 1]
            eb = EchelonBasis()
            if q > 0:
                for k, col in enumerate(self.columns(q - 1, w)):
                    eb.add(col, tag=("B", k))
            hb = []
            for z in kernels[q]:
                vec = {basisq[k]: c for k, c in z.items()}
                if eb.add(vec, tag=("H", len(hb))) is None:
                    hb.append(vec)
            assert len(hb) == dim
            dims[q] = dim
            bases[q] = hb
            ebs[q] = eb
        self._hom[w] = (dims, bases, ebs)
        return self._hom[w]

    def solve(self, q, w, rhs):
        """Find a level-(q−1) primitive of a level-q vector in character w."""
        if q == 0:
            return None if rhs else {}
        key = ("solve", q, w)
        if key not in self._hom:
            eb = EchelonBasis()
            for k, col in enumerate(self.columns(q - 1, w)):
                eb.add(col, tag=k)
            self._hom[key] = eb
        sol = self._hom[key].solve(rhs)
        if sol is None:
            return None
        basis = self.basis(q - 1, w)
        return {basis[k]: c for k, c in sol.items()}


def _graded(cover, p):
    cache = cover.__dict__.setdefault("_graded_cech", {})
    if p not in cache:
        cache[p] = GradedCech(cover, p)
    return cache[p]


def to_vectors(c):
    """Split a polyvector-valued cochain into {character: {(chain, L, e): coeff}}."""
    out = {}
    for chain, sec in c.values.items():
        for w, terms in sec.characters().items():
            blk = out.setdefault(w, {})
            for (L, e), a in terms.items():
                blk[chain, L, e] = a
    return out


def from_vector(cover, p, level, vec):
    vals = {}
    for (chain, L, e), a in vec.items():
        vals.setdefault(chain, {})[L, e] = a
    return OrderedCochain(level, {ch: PolyVectorSection(cover, ch[0], p, t) for ch, t in vals.items()})


def is_coboundary(c, cover, p, check=True):
    """A level-(q−1) primitive b with cech_d(b) = c, or None."""
    if check and cech_d(c, cover.poset):
        raise NotClosed("cochain is not closed")
    G = _graded(cover, p)
    total = {}
    for w, rhs in sorted(to_vectors(c).items()):
        sol = G.solve(c.level, w, rhs)
        if sol is None:
            return None
        total.update(sol)
    return from_vector(cover, p, c.level - 1, total)


def class_coordinates(c, cover, p):
    """Coordinates of a cocycle in the per-character H-bases: {(w, k): coeff}."""
    G = _graded(cover, p)
    out = {}
    for w, rhs in sorted(to_vectors(c).items()):
        dims, bases, ebs = G.cohomology(w)
        sol = ebs[c.level].solve(rhs)
        if sol is None:
            raise NotClosed("cochain is not closed")
        for tag, a in sol.items():
            if tag[0] == "H" and a:
                out[w, tag[1]] = a
    return out


class CechClass:
    """Class of a closed polyvector-valued cochain in H^q(∧^p T)."""

    def __init__(self, cover, p, representative, check=True):
        self.cover = cover
        self.p = p
        self.q = representative.level
        self.representative = representative
        if check and cech_d(representative, cover.poset):
            raise NotClosed("representative is not closed")

    @property
    def level(self):
        return self.q

    def is_zero(self):
        return is_coboundary(self.representative, self.cover, self.p, check=False) is not None

    def primitive(self):
        return is_coboundary(self.representative, self.cover, self.p, check=False)

    def __sub__(self, other):
        return CechClass(self.cover, self.p, self.representative - other.representative, check=False)

    def equals(self, other):
        return (self - other).is_zero()

    def coordinates(self):
        return class_coordinates(self.representative, self.cover, self.p)

    def __repr__(self):
        return f"CechClass(H^{self.q}(∧^{self.p} T), zero={self.is_zero()})"


def class_of(c, cover, p):
    return CechClass(cover, p, c)


# cohomology tables ---------------------------------------------------------------

class CohomologyResult:
    def __init__(self, p, dims, witnesses, characters):
        self.p = p
        self.dims = dims
        self.witnesses = witnesses  # q -> list of (character, OrderedCochain)
        self.characters = characters

    def __getitem__(self, q):
        return self.dims.get(q, 0)

    def __repr__(self):
        return f"CohomologyResult(p={self.p}, {self.dims})"


def _box(n, r):
    return list(product(range(-r, r + 1), repeat=n))


def sheaf_cohomology(X, p, window=None, max_widen=2):
    """Dimensions of H^q(X, ∧^p T) for q = 0..3, with cocycle witnesses.

    ``window`` is a box radius or an explicit list of characters.  With a
    radius, the boundary shell of the box must carry no cohomology; the box
    is widened otherwise and WindowTooSmall is raised if that keeps failing.
    """
    if not X.toric:
        from .errors import Unsupported
        raise Unsupported("cohomology needs a toric-presented cover")
    G = _graded(X, p)
    n = len(X.chars[X.top])
    if window is not None and not isinstance(window, int):
        chars = [tuple(w) for w in window]
        return _collect(G, p, chars)
    r = window if window is not None else p + G.maxlen + 3
    for attempt in range(max_widen + 1):
        shell = [w for w in _box(n, r) if max((abs(x) for x in w), default=0) == r]
        bad = None
        for w in shell:
            dims = G.cohomology(w)[0]
            if any(dims.values()):
                bad = w
                break
        if bad is None:
            return _collect(G, p, _box(n, r))
        if window is not None or attempt == max_widen:
            raise WindowTooSmall(f"character {bad} on the window boundary carries cohomology", bad)
        r += 2
    raise AssertionError("unreachable")


def _collect(G, p, chars):
    dims = {q: 0 for q in range(4)}
    wit = {q: [] for q in range(4)}
    support = []
    for w in sorted(chars):
        d, bases, _ = G.cohomology(w)
        if any(d.values()):
            support.append(w)
        for q, k in d.items():
            if q in dims:
                dims[q] += k
                for vec in bases[q]:
                    wit[q].append((w, from_vector(G.cover, p, q, vec)))
            elif k:
                dims[q] = k
                wit[q] = [(w, from_vector(G.cover, p, q, vec)) for vec in bases[q]]
    return CohomologyResult(p, dims, wit, support)


__all__ = [
    "CechClass", "CohomologyResult", "GradedCech", "OrderedCochain", "TotalCochain", "cech_d",
    "class_coordinates", "class_of", "default_transport", "extend_Sn", "from_vector", "is_coboundary",
    "section_transport", "sheaf_cohomology", "to_vectors", "total_coboundary", "unorder_pairwise",
]
