"""Artin local algebras k[t_1..t_n]/(I + m^{N+1}) and maps between them.

Normal forms are computed by exact elimination of the ideal inside the finite
window of monomials of degree <= N.  Pivots follow a local ordering (lowest
degree first) so that the span of standard monomials of degree >= n is the
n-th power of the maximal ideal.
"""

from itertools import combinations_with_replacement

from ..errors import IncompatibleData, InvalidBaseChange, InvalidIdeal, NotSmall, NotSurjective
from .field import QQ
from .linalg import EchelonBasis, nullspace, vec_axpy
from .poly import LaurentRing, Poly, format_terms, mono_mul, parse_terms


def local_key(e):
    return (sum(e), tuple(-x for x in e))


def monomials_upto(n, N):
    """All exponent tuples in n variables of total degree <= N, local order."""
    out = []
    for d in range(N + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    out.sort(key=local_key)
    return out


def _as_terms(g, params, field):
    if isinstance(g, Poly):
        return dict(g.terms)
    if isinstance(g, dict):
        return {tuple(e): field(c) for e, c in g.items()}
    return parse_terms(str(g), params, field)


def ideal_window(n, gens, N):
    """Echelon basis of (gens) inside k[t]/m^{N+1}, local pivots."""
    eb = EchelonBasis(key=local_key, track=False)
    for g in gens:
        if not g:
            continue
        low = min(sum(e) for e in g)
        for m in monomials_upto(n, N - low):
            v = {}
            for e, c in g.items():
                f = mono_mul(e, m)
                if sum(f) <= N:
                    v[f] = v.get(f, 0) + c
            v = {e: c for e, c in v.items() if c}
            if v:
                eb.add(v)
    return eb


class ArtinLocalAlgebra:
    """R = k[t_1..t_n]/(ideal + m^{order+1}) with a standard monomial basis.

    Elements are dicts {basis index: scalar}; index 0 is the unit.
    """

    def __init__(self, params, ideal=(), order=1, field=QQ):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        self.params = tuple(params)
        self.field = field
        self.order = int(order)
        n = len(self.params)
        self.nparams = n
        gens = []
        for g in ideal:
            terms = {e: c for e, c in _as_terms(g, self.params, field).items() if c}
            for e in terms:
                if any(x < 0 for x in e):
                    raise InvalidIdeal(f"negative exponent in ideal generator {g}")
            if (0,) * n in terms:
                raise InvalidIdeal(f"ideal generator {format_terms(terms, self.params)} has a nonzero constant term")
            gens.append(terms)
        self.ideal = tuple(gens)
        self._eb = ideal_window(n, gens, self.order)
        pivots = set(self._eb.pivots)
        self.basis = [e for e in monomials_upto(n, self.order) if e not in pivots]
        self.index = {e: i for i, e in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.degrees = [sum(e) for e in self.basis]
        self._nf = {}
        self._mul = {}
        self.poly_ring = LaurentRing(self.params, (), field)

    # normal forms -----------------------------------------------------
    def nf_monomial(self, e):
        r = self._nf.get(e)
        if r is None:
            if sum(e) > self.order:
                r = {}
            elif e in self.index:
                r = {self.index[e]: self.field(1)}
            else:
                rem, _ = self._eb.reduce({e: self.field(1)})
                r = {self.index[f]: c for f, c in rem.items()}
            self._nf[e] = r
        return r

    def normal_form(self, terms):
        """Element of R from a polynomial given as terms, Poly or string."""
        if isinstance(terms, (str, Poly)):
            terms = _as_terms(terms, self.params, self.field)
        out = {}
        for e, c in terms.items():
            vec_axpy(out, self.nf_monomial(tuple(e)), c)
        return out

    def to_terms(self, elem):
        return {self.basis[i]: c for i, c in elem.items() if c}

    def fmt(self, elem):
        return format_terms(self.to_terms(elem), self.params)

    def basis_name(self, i):
        return format_terms({self.basis[i]: 1}, self.params)

    # arithmetic ---------------------------------------------------------
    def mul_basis(self, i, j):
        key = (i, j) if i <= j else (j, i)
        r = self._mul.get(key)
        if r is None:
            r = self.nf_monomial(mono_mul(self.basis[i], self.basis[j]))
            self._mul[key] = r
        return r

    def mul(self, a, b):
        out = {}
        for i, x in a.items():
            for j, y in b.items():
                vec_axpy(out, self.mul_basis(i, j), x * y)
        return out

    def add(self, a, b):
        out = dict(a)
        vec_axpy(out, b, 1)
        return out

    def one(self):
        return {0: self.field(1)}

    def gen(self, name):
        e = [0] * self.nparams
        e[self.params.index(name)] = 1
        return self.nf_monomial(tuple(e))

    @property
    def maximal_ideal(self):
        return [i for i in range(self.dim) if self.degrees[i] >= 1]

    def power_of_max_ideal(self, n):
        return [i for i in range(self.dim) if self.degrees[i] >= n]

    def nilpotency(self):
        """Smallest n with M^n = 0."""
        return max(self.degrees) + 1

    def __eq__(self, other):
        return (isinstance(other, ArtinLocalAlgebra) and self.params == other.params
                and self.field == other.field and self.basis == other.basis
                and all(self.nf_monomial(e) == other.nf_monomial(e)
                        for e in monomials_upto(self.nparams, max(self.order, other.order) + 1)))

    def __hash__(self):
        return hash((self.params, tuple(self.basis)))

    def __repr__(self):
        gens = ", ".join(format_terms(g, self.params) for g in self.ideal)
        return f"ArtinLocalAlgebra({list(self.params)}, [{gens}], order={self.order}, dim={self.dim})"

    def to_json(self):
        return {"params": list(self.params),
                "ideal": [format_terms(g, self.params) for g in self.ideal],
                "order": self.order}

    @classmethod
    def from_json(cls, data, field=QQ):
        return cls(data["params"], data.get("ideal", []), data["order"], field)


def artin_quotient(params, ideal_gens=(), order=1, field=QQ):
    if order < 1:
        raise ValueError("order must be >= 1")
    return ArtinLocalAlgebra(params, ideal_gens, order, field)


def ground_field_algebra(field=QQ):
    """k itself as the Artin algebra with no parameters."""
    return ArtinLocalAlgebra((), (), 0, field)


def truncation(params, order, field=QQ):
    """k[t]/m^{order+1}."""
    return ArtinLocalAlgebra(params, (), order, field)


class ArtinHom:
    """Local k-algebra homomorphism determined by images of parameters."""

    def __init__(self, source, target, images=None):
        self.source = source
        self.target = target
        images = dict(images or {})
        imgs = []
        for p in source.params:
            v = images.get(p)
            if v is None:
                v = target.gen(p) if p in target.params else {}
            elif not isinstance(v, dict):
                v = target.normal_form(v)
            if v.get(0):
                raise InvalidBaseChange(f"image of {p} has a nonzero constant term: not local")
            imgs.append(v)
        self.images = imgs
        self.matrix = [self._image_of_monomial(e) for e in source.basis]
        # well-definedness: every relation of the source maps to zero
        for g in source.ideal:
            if self._image_of_terms(g):
                raise InvalidBaseChange("parameter assignment does not kill the source ideal")
        for e in monomials_upto(source.nparams, source.order + 1):
            if sum(e) == source.order + 1 and self._image_of_monomial(e):
                raise InvalidBaseChange("parameter assignment does not kill the truncation")

    def _image_of_monomial(self, e):
        out = self.target.one()
        for i, k in enumerate(e):
            for _ in range(k):
                out = self.target.mul(out, self.images[i])
        return out

    def _image_of_terms(self, terms):
        out = {}
        for e, c in terms.items():
            vec_axpy(out, self._image_of_monomial(e), c)
        return out

    def __call__(self, elem):
        out = {}
        for i, c in elem.items():
            vec_axpy(out, self.matrix[i], c)
        return out

    def is_surjective(self):
        eb = EchelonBasis(track=False)
        for col in self.matrix:
            eb.add(col)
        return eb.rank == self.target.dim

    def kernel(self):
        return [{i: c for i, c in v.items()} for v in nullspace(self.matrix)]


class SmallExtension:
    """A surjection R' -> R whose kernel J satisfies M'·J = 0.

    Provides a k-linear section R -> R' and the projection of R' onto
    J-coordinates complementary to that section.
    """

    def __init__(self, source, target, assignment=None):
        self.source = source
        self.target = target
        self.map = ArtinHom(source, target, assignment)
        if not self.map.is_surjective():
            raise NotSurjective("R' -> R is not surjective")
        J = self.map.kernel()
        self.J = J
        self.dimJ = len(J)
        for m in source.maximal_ideal:
            for a, j in enumerate(J):
                if source.mul({m: source.field(1)}, j):
                    raise NotSmall(f"M'J != 0: {source.basis_name(m)} * J[{a}] = "
                                   f"{source.fmt(source.mul({m: source.field(1)}, j))}")
        # section: prefer the same-named monomial when it maps to the basis vector
        section = []
        eb = EchelonBasis()
        for i, col in enumerate(self.map.matrix):
            eb.add(col, tag=i)
        for r, e in enumerate(target.basis):
            want = {r: target.field(1)}
            i = source.index.get(e) if source.params == target.params else None
            if i is not None and self.map.matrix[i] == want:
                section.append({i: target.field(1)})
            else:
                section.append(eb.solve(want))
        self.section = section
        # projection onto J-coordinates: invert [section | J]
        cols = section + J
        n = source.dim
        eb2 = EchelonBasis()
        for k, col in enumerate(cols):
            eb2.add(col, tag=k)
        proj = [dict() for _ in range(self.dimJ)]
        for u in range(n):
            sol = eb2.solve({u: source.field(1)})
            for k, c in sol.items():
                if k >= len(section) and c:
                    proj[k - len(section)][u] = c
        self.proj = proj  # proj[a][u]: J-coordinate a of basis vector u
        self._proj_by_u = {}
        for a, row in enumerate(proj):
            for u, c in row.items():
                self._proj_by_u.setdefault(u, []).append((a, c))

    def lift(self, elem):
        out = {}
        for r, c in elem.items():
            vec_axpy(out, self.section[r], c)
        return out

    def project(self, elem):
        """R' -> R."""
        return self.map(elem)

    def j_coords(self, elem):
        out = {}
        for u, c in elem.items():
            for a, x in self._proj_by_u.get(u, ()):
                out[a] = out.get(a, 0) + x * c
        return {a: c for a, c in out.items() if c}

    def j_element(self, a):
        return self.J[a]

    def j_name(self, a):
        return self.source.fmt(self.J[a])


def small_extension(Rp, R, assignment=None):
    return SmallExtension(Rp, R, assignment)


def _window_ideal_vectors(alg, params, N):
    """Ideal of ``alg`` (in the common parameter ring ``params``) inside the
    degree <= N window, as an echelon basis keyed by exponent tuples."""
    n = len(params)
    pos = [params.index(p) for p in alg.params]
    missing = [i for i, p in enumerate(params) if p not in alg.params]
    gens = []
    for g in alg.ideal:
        gens.append({_embed(e, pos, n): c for e, c in g.items()})
    for i in missing:
        e = [0] * n
        e[i] = 1
        gens.append({tuple(e): alg.field(1)})
    eb = ideal_window(n, gens, N)
    for e in monomials_upto(n, N):
        if sum(e) > alg.order:
            eb.add({e: alg.field(1)})
    return eb


def _embed(e, pos, n):
    out = [0] * n
    for k, p in zip(e, pos):
        out[p] = k
    return tuple(out)


def fiber_product(R1, R2, R0, maps=None):
    """P/(I1 ∩ I2) for R1 = P/I1, R2 = P/I2 over R0 = P/(I1 + I2).

    P is the polynomial ring on the union of the parameter names; a parameter
    absent from one of the algebras is treated as lying in its ideal.
    Returns (R', projection to R1, projection to R2).
    """
    if not (R1.field == R2.field == R0.field):
        raise IncompatibleData("algebras over different fields")
    params = []
    for R in (R1, R2, R0):
        for p in R.params:
            if p not in params:
                params.append(p)
    if maps:
        for m in maps:
            for p, img in dict(m).items():
                if str(img).strip() != p:
                    raise IncompatibleData("only the natural quotient maps of a common P are supported")
    params = tuple(params)
    N = max(R1.order, R2.order)
    V1 = _window_ideal_vectors(R1, params, N)
    V2 = _window_ideal_vectors(R2, params, N)
    V0 = _window_ideal_vectors(R0, params, N)
    rows1 = [row for _, row, _ in V1.rows]
    rows2 = [row for _, row, _ in V2.rows]
    # I1 + I2 must equal I0 inside the window
    s = EchelonBasis(key=local_key, track=False)
    for v in rows1 + rows2:
        s.add(v)
    if s.rank != V0.rank or not all(s.contains(row) for _, row, _ in V0.rows):
        raise IncompatibleData("R0 is not P/(I1 + I2) for the given R1, R2")
    # intersection via the kernel of [rows1 | -rows2]
    cols = rows1 + [{e: -c for e, c in v.items()} for v in rows2]
    inter = []
    for kv in nullspace(cols):
        v = {}
        for k, c in kv.items():
            if k < len(rows1):
                vec_axpy(v, rows1[k], c)
        if v:
            inter.append(v)
    Rp = ArtinLocalAlgebra(params, inter, N, R1.field)
    p1 = quotient_map(Rp, R1)
    p2 = quotient_map(Rp, R2)
    if Rp.dim != R1.dim + R2.dim - R0.dim:
        raise IncompatibleData("fiber product dimension mismatch")
    # injectivity of R' -> R1 x R2
    eb = EchelonBasis(track=False)
    for u in range(Rp.dim):
        v = {("1", k): c for k, c in p1.matrix[u].items()}
        v.update({("2", k): c for k, c in p2.matrix[u].items()})
        if eb.add(v) is not None:
            raise IncompatibleData("R' -> R1 x R2 is not injective")
    return Rp, p1, p2


def quotient_map(source, target):
    """The natural quotient map between presentations on shared parameters."""
    images = {p: ({} if p not in target.params else target.gen(p)) for p in source.params}
    return ArtinHom(source, target, images)
