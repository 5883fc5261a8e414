"""Truncated semi-universal families, built order by order.

The tangent space is spanned by global bivectors, vector-field 1-cocycles and
(twisted) function 2-cocycles.  Starting from the universal first-order
family over k[t_1..t_n]/m², each step lifts to P/(I + m^{d+1}); whenever a
lift is obstructed, the coordinates of the obstruction class become new
relations of degree d and the step is retried over the smaller base.
"""

from itertools import combinations

from ..algebra.artin import ArtinLocalAlgebra, ground_field_algebra, small_extension
from ..algebra.poly import format_terms
from ..cech import OrderedCochain, sheaf_cohomology
from ..errors import InfiniteDimensional, Obstructed, Unsupported, WindowTooSmall
from ..geometry import PolyVectorSection
from .deformation import NCDeformation
from .obstruction import T1Choice, extend_with_report

T1_PIECES = {"untwisted": ((2, 0), (1, 1)), "twisted": ((2, 0), (1, 1), (0, 2))}
T2_PIECES = {"untwisted": ((3, 0), (2, 1), (1, 2)), "twisted": ((3, 0), (2, 1), (1, 2), (0, 3))}
_KIND = {2: "bivectors", 1: "vectors", 0: "functions"}


class TangentVector:
    def __init__(self, p, q, cocycle, label):
        self.p = p
        self.q = q
        self.cocycle = cocycle
        self.label = label

    def __repr__(self):
        return f"TangentVector(H^{self.q}(wedge^{self.p} T), {self.label})"


def _monomials(d, cap):
    out = []
    for total in range(cap + 1):
        for combo in combinations(range(d + total - 1), d - 1):
            e, prev = [], -1
            for c in combo + (d + total - 1,):
                e.append(c - prev - 1)
                prev = c
            out.append(tuple(e))
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


def _affine_slice(X, p, cap):
    """Polyvector fields of coefficient degree <= cap on a single-chart cover."""
    (i,) = X.ids
    d = X.dim(i)
    out = []
    for L in combinations(range(d), p):
        for e in _monomials(d, cap):
            sec = PolyVectorSection(X, i, p, {(L, e): X.field(1)})
            out.append(OrderedCochain(0, {(i,): sec}))
    return out


def _pieces(X, pieces, window, cap):
    """{(p, q): list of cocycles} spanning each cohomology piece."""
    out = {}
    for p, q in pieces:
        if cap is not None and len(X.ids) == 1:
            out[p, q] = _affine_slice(X, p, cap) if q == 0 else []
            continue
        try:
            res = sheaf_cohomology(X, p, window)
        except WindowTooSmall as exc:
            raise InfiniteDimensional(
                f"H^{q}(wedge^{p} T) is not finite-dimensional on {X.name}; pass a degree cap") from exc
        out[p, q] = [c for _w, c in res.witnesses.get(q, [])]
    return out


def tangent_basis(X, mode="untwisted", window=None, cap=None):
    if cap is not None and len(X.ids) != 1:
        raise Unsupported("degree caps are supported on single-chart covers")
    basis = []
    for (p, q), cocycles in _pieces(X, T1_PIECES[mode], window, cap).items():
        for k, c in enumerate(cocycles):
            basis.append(TangentVector(p, q, c, f"{_KIND[p]}[{k}]"))
    return basis


def obstruction_dims(X, mode="untwisted", window=None, cap=None):
    if cap is not None and len(X.ids) == 1:
        return {pq: 0 for pq in T2_PIECES[mode]} | {(3, 0): _wedge_count(X, 3, cap)}
    return {pq: len(v) for pq, v in _pieces(X, T2_PIECES[mode], window, None).items()}


def _wedge_count(X, p, cap):
    (i,) = X.ids
    return len(_affine_slice(X, p, cap)) if X.dim(i) >= p else 0


class HullResult:
    def __init__(self, X, mode, order, params, relations, family, tangent, obstruction_dims, log):
        self.X = X
        self.mode = mode
        self.order = order
        self.params = params
        self.relations = relations
        self.family = family
        self.tangent = tangent
        self.obstruction_dims = obstruction_dims
        self.log = log

    @property
    def base(self):
        return self.family.R

    def presentation(self):
        if not self.params:
            return "k"
        ring = f"k[[{', '.join(self.params)}]]"
        if self.relations:
            ring += f"/({', '.join(self.relations)})"
        return f"{ring} mod degree {self.order + 1}"

    def to_json(self, family=False):
        out = {
            "variety": self.X.name,
            "mode": self.mode,
            "order": self.order,
            "parameters": list(self.params),
            "relations": list(self.relations),
            "presentation": self.presentation(),
            "tangent_dim": len(self.tangent),
            "tangent": [t.label for t in self.tangent],
            "obstruction_dims": {f"H^{q}(wedge^{p} T)": k for (p, q), k in sorted(self.obstruction_dims.items())},
            "steps": self.log,
        }
        if family:
            out["family"] = self.family.to_json()
        return out

    def __repr__(self):
        return f"HullResult({self.X.name}, {self.presentation()})"


def _first_order_choice(R1, ext, basis):
    """J ⊗ T¹ element sending J-coordinate of t_k to the k-th tangent vector."""
    bivectors, vectors, functions = {}, {}, {}
    target = {2: bivectors, 1: vectors, 0: functions}
    for k, tv in enumerate(basis):
        coords = ext.j_coords(R1.gen(R1.params[k]))
        for a, x in coords.items():
            bucket = target[tv.p]
            c = tv.cocycle.scale(x)
            bucket[a] = bucket[a] + c if a in bucket else c
    return T1Choice(bivectors, vectors, functions)


def _relations_from(report, ext):
    """Coordinates of the first nonzero class as elements of J."""
    cls = report.classes[report.stage]
    Rp = ext.source
    rows = {}
    for a, coords in cls.coordinates().items():
        for key, x in coords.items():
            row = rows.setdefault(key, {})
            for u, y in ext.J[a].items():
                row[u] = row.get(u, 0) + x * y
    out = []
    for key in sorted(rows):
        elem = {u: c for u, c in rows[key].items() if c}
        if elem:
            out.append(Rp.to_terms(elem))
    return out


def hull(X, mode="untwisted", order=2, window=None, cap=None, validate="full"):
    """Truncated semi-universal family of X to the given order.

    ``validate`` is "full" (all defining identities at every order), "new"
    (only the components added at each order) or None.
    """
    if mode not in T1_PIECES:
        raise Unsupported(f"unknown mode {mode!r}")
    basis = tangent_basis(X, mode, window, cap)
    t2 = obstruction_dims(X, mode, window, cap)
    n = len(basis)
    field = X.field
    twisted = mode == "twisted"
    params = [f"t{k + 1}" for k in range(n)]
    log = []
    R0 = ground_field_algebra(field)
    D = NCDeformation.trivial(X, R0, twisted)
    if n == 0:
        return HullResult(X, mode, order, [], [], D, basis, t2, log)
    relations = []
    R1 = ArtinLocalAlgebra(params, (), 1, field)
    ext = small_extension(R1, R0)
    D, _ = extend_with_report(D, ext, _first_order_choice(R1, ext, basis), validate=validate is not None)
    if validate == "full":
        D.check()
    log.append({"order": 1, "base_dim": R1.dim, "new_relations": 0})
    prev = R1
    for d in range(2, order + 1):
        added = 0
        while True:
            Rd = ArtinLocalAlgebra(params, relations, d, field)
            ext = small_extension(Rd, prev)
            try:
                D, rep = extend_with_report(D, ext, validate=validate is not None)
                break
            except Obstructed as exc:
                new = _relations_from(exc.report, ext)
                if not new:
                    raise
                relations.extend(new)
                added += len(new)
        if validate == "full":
            D.check()
        log.append({"order": d, "base_dim": Rd.dim, "new_relations": added})
        prev = Rd
    rel_text = [format_terms(r, params) for r in relations]
    return HullResult(X, mode, order, params, rel_text, D, basis, t2, log)


__all__ = ["HullResult", "TangentVector", "hull", "obstruction_dims", "tangent_basis"]
