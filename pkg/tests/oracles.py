"""Independent reference computations used by the tests.

Nothing here imports ncdeform: the toric Čech oracle works with fans and
the standard cover by maximal cones, and uses sympy for exact ranks.
"""

from itertools import combinations, product
from math import comb

import sympy


def bott_h0_polyvectors(n, p):
    """h^0(P^n, ∧^p T) = C(n+1+p, p) C(n, p); higher cohomology vanishes."""
    if p < 0 or p > n:
        return 0
    return comb(n + 1 + p, p) * comb(n, p)


def bott_table(n, pmax=None):
    pmax = n if pmax is None else pmax
    return {p: {0: bott_h0_polyvectors(n, p)} for p in range(pmax + 1)}


def kunneth_h0(tables, p):
    """h^0(∧^p T) of a product from the factor tables (all higher cohomology zero)."""
    (a, b) = tables
    return sum(a.get(i, {}).get(0, 0) * b.get(p - i, {}).get(0, 0) for i in range(p + 1))


class Fan:
    """A smooth complete fan: rays in Z^n and maximal cones as lists of ray indices."""

    def __init__(self, rays, cones):
        self.rays = [tuple(r) for r in rays]
        self.cones = [tuple(c) for c in cones]
        self.n = len(self.rays[0])


def projective_fan(n):
    rays = [tuple(-1 for _ in range(n))] + [tuple(int(i == k) for i in range(n)) for k in range(n)]
    cones = [[r for r in range(n + 1) if r != j] for j in range(n + 1)]
    return Fan(rays, cones)


def product_fan(A, B):
    rays = [r + (0,) * B.n for r in A.rays] + [(0,) * A.n + r for r in B.rays]
    off = len(A.rays)
    cones = [list(a) + [off + b for b in bc] for a in A.cones for bc in B.cones]
    return Fan(rays, cones)


def _wedge_matrix(V, p):
    """∧^p of the row-change matrix V in the basis of sorted p-subsets."""
    n = V.shape[0]
    subsets = list(combinations(range(n), p))
    M = sympy.zeros(len(subsets), len(subsets))
    for a, L in enumerate(subsets):
        for b, K in enumerate(subsets):
            M[a, b] = V.extract(list(L), list(K)).det() if p else 1
    return M, subsets


def _local_spaces(fan, p, m):
    """{S: basis rows (θ-coordinates) of weight-m sections of ∧^p T over U_S}."""
    n = fan.n
    out = {}
    for size in range(1, len(fan.cones) + 1):
        for S in combinations(range(len(fan.cones)), size):
            face = set(fan.cones[S[0]])
            for s in S[1:]:
                face &= set(fan.cones[s])
            chart = fan.cones[S[0]]
            V = sympy.Matrix([list(fan.rays[r]) for r in chart])
            W, subsets = _wedge_matrix(V, p)
            a = [sum(x * y for x, y in zip(m, fan.rays[r])) for r in chart]
            rows = []
            for idx, L in enumerate(subsets):
                ok = all(a[k] + (k in L) >= 0 for k, r in enumerate(chart) if r in face)
                if ok:
                    rows.append(W.row(idx))
            out[S] = rows
    return out


def cech_dims_at(fan, p, m):
    """{q: dim} of Čech cohomology of the standard cover in weight m."""
    spaces = _local_spaces(fan, p, m)
    dim_amb = comb(fan.n, p)
    by_level = {}
    for S, rows in spaces.items():
        by_level.setdefault(len(S) - 1, []).append(S)
    top = max(by_level)
    ranks = {}
    for q in range(top):
        src, tgt = by_level[q], by_level[q + 1]
        tpos = {S: k for k, S in enumerate(tgt)}
        cols = []
        for S in src:
            for row in spaces[S]:
                col = sympy.zeros(dim_amb * len(tgt), 1)
                for T in tgt:
                    if not set(S) <= set(T):
                        continue
                    extra = [x for x in T if x not in S][0]
                    pos = T.index(extra)
                    sign = -1 if pos % 2 else 1
                    base = tpos[T] * dim_amb
                    for c in range(dim_amb):
                        col[base + c] += sign * row[c]
                cols.append(col)
        ranks[q] = sympy.Matrix.hstack(*cols).rank() if cols else 0
    dims = {}
    for q in range(top + 1):
        cq = sum(len(spaces[S]) for S in by_level[q])
        dims[q] = cq - ranks.get(q, 0) - ranks.get(q - 1, 0)
    return dims


def toric_cohomology(fan, p, radius=None):
    """{q: h^q(∧^p T)} summed over characters in a box."""
    radius = fan.n + 2 if radius is None else radius
    total = {}
    for m in product(range(-radius, radius + 1), repeat=fan.n):
        for q, k in cech_dims_at(fan, p, m).items():
            if k:
                total[q] = total.get(q, 0) + k
    return total
