"""Sparse exact linear algebra over a field.

Vectors are dicts mapping comparable keys to nonzero scalars.  All routines
are exact; pivots are chosen deterministically so results are reproducible.
"""

from gmpy2 import mpq

from .field import GFElement


def one_like(x):
    """The unit of the field that scalar ``x`` lives in."""
    if isinstance(x, GFElement):
        return GFElement(1, x.p)
    return mpq(1)


def vec_axpy(target, x, a):
    """In place: target += a * x, dropping zeros."""
    for k, v in x.items():
        nv = target.get(k, 0) + a * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def vec_scale(x, a):
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def vec_add(x, y, a=1):
    out = dict(x)
    vec_axpy(out, y, a)
    return out


class EchelonBasis:
    """Incrementally built row echelon basis with combination tracking.

    Every stored row is a linear combination of the vectors passed to
    :meth:`add`, and that combination is kept (keyed by the caller's tag), so
    reducing a right-hand side also yields a preimage.  ``key`` orders keys
    for pivot selection: the pivot of a row is the minimal key under it.
    """

    def __init__(self, key=None, track=True):
        self.key = key
        self.track = track
        self.rows = []  # (pivot, vec, comb)
        self.pivots = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def _pivot(self, vec):
        if self.key is None:
            return min(vec)
        return min(vec, key=self.key)

    def reduce(self, vec, comb=None):
        """Return (remainder, comb) with remainder = vec + Σ comb[t]·added[t]."""
        v = dict(vec)
        c = dict(comb) if comb else {}
        pivots = self.pivots
        hits = sorted(pivots[k] for k in v if k in pivots)
        if not hits:
            return v, c
        rows = self.rows
        # rows are processed in insertion order; eliminating the pivot of a
        # row never reintroduces the pivot of an earlier row
        pending = set(hits)
        idx = 0
        while idx < len(hits):
            r = hits[idx]
            idx += 1
            piv, row, rc = rows[r]
            a = v.get(piv)
            if not a:
                continue
            for k, x in row.items():
                nv = v.get(k, 0) - a * x
                if nv:
                    v[k] = nv
                    rr = pivots.get(k)
                    if rr is not None and rr not in pending:
                        pending.add(rr)
                        _insort(hits, rr, idx)
                else:
                    v.pop(k, None)
            if self.track:
                vec_axpy(c, rc, -a)
        return v, c

    def add(self, vec, tag=None):
        """Add a vector.  Returns None if it was independent, otherwise the
        combination {tag: coeff} of earlier vectors that it equals."""
        comb = {}
        if self.track and tag is not None:
            comb = {tag: one_like(next(iter(vec.values()))) if vec else mpq(1)}
        rem, comb = self.reduce(vec, comb)
        if not rem:
            if self.track and tag is not None:
                return {t: -a for t, a in comb.items() if t != tag}
            return {}
        piv = self._pivot(rem)
        inv = 1 / rem[piv]
        row = {k: x * inv for k, x in rem.items()}
        rc = {t: a * inv for t, a in comb.items()} if self.track else {}
        self.pivots[piv] = len(self.rows)
        self.rows.append((piv, row, rc))
        return None

    def contains(self, vec):
        rem, _ = self.reduce(vec)
        return not rem

    def solve(self, vec):
        """Return {tag: coeff} with Σ coeff·added[tag] = vec, or None."""
        rem, comb = self.reduce(vec)
        if rem:
            return None
        return {t: -a for t, a in comb.items() if a}


def _insort(lst, x, lo):
    hi = len(lst)
    while lo < hi:
        mid = (lo + hi) // 2
        if lst[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    lst.insert(lo, x)


def rank(vectors):
    eb = EchelonBasis(track=False)
    for v in vectors:
        eb.add(v)
    return eb.rank


def nullspace(columns, one=None):
    """Kernel of the linear map whose i-th column is ``columns[i]``.

    Returns a list of dicts {column index: coeff}.
    """
    if one is None:
        one = next((one_like(x) for col in columns for x in col.values()), mpq(1))
    eb = EchelonBasis()
    kernel = []
    for i, col in enumerate(columns):
        dep = eb.add(col, tag=i)
        if dep is not None:
            vec = {t: -a for t, a in dep.items() if a}
            vec[i] = one
            kernel.append(vec)
    return kernel


def solve(columns, rhs):
    """Find x with Σ x_i columns[i] = rhs, or None if inconsistent."""
    eb = EchelonBasis()
    for i, col in enumerate(columns):
        eb.add(col, tag=i)
    return eb.solve(rhs)
