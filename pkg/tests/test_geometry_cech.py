import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdeform.cech import (OrderedCochain, cech_d, class_of, extend_Sn, is_coboundary, sheaf_cohomology,
                           total_coboundary, unorder_pairwise)
from ncdeform.errors import IncompatibleData, NotClosed
from ncdeform.geometry import Cover, PolyVectorSection, Poset, affine, builtin_variety, proj, restrict
from ncdeform.suites import random_cocycle, random_semilattice

seeds = st.integers(min_value=0, max_value=10**6)


def test_poset_joins_and_chains():
    P = Poset(["a", "b", "ab"], [("a", "ab"), ("b", "ab")])
    assert P.join("a", "b") == "ab"
    assert P.top == "ab"
    assert P.chains(2) == [("ab", "a"), ("ab", "b")]
    with pytest.raises(IncompatibleData):
        Poset(["a", "b"], [])


def test_builtin_covers():
    X = proj(2)
    assert len(X.ids) == 7
    assert X.dim(X.top) == 2
    assert builtin_variety(" proj(2) ") is builtin_variety("proj(2)")
    Y = builtin_variety("product(proj(1),proj(1))")
    assert len(Y.ids) == 9 and Y.dim(Y.top) == 2
    X.check()


def test_cover_json_roundtrip():
    X = proj(1)
    Y = Cover.from_json(X.to_json())
    assert Y.ids == X.ids
    assert Y.phi("01", "0") == X.phi("01", "0")


def test_restriction_of_vector_field_on_proj1():
    X = proj(1)
    v = PolyVectorSection(X, "0", 1, {((0,), (0,)): X.field(1)})  # ∂ on the chart X0 != 0
    w = restrict(v, "01")
    assert w.chart == "01"
    assert w  # −u² ∂_u in the other coordinate, nonzero


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_cech_d_squared_zero_on_sections(seed):
    rng = random.Random(seed)
    X = proj(2)
    p = rng.randint(0, 2)
    vals = {}
    for ch in X.chains(2):
        e = tuple(rng.randint(-2, 2) for _ in range(2))
        if not X.ring(ch[0]).is_legal(e):
            continue
        L = tuple(sorted(rng.sample(range(2), p)))
        vals[ch] = PolyVectorSection(X, ch[0], p, {(L, e): X.field(rng.randint(1, 3))})
    c = OrderedCochain(1, vals)
    assert not cech_d(cech_d(c, X.poset), X.poset)


def test_cohomology_proj_table():
    res = sheaf_cohomology(proj(1), 1)
    assert res.dims[0] == 3 and res.dims[1] == 0
    res2 = sheaf_cohomology(proj(2), 2)
    assert res2.dims[0] == 10
    assert len(res2.witnesses[0]) == 10


def test_global_sections_are_coboundary_free():
    X = proj(1)
    res = sheaf_cohomology(X, 1)
    for _w, c in res.witnesses[0]:
        assert not cech_d(c, X.poset)
        assert not class_of(c, X, 1).is_zero()


def test_is_coboundary_recovers_primitive():
    X = proj(1)
    b = OrderedCochain(0, {("0",): PolyVectorSection(X, "0", 0, {((), (2,)): X.field(1)})})
    c = cech_d(b, X.poset)
    prim = is_coboundary(c, X, 0)
    assert prim is not None
    assert cech_d(prim, X.poset) == c
    with pytest.raises(NotClosed):
        is_coboundary(b, X, 0)


@given(seeds, st.sampled_from([1, 2, 3]))
@settings(max_examples=40, deadline=None)
def test_extend_sn_restricts_and_is_cocycle(seed, n):
    rng = random.Random(seed)
    P = random_semilattice(rng)
    h = random_cocycle(P, n, rng, dim=3)
    zero = np.zeros(3, dtype=np.int64)
    tc = extend_Sn(h, P, zero=zero)
    for ch in P.chains(n):
        assert np.array_equal(tc(ch), h.values.get(ch, zero))
    for tup in product(P.elements, repeat=n + 1):
        assert not np.any(total_coboundary(tc, tup))


def test_extend_sn_rejects_non_cocycles():
    P = Poset(["a", "ab"], [("a", "ab")])
    h = OrderedCochain(0, {("a",): 1, ("ab",): 2})
    with pytest.raises(NotClosed):
        extend_Sn(h, P)


def test_unorder_pairwise_is_antisymmetric():
    P = Poset(["a", "b", "ab"], [("a", "ab"), ("b", "ab")])
    g = OrderedCochain(1, {("ab", "a"): 3, ("ab", "b"): 5})
    tc = unorder_pairwise(g, P)
    assert tc(("a", "b")) == -tc(("b", "a"))
    assert tc(("ab", "a")) == 3
    assert tc(("a", "a")) == 0
