import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdeform.deform.lift import random_cochain
from ncdeform.errors import NotACocycle
from ncdeform.geometry import PolyVectorSection, affine, builtin_variety
from ncdeform.hochschild import (PolyDiffCochain, antisymmetric_part, coboundary, evaluate, hkr_class,
                                 lift_polyvector, precompose, push, solve_coboundary)

seeds = st.integers(min_value=0, max_value=10**6)


def _cover_pair(rng):
    X = rng.choice([affine(2), builtin_variety("proj(2)")])
    src = rng.choice(X.ids)
    tgt = rng.choice([j for j in X.ids if j == src or X.lt(src, j)])
    return X, src, tgt


@given(seeds, st.integers(min_value=0, max_value=3))
@settings(max_examples=40, deadline=None)
def test_d_squared_vanishes(seed, p):
    rng = random.Random(seed)
    X, src, tgt = _cover_pair(rng)
    c = random_cochain(X, src, tgt, p, rng, max_order=2, max_degree=3, terms=4, normalized=False)
    assert not coboundary(coboundary(c))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_coboundaries_have_zero_class(seed):
    rng = random.Random(seed)
    X, src, tgt = _cover_pair(rng)
    c = random_cochain(X, src, tgt, rng.randint(1, 2), rng, max_order=2, max_degree=2, terms=3, normalized=False)
    assert not hkr_class(coboundary(c), check=False)


def test_coboundary_of_derivation_is_zero():
    X = affine(2)
    v = PolyVectorSection(X, "A", 1, {((0,), (0, 1)): X.field(1)})
    assert not coboundary(lift_polyvector(v))


def test_evaluate_on_polynomials():
    X = affine(2)
    ring = X.ring("A")
    c = PolyDiffCochain(X, "A", "A", 2, {(((1, 0), (0, 1)), (0, 0)): X.field(1)})
    f, g = ring.parse("x^2*y"), ring.parse("x*y^3")
    assert evaluate(c, [f, g]) == ring.parse("2*x*y") * ring.parse("3*x*y^2")


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_hkr_inverts_lift(seed):
    rng = random.Random(seed)
    X = affine(3)
    p = rng.randint(1, 3)
    terms = {}
    for _ in range(3):
        L = tuple(sorted(rng.sample(range(3), p)))
        e = tuple(rng.randint(0, 2) for _ in range(3))
        terms[(L, e)] = terms.get((L, e), 0) + X.field(rng.choice([-2, -1, 1, 3]))
    sec = PolyVectorSection(X, "A", p, terms)
    c = lift_polyvector(sec)
    assert not coboundary(c)
    assert hkr_class(c) == sec
    assert antisymmetric_part(c) == c


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_solve_coboundary_finds_primitive(seed):
    rng = random.Random(seed)
    X = affine(2)
    b = random_cochain(X, "A", "A", 2, rng, max_order=2, max_degree=2, terms=3)
    c = coboundary(b)
    B = solve_coboundary(c)
    assert B is not None
    assert coboundary(B) == c


def test_solve_coboundary_detects_nonzero_class():
    X = affine(3)
    pi = PolyVectorSection(X, "A", 3, {((0, 1, 2), (0, 0, 0)): X.field(1)})
    assert solve_coboundary(lift_polyvector(pi)) is None


def test_hkr_rejects_non_cocycle():
    X = affine(2)
    c = PolyDiffCochain(X, "A", "A", 2, {(((1, 0), (1, 0)), (1, 0)): X.field(1)})
    c = c + PolyDiffCochain(X, "A", "A", 2, {(((0, 0), (1, 0)), (0, 0)): X.field(1)})
    with pytest.raises(NotACocycle):
        hkr_class(c)


def test_push_and_precompose_commute_with_d():
    rng = random.Random(3)
    X = builtin_variety("proj(2)")
    j, i = X.chains(2)[0]
    c = random_cochain(X, i, i, 1, rng)
    assert coboundary(push(c, j)) == push(coboundary(c), j)
    d = random_cochain(X, j, j, 1, rng)
    assert coboundary(precompose(d, i)) == precompose(coboundary(d), i)
