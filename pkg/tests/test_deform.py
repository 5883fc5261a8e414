import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdeform.algebra import ArtinLocalAlgebra, ground_field_algebra, small_extension, truncation
from ncdeform.cech import OrderedCochain
from ncdeform.cli import obstructed_example
from ncdeform.deform import (Equivalence, NCDeformation, T1Choice, all_defects, apply_equivalence,
                             change_twist, check_identities, check_twist, compose_equivalences, equivalent,
                             extend, extend_with_report, glue, hull, inverse_equivalence, lift_candidate, moyal,
                             obstructions, random_choice, random_cochain, transform, twist_coboundary,
                             twist_cochain_d)
from ncdeform.errors import (CompatibilityViolated, IdentityViolation, InfiniteDimensional, InvalidDeformation,
                             NotGluable, Obstructed)
from ncdeform.geometry import PolyVectorSection, affine, builtin_variety
from ncdeform.hochschild import PolyDiffCochain
from ncdeform.suites import five_chain_cover, random_deformation

seeds = st.integers(min_value=0, max_value=10**6)
R1 = truncation(["t"], 1)
EXT2 = small_extension(truncation(["t"], 2), R1)


def test_trivial_and_moyal_are_valid():
    assert NCDeformation.trivial(builtin_variety("proj(2)"), R1).is_valid()
    assert moyal(order=3).is_valid()


def test_broken_product_is_rejected():
    X = affine(2)
    bad = PolyDiffCochain(X, "A", "A", 2, {(((2, 0), (1, 0)), (0, 0)): X.field(1)})
    D = NCDeformation.from_corrections(X, R1, mult={"A": {"t": bad}})
    with pytest.raises(InvalidDeformation):
        D.check()


def test_deformation_json_roundtrip():
    D = random_deformation(builtin_variety("proj(1)"), R1, random.Random(2))
    E = NCDeformation.from_json(D.to_json())
    assert E.same_data(D)


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_defect_identities_on_random_lifts(seed):
    rng = random.Random(seed)
    X = rng.choice([affine(2), builtin_variety("proj(1)")])
    D = random_deformation(X, R1, rng)
    L0 = lift_candidate(D, EXT2)
    L = transform(L0, random_choice(L0, rng))
    assert check_identities(all_defects(L), X) == [1, 2, 3, 4]


def test_opposite_sign_of_second_identity_fails():
    # the identity for dg holds with f_j(φ⁰)^⊗3 − φ⁰f_i; the opposite overall sign does not
    rng = random.Random(5)
    X = builtin_variety("proj(1)")
    L0 = lift_candidate(random_deformation(X, R1, rng), EXT2)
    d = all_defects(transform(L0, random_choice(L0, rng)))
    check_identities(d, X, (2,))
    with pytest.raises(IdentityViolation):
        check_identities(d, X, (2,), opposite_sign=True)


@pytest.mark.parametrize("which", [2, 3, 4])
def test_mutated_checker_fails(which):
    rng = random.Random(11)
    X = five_chain_cover()
    L0 = lift_candidate(random_deformation(X, R1, rng), EXT2)
    d = all_defects(transform(L0, random_choice(L0, rng)))
    with pytest.raises(IdentityViolation) as exc:
        check_identities(d, X, (which,), mutate=which)
    assert exc.value.where is not None


def test_moyal_extends_to_moyal():
    X = affine(2)
    D = moyal(X, 1)
    for n in (2, 3):
        D = extend(D, small_extension(truncation(["t"], n), D.R))
    assert D.same_data(moyal(X, 3))


def test_obstructed_example_reports_xi30():
    D = obstructed_example()
    with pytest.raises(Obstructed) as exc:
        extend(D, EXT2)
    rep = exc.value.report
    assert rep.stage == "xi30"
    assert not rep.classes["xi30"].is_zero()
    assert rep.to_json()["classes"]["xi30"]["nonzero_J_components"] == [0]


@given(seeds)
@settings(max_examples=4, deadline=None)
def test_projective_plane_lifts_are_repaired(seed):
    rng = random.Random(seed)
    X = builtin_variety("proj(2)")
    L0 = lift_candidate(random_deformation(X, R1, rng), EXT2)
    rep = obstructions(transform(L0, random_choice(L0, rng, terms=1)))
    assert rep.unobstructed
    rep.repaired.deformation.check()


def test_twisted_lift_on_five_chain():
    rng = random.Random(4)
    Y = five_chain_cover()
    D = random_deformation(Y, R1, rng, twisted=True, max_order=1)
    Dp, rep = extend_with_report(D, EXT2)
    assert rep.unobstructed and "xi03" in rep.classes
    check_twist(Dp)


def test_check_twist_rejects_non_units():
    Y = five_chain_cover()
    D = NCDeformation.trivial(Y, R1, twisted=True)
    ch = Y.chains(3)[0]
    bad = dict(D.twist)
    bad[ch] = D.twist[ch].scale(Y.field(2))
    with pytest.raises(CompatibilityViolated):
        check_twist(NCDeformation(R1, Y, D.mult, D.glue, bad))


@given(seeds)
@settings(max_examples=5, deadline=None)
def test_equivalence_roundtrip(seed):
    rng = random.Random(seed)
    X = builtin_variety("proj(1)")
    R = truncation(["t"], 2)
    D = random_deformation(X, R, rng)
    e = {i: {u: random_cochain(X, i, i, 1, rng, 2, 1, 2, min_order=2) for u in (1, 2)} for i in X.ids}
    eq = Equivalence.from_corrections(X, R, e=e)
    D2 = apply_equivalence(D, eq)
    assert D2.is_valid()
    assert apply_equivalence(D2, inverse_equivalence(eq, D)).same_data(D)
    found = equivalent(D, D2)
    assert found is not None
    assert apply_equivalence(D, found).same_data(D2)


def test_compose_equivalences():
    rng = random.Random(8)
    X = affine(2)
    R = truncation(["t"], 2)
    D = moyal(X, 2)
    mk = lambda: Equivalence.from_corrections(X, R, e={"A": {u: random_cochain(X, "A", "A", 1, rng) for u in (1, 2)}})
    a, b = mk(), mk()
    both = compose_equivalences(a, b, D)
    assert apply_equivalence(D, both).same_data(apply_equivalence(apply_equivalence(D, a), b))


def test_inequivalent_products():
    X = affine(2)
    M = moyal(X, 1)
    double = NCDeformation.from_corrections(X, R1, mult={"A": {"t": M.mult["A"][1].scale(2)}})
    assert equivalent(M, double) is None


def test_twisted_equivalence_roundtrip():
    rng = random.Random(3)
    Y = five_chain_cover()
    D = random_deformation(Y, R1, rng, twisted=True, max_order=1)
    s = {k: {1: random_cochain(Y, k[0], k[0], 0, rng, 0, 1, 2)} for k in Y.chains(2)}
    eq = Equivalence.from_corrections(Y, R1, s=s)
    D2 = apply_equivalence(D, eq)
    check_twist(D2)
    found = equivalent(D, D2)
    assert found is not None and apply_equivalence(D, found).same_data(D2)


def test_change_twist_and_coboundary():
    rng = random.Random(9)
    Y = five_chain_cover()
    D = random_deformation(Y, R1, rng, twisted=True, max_order=1)
    L = lift_candidate(D, EXT2)
    t = {ch: {0: random_cochain(Y, ch[0], ch[0], 0, rng, 0, 1, 2)} for ch in Y.chains(3)}
    change_twist(L, t)
    s = {ch: random_cochain(Y, ch[0], ch[0], 0, rng, 0, 1, 2) for ch in Y.chains(2)}
    closed = twist_cochain_d(s, Y, level=1)
    prim = twist_coboundary(closed, Y)
    assert twist_cochain_d(prim, Y, level=1) == closed


def test_glue_moyal_with_trivial():
    X = affine(2)
    M = moyal(X, 1)
    T = NCDeformation.trivial(X, truncation(["s"], 1))
    Dp, p1, p2 = glue(M, T, ground_field_algebra())
    assert Dp.R.dim == 3 and Dp.is_valid()
    assert Dp.pushforward(p1).same_data(M)
    assert Dp.pushforward(p2).same_data(T)


def test_glue_rejects_disagreeing_truncations():
    X = affine(2)
    R = truncation(["t"], 2)
    R0 = truncation(["t"], 1)
    other = moyal(X, 2).mult["A"][1] + moyal(X, 2).mult["A"][1]
    D2 = NCDeformation.from_corrections(X, R, mult={"A": {"t": other}})
    with pytest.raises(NotGluable):
        glue(moyal(X, 2), D2, R0)


def test_tangent_choice_gives_distinct_extensions():
    X = affine(2)
    k = ground_field_algebra()
    ext = small_extension(R1, k)
    D0 = NCDeformation.trivial(X, k)
    pi = PolyVectorSection(X, "A", 2, {((0, 1), (1, 0)): X.field(1)})
    D1 = extend(D0, ext, T1Choice(bivectors={0: OrderedCochain(0, {("A",): pi})}))
    assert D1.is_valid()
    assert equivalent(D1, NCDeformation.trivial(X, R1)) is None


def test_hull_small_cases():
    assert hull(builtin_variety("proj(1)"), order=3).presentation() == "k"
    H = hull(affine(2), order=3, cap=0)
    assert H.presentation() == "k[[t1]] mod degree 4"
    with pytest.raises(InfiniteDimensional):
        hull(affine(2), order=2)


def test_hull_finds_jacobi_relations():
    H = hull(affine(3), order=2, cap=0)
    assert len(H.params) == 3 and not H.relations
    H1 = hull(affine(3), order=2, cap=1)
    assert len(H1.params) == 12
    assert len(H1.relations) == 4
    assert all(r.count("t") >= 2 for r in H1.relations)


def test_hull_proj2_second_order():
    H = hull(builtin_variety("proj(2)"), order=2)
    assert len(H.params) == 10 and H.relations == []
    assert H.family.R.dim == 66
