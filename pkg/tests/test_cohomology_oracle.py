"""The graded Čech pipeline against an independent toric computation."""

import pytest

from ncdeform.geometry import builtin_variety
from ncdeform.suites import EXPECTED_TABLES, cohomology_table, tangent_dims
from oracles import (Fan, bott_h0_polyvectors, bott_table, kunneth_h0, product_fan, projective_fan,
                     toric_cohomology)


@pytest.mark.parametrize("n", [1, 2])
def test_oracle_matches_bott(n):
    fan = projective_fan(n)
    for p in range(n + 1):
        assert toric_cohomology(fan, p) == {0: bott_h0_polyvectors(n, p)}


def test_oracle_matches_kunneth():
    fan = product_fan(projective_fan(1), projective_fan(1))
    tables = (bott_table(1), bott_table(1))
    for p in range(3):
        assert toric_cohomology(fan, p) == {0: kunneth_h0(tables, p)}


def test_oracle_sees_higher_cohomology():
    # Hirzebruch surface F_2: h^0(T) = 7, h^1(T) = 1, h^0(-K) = 9
    fan = Fan([(1, 0), (0, 1), (-1, 2), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert toric_cohomology(fan, 1) == {0: 7, 1: 1}
    assert toric_cohomology(fan, 2) == {0: 9}


ORACLE_FANS = {
    "proj(1)": lambda: projective_fan(1),
    "proj(2)": lambda: projective_fan(2),
    "product(proj(1),proj(1))": lambda: product_fan(projective_fan(1), projective_fan(1)),
}


@pytest.mark.parametrize("name", sorted(ORACLE_FANS))
def test_pipeline_matches_oracle(name):
    fan = ORACLE_FANS[name]()
    table = cohomology_table(builtin_variety(name))
    for p, row in table.items():
        want = toric_cohomology(fan, p) if p <= fan.n else {}
        got = {q: k for q, k in row.items() if k}
        assert got == want, (name, p)


def test_frozen_tables_and_tangent_dims():
    # frozen from the oracle above
    assert EXPECTED_TABLES["proj(2)"] == {0: {0: 1}, 1: {0: 8}, 2: {0: 10}}
    assert tangent_dims(EXPECTED_TABLES["proj(1)"]) == (0, 0)
    assert tangent_dims(EXPECTED_TABLES["proj(2)"]) == (10, 0)
    assert tangent_dims(EXPECTED_TABLES["proj(2)"], twisted=True) == (10, 0)
    assert tangent_dims(EXPECTED_TABLES["product(proj(1),proj(1))"]) == (9, 0)
