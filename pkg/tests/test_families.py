from __future__ import annotations

import pytest

from regmaps.cosetenum import group_order
from regmaps.families import (
    FAMILIES,
    REDUCED_ORDERS,
    ModulusMismatch,
    build_Mjk,
    build_Mm,
    family_presentation,
    family_source,
    reduced_presentation,
    solvable_jk_triple,
    solvable_m_group,
)
from regmaps.fpmod import Mat3, ProjPoint, mat_pow
from regmaps.mapcore import describe
from regmaps.presentation import parse_presentation


def formula_order(x, y, p):
    # |G| with chi = -p^4 from chi = -|G|(xy - 2x - 2y)/(4xy)
    return 4 * x * y * p**4 // (x * y - 2 * x - 2 * y)


def test_target_orders():
    assert {i: s.target_order for i, s in FAMILIES.items()} == {
        1: 15000, 2: 15000, 3: 115248, 4: 115248, 5: 115248, 6: 115248, 7: 2399124,
    }
    for s in FAMILIES.values():
        assert s.target_order == formula_order(*s.map_type, s.p)
        assert s.target_order == s.p**3 * s.quotient_order


def test_w_matrices_nonsingular_and_orders():
    for s in FAMILIES.values():
        X = s.w_matrix()
        assert X.det() != 0
        worder = s.map_type[0]
        assert mat_pow(X, worder) == Mat3.identity(s.p), s.index


def test_s_matrix_orders():
    for i, s in FAMILIES.items():
        if i != 2:
            assert mat_pow(s.s_matrix(), s.map_type[1]) == Mat3.identity(s.p), i


def test_g2_s_action_is_not_of_order_six():
    # the transcribed s-relations of G_2 are incompatible with s^6 = 1, so z is
    # forced into a proper subspace and no point of family 2 is admissible
    S = FAMILIES[2].s_matrix()
    orders = [k for k in range(1, 25) if mat_pow(S, k) == Mat3.identity(5)]
    assert orders == [24]


def test_g1_basis_x_matrix_columns():
    X = FAMILIES[1].w_matrix()
    assert [X.column(j) for j in range(3)] == [(3, 0, 4), (0, 2, 3), (0, 0, 4)]


def test_g7_x_matrix_columns():
    X = FAMILIES[7].w_matrix()
    assert [X.column(j) for j in range(3)] == [(9, 5, 2), (12, 0, 0), (6, 11, 2)]


def test_source_round_trip():
    src = family_source(FAMILIES[4], (1, 1, 4))
    assert src.startswith("# G_4(1,1,4) over F_7")
    pres = parse_presentation(src)
    assert pres.generator_names == ("w", "s", "z")
    assert pres == family_presentation(FAMILIES[4], ProjPoint(7, (1, 1, 4)))


def test_conjugation_by_power_is_parenthesized():
    assert "z^(s^3)" in family_source(FAMILIES[1], (1, 3, 4))


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        family_source(FAMILIES[4], ProjPoint(5, (1, 3, 4)))
    with pytest.raises(ValueError):
        family_source(FAMILIES[4], (0, 7, 14))


def test_relator_variants():
    printed = FAMILIES[1]
    proof = printed.with_relator("proof")
    assert printed.relator_template == "(s^-1*w)^3"
    assert proof.relator_template == "(w*s^-2)^4"
    assert FAMILIES[4].with_relator("proof") is FAMILIES[4]
    with pytest.raises(ValueError):
        printed.with_relator("other")


def test_family_orders_at_known_points():
    assert group_order(family_presentation(FAMILIES[1], (1, 3, 4))) == 15000
    assert group_order(family_presentation(FAMILIES[1], (1, 0, 0))) == 120
    assert group_order(family_presentation(FAMILIES[4], (1, 1, 4))) == 115248


def test_reduced_unknown():
    with pytest.raises(ValueError):
        reduced_presentation("PSL27")
    assert REDUCED_ORDERS["PSL213"] == group_order(reduced_presentation("PSL213"))


@pytest.mark.parametrize("j,k", [(1, 3), (3, 5), (3, 7), (5, 7), (1, 9)])
def test_mjk(j, k):
    d = describe(build_Mjk(j, k))
    assert d.chi == j + k - j * k
    assert sorted(d.type) == sorted([2 * j, 2 * k]) and d.group_order == 4 * j * k
    assert not d.orientable


@pytest.mark.parametrize("m", [3, 9, 15, 21])
def test_mm(m):
    d = describe(build_Mm(m))
    assert d.chi == 4 - m and d.type == (4, m) and d.group_order == 8 * m
    assert not d.orientable


@pytest.mark.parametrize("j,k", [(2, 5), (3, 9), (5, 3), (0, 3)])
def test_mjk_rejects(j, k):
    with pytest.raises(ValueError):
        solvable_jk_triple(j, k)


def test_mm_rejects():
    with pytest.raises(ValueError):
        solvable_m_group(10)
