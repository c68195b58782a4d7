from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from maps_strategy import random_map
from regmaps.cosetenum import enumerate_cosets, permutation_rep
from regmaps.families import reduced_presentation, solvable_jk_triple
from regmaps.mapcore import (
    CommutingViolation,
    DegenerateMap,
    MapError,
    NoLiftExists,
    NotGenerating,
    NotInvolution,
    SizeGuardExceeded,
    build_map,
    describe,
    dual,
    euler_characteristic,
    genus,
    induced_action,
    lift_to_map,
    maps_equal_up_to_iso,
    quotient_map,
    search_triples,
)
from regmaps.permgrp import Perm, PermGroup, element_of_point, normal_closure


def sym(n):
    return PermGroup(n, [Perm.from_cycles(n, tuple(range(n))), Perm.from_cycles(n, (0, 1))])


def reduced_group(name):
    G = permutation_rep(enumerate_cosets(reduced_presentation(name)))
    return G, G.generators[0], G.generators[1]


def test_euler_formula():
    assert euler_characteristic(24, 3, 3) == 2
    assert euler_characteristic(120, 4, 6) == -5
    with pytest.raises(MapError):
        euler_characteristic(10, 3, 7)


def test_genus():
    assert genus(2, True) == 0 and genus(-2, True) == 2
    assert genus(1, False) == 1 and genus(-2401, False) == 2403
    with pytest.raises(MapError):
        genus(-7, True)


def test_tetrahedron_and_hemicube():
    tet = build_map(sym(4), *search_triples(sym(4), (3, 3)))
    d = describe(tet)
    assert (d.type, d.chi, d.orientable, d.genus) == ((3, 3), 2, True, 0)
    hemi = build_map(sym(4), *search_triples(sym(4), (4, 3)))
    d = describe(hemi)
    assert (d.type, d.chi, d.orientable, d.genus) == ((4, 3), 1, False, 1)


def test_build_map_errors():
    G = sym(4)
    r, t, l = search_triples(G, (3, 3))
    e = G.identity()
    with pytest.raises(DegenerateMap):
        build_map(G, e, t, l)
    with pytest.raises(DegenerateMap):
        build_map(G, r, t, t)
    with pytest.raises(NotInvolution):
        build_map(G, Perm.from_cycles(4, (0, 1, 2)), t, l)
    a, b = Perm.from_cycles(4, (0, 1)), Perm.from_cycles(4, (1, 2))
    with pytest.raises(CommutingViolation):
        build_map(G, r, a, b)
    x, y = Perm.from_cycles(4, (0, 1)), Perm.from_cycles(4, (2, 3))
    with pytest.raises(NotGenerating):
        build_map(G, Perm.from_cycles(4, (0, 2), (1, 3)), x, y)


def test_lift_on_reduced_pgl25():
    G, R, S = reduced_group("PGL25")
    M = lift_to_map(G, R, S)
    assert M.r * M.t == R and M.l * M.r == S
    d = describe(M)
    assert (sorted(d.type), d.chi, d.orientable, d.group_order) == ([4, 6], -5, False, 120)
    assert len(lift_to_map(G, R, S, count=0)) == 1


@pytest.mark.parametrize("name,chi", [("PGL27_pre1", -7), ("PGL27_pre2", -7), ("PSL213", -13)])
def test_lift_on_reduced_presentations(name, chi):
    G, R, S = reduced_group(name)
    d = describe(lift_to_map(G, R, S))
    assert d.chi == chi and not d.orientable


def test_lift_failure():
    # in C6 the only involution z makes zR of order 3
    R = Perm.from_cycles(6, tuple(range(6)))
    G = PermGroup(6, [R])
    with pytest.raises(NoLiftExists):
        lift_to_map(G, R, R)
    with pytest.raises(NotGenerating):
        lift_to_map(G, R * R, R**4)


def test_quotient_by_central_subgroup():
    G, r, t, l = solvable_jk_triple(3, 5)
    M = build_map(G, r, t, l)
    rot5 = (M.r * M.l) ** 2  # order-5 rotation generates a normal C5
    N = normal_closure(M.group, [rot5])
    Q = quotient_map(M, N)
    dq = describe(Q)
    assert dq.group_order == 60 // N.order()
    qgens = induced_action(N, [M.r, M.t, M.l])
    assert qgens[0].degree == dq.group_order


def test_isomorphism_by_conjugation():
    G = sym(5)
    M = build_map(G, *search_triples(G))
    g = element_of_point(M.group, 17)
    M2 = build_map(M.group, M.r.conjugate(g), M.t.conjugate(g), M.l.conjugate(g))
    assert maps_equal_up_to_iso(M, M2)
    assert maps_equal_up_to_iso(M, M)


def test_non_isomorphic():
    G = sym(4)
    tet = build_map(G, *search_triples(G, (3, 3)))
    hemi = build_map(G, *search_triples(G, (4, 3)))
    assert not maps_equal_up_to_iso(tet, hemi)
    with pytest.raises(SizeGuardExceeded):
        maps_equal_up_to_iso(tet, hemi, guard=10)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_dual_and_chi_invariance(rnd):
    M = random_map(rnd)
    d, dd = describe(M), describe(dual(M))
    assert dd.chi == d.chi and dd.type == (d.y, d.x)
    assert dd.orientable == d.orientable and dd.genus == d.genus
    assert maps_equal_up_to_iso(dual(dual(M)), M)
    g = element_of_point(M.group, rnd.randrange(M.group.degree))
    conj = build_map(M.group, M.r.conjugate(g), M.t.conjugate(g), M.l.conjugate(g))
    assert describe(conj) == d and maps_equal_up_to_iso(M, conj)
    assert d.chi == euler_characteristic(d.group_order, d.x, d.y)
