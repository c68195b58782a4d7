from __future__ import annotations

import copy

import pytest

from regmaps.classify import (
    build_Mi,
    dumps,
    literal_Mi,
    point_order,
    scalar_isomorphisms,
    load_expected,
    report_document,
    scan_family,
    classification_summary,
    verify,
    word_action,
)
from regmaps.cosetenum import CapacityExceeded, group_order
from regmaps.families import FAMILIES, family_presentation
from regmaps.fpmod import Mat3, eigenspace_one, mat_pow
from regmaps.presentation import parse_word

ADMISSIBLE = {1: [[1, 3, 4]], 2: [], 3: [], 4: [[1, 1, 4]], 5: [], 6: [[1, 1, 3]], 7: [[1, 7, 6]]}
Y = lambda p: Mat3.from_columns(p, [(0, 1, 0), (0, 0, 1), (1, 0, 0)])


def test_y_has_order_three():
    for p in (5, 7, 13):
        assert mat_pow(Y(p), 3) == Mat3.identity(p)


def test_word_action_composes_right_to_left():
    spec = FAMILIES[4]
    X, S = spec.w_matrix(), spec.s_matrix()
    assert word_action(spec, parse_word("s*w", ("w", "s"))) == X @ S
    assert word_action(spec, parse_word("w^-2", ("w", "s"))) == mat_pow(X, -2)


@pytest.mark.parametrize("index", sorted(FAMILIES))
def test_m_fixes_admissible_points(index):
    M = build_Mi(FAMILIES[index])
    eig = [list(p.coords) for p in eigenspace_one(M)]
    for pt in ADMISSIBLE[index]:
        assert M.apply(pt) == tuple(pt) and pt in eig


def test_eigenspaces():
    eig = {i: [list(p.coords) for p in eigenspace_one(build_Mi(s))] for i, s in FAMILIES.items()}
    assert eig == {1: [[1, 3, 4]], 2: [], 3: [[1, 4, 0]], 4: [[1, 1, 4]], 5: [[0, 1, 2]], 6: [[1, 1, 3]], 7: [[1, 7, 6]]}


def test_literal_formula_misses_the_admissible_points():
    # Y X^-2 multiplied as written does not fix the admissible points: the
    # matrix of the root word composes letters right to left
    for i in (4, 6, 7):
        lit = [list(p.coords) for p in eigenspace_one(literal_Mi(FAMILIES[i]))]
        assert not set(map(tuple, ADMISSIBLE[i])) & set(map(tuple, lit))


@pytest.mark.parametrize("index", range(1, 7))
def test_full_scans(full_scans, index):
    rep = full_scans(index)
    spec = FAMILIES[index]
    assert len(rep.scanned) == spec.p**2 + spec.p + 1
    assert [r["point"] for r in rep.scanned] == sorted(r["point"] for r in rep.scanned)
    assert rep.admissible == ADMISSIBLE[index]
    assert rep.eigen_necessity() and not rep.capacity_failures
    for r in rep.scanned:
        assert r["order"] <= spec.target_order and spec.target_order % r["order"] == 0


@pytest.mark.parametrize("index", range(1, 7))
def test_eigen_scan_agrees_with_full(full_scans, index):
    eig = scan_family(index, "eigen", analyse=False)
    assert eig.admissible == full_scans(index).admissible


@pytest.mark.parametrize("index,point", [(1, (1, 3, 4)), (4, (1, 1, 4)), (6, (1, 1, 3))])
def test_admissibility_is_scalar_invariant(index, point):
    spec = FAMILIES[index]
    for j in range(1, spec.p):
        scaled = tuple(j * v % spec.p for v in point)
        assert group_order(family_presentation(spec, scaled)) == spec.target_order


def test_family1_point_has_no_map(full_scans):
    (rec,) = [r for r in full_scans(1).scanned if r["admissible"]]
    a = rec["analysis"]
    assert a["normal_closure"] == {"order": 125, "abelian": True, "exponent": 5, "normal": True}
    assert a["quotient"]["group_order"] == 120 and sorted(a["quotient"]["type"]) == [4, 6]
    assert a["map"] is None
    assert a["preimage_search"]["generating"] == 0
    assert a["preimage_search"]["subgroup_orders"] == [120]


@pytest.mark.parametrize("index", [4, 6])
def test_family_maps(full_scans, index):
    (rec,) = [r for r in full_scans(index).scanned if r["admissible"]]
    a = rec["analysis"]
    assert a["map"] == {"type": [8, 3], "chi": -2401, "orientable": False, "genus": 2403, "group_order": 115248}
    assert a["dual"]["type"] == [3, 8] and a["dual"]["chi"] == -2401
    assert a["normal_closure"]["order"] == 343 and a["normal_closure"]["exponent"] == 7
    assert a["quotient_map"] == {"type": [8, 3], "chi": -7, "orientable": False, "genus": 9, "group_order": 336}


def test_worker_count_does_not_change_report():
    one = scan_family(3, "full", workers=1).to_record()
    two = scan_family(3, "full", workers=2).to_record()
    assert dumps(one) == dumps(two)


def test_capacity_failure_is_reported_per_point():
    rep = scan_family(4, "eigen", limit=1000)
    assert rep.capacity_failures == [[1, 1, 4]] and rep.admissible == []
    checks = verify([rep])
    assert not all(c["ok"] for c in checks)


def test_proof_relator_variant():
    # the alternative family-1 relator has an empty 1-eigenspace and does not
    # close at (1,3,4) within a modest limit
    rep = scan_family(1, "eigen", limit=1 << 16, relator_variant="proof")
    assert rep.eigenspace == [] and rep.scanned == []
    assert rep.to_record()["relator"] == "(w*s^-2)^4"
    spec = FAMILIES[1].with_relator("proof")
    with pytest.raises(CapacityExceeded):
        group_order(family_presentation(spec, (1, 3, 4)), limit=1 << 16)


def test_verify_detects_mismatch(full_scans):
    reps = [full_scans(3), full_scans(4)]
    assert all(c["ok"] for c in verify(reps))
    expected = copy.deepcopy(load_expected())
    expected["families"]["3"]["admissible"] = [[1, 4, 0]]
    assert not all(c["ok"] for c in verify(reps, expected))


def test_classification_summary(full_scans):
    th = classification_summary([full_scans(i) for i in range(1, 7)])
    assert [m["map"] for m in th["maps"]] == ["M_4(1,1,4)", "M_6(1,1,3)"]
    assert [o["point"] for o in th["admissible_without_map"]] == ["M_1(1,3,4)"]


def test_report_document_is_stable(full_scans):
    reps = [full_scans(2)]
    doc = report_document(reps, classification_summary(reps), config={"mode": "full"})
    assert dumps(doc) == dumps(copy.deepcopy(doc))
    assert "seconds" not in dumps(doc)


def test_expected_data_consistent_with_families():
    exp = load_expected()
    for i, spec in FAMILIES.items():
        e = exp["families"][str(i)]
        assert e["prime"] == spec.p and tuple(e["type"]) == spec.map_type
        if e["admissible"]:
            assert e["order"] == spec.target_order and e["chi"] == -spec.p**4


def test_scan_rejects_bad_mode():
    with pytest.raises(ValueError):
        scan_family(1, "partial")


@pytest.mark.parametrize("index", range(1, 7))
def test_subgroup_orders_match_direct_enumeration(full_scans, index):
    direct = scan_family(index, "full", analyse=False, order_method="direct")
    assert [r["order"] for r in direct.scanned] == [r["order"] for r in full_scans(index).scanned]


def test_point_order_methods_family7_sample():
    spec = FAMILIES[7]
    for pt in [(1, 0, 0), (0, 0, 1), (1, 5, 0), (0, 1, 7)]:
        fast, direct = point_order(spec, pt), point_order(spec, pt, method="direct")
        assert fast.order == direct.order == 1092
        assert fast.max_live < direct.max_live


def test_point_order_rejects_unknown_method():
    with pytest.raises(ValueError):
        point_order(FAMILIES[4], (1, 1, 4), method="guess")


@pytest.mark.parametrize("index,point", [(4, (1, 1, 4)), (6, (1, 1, 3))])
def test_scalar_isomorphism_on_order_115248_maps(index, point):
    res = scalar_isomorphisms(FAMILIES[index], point, guard=200000)
    assert [r["j"] for r in res] == [2, 3, 4, 5, 6]
    assert all(r["isomorphic"] is True for r in res)


def test_scalar_isomorphism_reports_missing_map():
    res = scalar_isomorphisms(FAMILIES[1], (1, 3, 4), [2])
    assert res[0]["isomorphic"] is None and "no map" in res[0]["error"]


def test_scalar_isomorphism_guard():
    res = scalar_isomorphisms(FAMILIES[4], (1, 1, 4), [2])
    assert res[0]["isomorphic"] is None and "guard" in res[0]["error"]
