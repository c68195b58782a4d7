"""Classification driver: scan PG(2, p_i) for the points where G_i(a,b,c)
reaches the order forcing chi = -p_i^4, then analyse the maps at those points.

Each point is an independent job (enumeration and, when admissible, the map
analysis), so scans parallelize over processes; results are merged in point
order, which keeps reports identical for any worker count.

Orders are computed from small coset enumerations (see :func:`point_order`);
the direct enumeration over the trivial subgroup remains available as
``order_method="direct"`` and is always run at admissible points, where the
regular representation is needed anyway.
"""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from regmaps.cosetenum import CapacityExceeded, enumerate_cosets, permutation_rep
from regmaps.families import FAMILIES, FamilySpec, family_presentation
from regmaps.fpmod import Mat3, ProjPoint, eigenspace_one, enumerate_pg2, mat_inverse, mat_mul, mat_pow
from regmaps.mapcore import (
    ISO_SIZE_GUARD,
    MapError,
    NoLiftExists,
    SizeGuardExceeded,
    describe,
    dual,
    induced_action,
    lift_to_map,
    maps_equal_up_to_iso,
    preimage_triples,
    quotient_map,
)
from regmaps.permgrp import PermGroup, exponent, group_order, is_abelian, normal_closure
from regmaps.presentation import Word, parse_word

log = logging.getLogger(__name__)

MODES = ("full", "eigen")
ORDER_METHODS = ("subgroup", "direct")
SCHEMA = "regmaps.classification/1"


def word_action(spec: FamilySpec, word: Word) -> Mat3:
    """Matrix of n -> n^u on the basis, for a word u in w and s.

    Conjugation is a right action, so (n^u)^v = n^(uv) and the matrix of uv is
    A(v) A(u): letters compose right to left.
    """
    letters = {0: spec.w_matrix(), 1: spec.s_matrix()}
    result = Mat3.identity(spec.p)
    for g, e in word.letters:
        result = mat_mul(mat_pow(letters[g], e), result)
    return result


def build_Mi(spec: FamilySpec) -> Mat3:
    """Action of the root of the parameterized relator on the normal subgroup.

    The relator says u^n = z^a (z^u1)^b (z^u2)^c; u centralizes u^n, so
    (a, b, c) is fixed by this matrix.
    """
    mat_inverse(spec.w_matrix())  # a singular X signals a transcription error
    return word_action(spec, parse_word(spec.root, ("w", "s")))


def literal_Mi(spec: FamilySpec) -> Mat3:
    """Y X^-2 assembled left to right as written (Y the 3-cycle permutation matrix):
    Y X^-2 for i <= 4, (Y X^-2)^2 X^-2 for i = 5, 6, (Y X^-2)^4 Y X^3 for i = 7."""
    p = spec.p
    X = spec.w_matrix()
    Xi2 = mat_pow(X, -2)
    Y = Mat3.from_columns(p, [(0, 1, 0), (0, 0, 1), (1, 0, 0)])
    A = mat_mul(Y, Xi2)
    if spec.index <= 4:
        return A
    if spec.index <= 6:
        return mat_mul(mat_pow(A, 2), Xi2)
    return mat_mul(mat_mul(mat_pow(A, 4), Y), mat_pow(X, 3))


def _coords(pt) -> list[int]:
    return list(pt.coords if isinstance(pt, ProjPoint) else pt)


def analyse_point(spec: FamilySpec, G: PermGroup) -> dict:
    """Map data at an admissible point; ``G`` is the regular representation."""
    w, s, _ = G.generators
    out: dict = {}
    N = normal_closure(G, [Word.gen(2)])
    out["normal_closure"] = {
        "order": group_order(N),
        "abelian": is_abelian(N),
        "exponent": exponent(N),
        "normal": N.is_normal_in(G),
    }
    qw, qs = induced_action(N, [w, s])
    Q = PermGroup(qw.degree, [qw, qs])
    try:
        qmap = lift_to_map(Q, qw, qs)
        out["quotient"] = describe(qmap).as_record()
    except MapError as exc:
        qmap = None
        out["quotient"] = {"error": str(exc)}
    try:
        M = lift_to_map(G, w, s)
    except NoLiftExists as exc:
        out["map"] = None
        out["lift_error"] = str(exc)
        if qmap is not None:
            try:
                pre = preimage_triples(G, N, qmap)
                out["preimage_search"] = {
                    "candidate_involutions": list(pre.candidates),
                    "triples": pre.triples,
                    "generating": pre.generating,
                    "subgroup_orders": list(pre.subgroup_orders),
                }
            except SizeGuardExceeded as guard:
                out["preimage_search"] = {"skipped": str(guard)}
        return out
    D = describe(M)
    out["map"] = D.as_record()
    out["dual"] = describe(dual(M)).as_record()
    out["quotient_map"] = describe(quotient_map(M, N)).as_record()
    return out


@dataclass(frozen=True)
class OrderResult:
    order: int
    method: str
    cosets_defined: int
    max_live: int


def point_order(spec: FamilySpec, coords, limit: int | None = None, method: str = "subgroup") -> OrderResult:
    """Exact |G_i(a,b,c)|.

    ``subgroup``: enumerate the cosets of <z>, index i, so |G| = i |<z>| with
    |<z>| in {1, p}.  If z moves a coset then |<z>| = p.  Otherwise <z> is
    normal (z lies in the core of <z>) and the cosets carry the regular action
    of G/<z>; since w^x = 1 with gcd(x, p) = 1, w has the same order d in G
    as on those cosets, and |G| = [G : <w>] d from a second enumeration.
    ``direct``: enumerate over the trivial subgroup.
    """
    pres = family_presentation(spec, tuple(coords))
    if method == "direct":
        t = enumerate_cosets(pres, limit)
        return OrderResult(t.live_count, "direct", t.stats.defined, t.stats.max_live)
    if method != "subgroup":
        raise ValueError(f"order method must be one of {ORDER_METHODS}")
    w, z = Word.gen(0), Word.gen(2)
    tz = enumerate_cosets(pres.with_subgroup([z]), limit)
    Gz = permutation_rep(tz)
    if not Gz.generators[2].is_identity():
        return OrderResult(spec.p * tz.index, "cosets of <z>", tz.stats.defined, tz.stats.max_live)
    assert math.gcd(spec.map_type[0], spec.p) == 1
    tw = enumerate_cosets(pres.with_subgroup([w]), limit)
    d = Gz.generators[0].order()
    return OrderResult(
        tw.index * d,
        "cosets of normal <z>, then of <w>",
        tz.stats.defined + tw.stats.defined,
        max(tz.stats.max_live, tw.stats.max_live),
    )


def map_at(spec: FamilySpec, coords, limit: int | None = None):
    """The map lifted from (w, s) in G_i(a,b,c) (coordinates used as given)."""
    G = permutation_rep(enumerate_cosets(family_presentation(spec, tuple(coords)), limit))
    return lift_to_map(G, G.generators[0], G.generators[1])


def scalar_isomorphisms(
    spec: FamilySpec, point, multipliers=None, *, guard: int = ISO_SIZE_GUARD, limit: int | None = None
) -> list[dict]:
    """Compare the map at ``point`` with the maps at j * point.

    One record per multiplier j: ``isomorphic`` is a bool, or None with an
    ``error`` when a map fails to exist or exceeds the size guard.
    """
    p = spec.p
    js = list(range(2, p)) if multipliers is None else list(multipliers)
    try:
        base = map_at(spec, point, limit)
    except MapError as exc:
        return [{"j": j, "isomorphic": None, "error": f"no map at {tuple(point)}: {exc}"} for j in js]
    out = []
    for j in js:
        scaled = tuple(j * v % p for v in point)
        try:
            other = map_at(spec, scaled, limit)
            out.append({"j": j, "point": list(scaled), "isomorphic": maps_equal_up_to_iso(base, other, guard)})
        except MapError as exc:
            out.append({"j": j, "point": list(scaled), "isomorphic": None, "error": str(exc)})
    return out


def _point_job(args) -> dict:
    index, variant, coords, limit, analyse, method = args
    spec = FAMILIES[index].with_relator(variant)
    t0 = time.perf_counter()
    rec: dict = {"point": list(coords)}
    try:
        res = point_order(spec, coords, limit, method)
    except CapacityExceeded as exc:
        rec.update(status="capacity-exceeded", order=None, admissible=None, error=str(exc))
        rec["seconds"] = time.perf_counter() - t0
        return rec
    rec.update(
        status="ok",
        order=res.order,
        admissible=res.order == spec.target_order,
        order_method=res.method,
        cosets_defined=res.cosets_defined,
        max_live=res.max_live,
    )
    if rec["admissible"] and analyse:
        try:
            table = enumerate_cosets(family_presentation(spec, tuple(coords)), limit)
        except CapacityExceeded as exc:
            rec.update(status="capacity-exceeded", error=f"map analysis: {exc}")
        else:
            if table.live_count != res.order:
                raise AssertionError(f"direct enumeration gives {table.live_count}, expected {res.order}")
            rec["analysis"] = analyse_point(spec, permutation_rep(table))
    rec["seconds"] = time.perf_counter() - t0
    return rec


@dataclass
class AdmissibleReport:
    family: int
    prime: int
    mode: str
    relator_variant: str
    eigenspace: list[ProjPoint]
    eigenspace_literal: list[ProjPoint]
    scanned: list[dict] = field(default_factory=list)

    @property
    def admissible(self) -> list[list[int]]:
        return [r["point"] for r in self.scanned if r.get("admissible")]

    @property
    def capacity_failures(self) -> list[list[int]]:
        return [r["point"] for r in self.scanned if r["status"] == "capacity-exceeded"]

    def eigen_necessity(self) -> bool:
        eig = {tuple(p.coords) for p in self.eigenspace}
        return all(tuple(pt) in eig for pt in self.admissible)

    def to_record(self) -> dict:
        spec = FAMILIES[self.family].with_relator(self.relator_variant)
        return {
            "family": self.family,
            "prime": self.prime,
            "type": list(spec.map_type),
            "relator": spec.relator_template,
            "relator_variant": self.relator_variant,
            "quotient": spec.quotient,
            "target_order": spec.target_order,
            "mode": self.mode,
            "M": [list(r) for r in build_Mi(spec).entries],
            "eigenspace": [_coords(p) for p in self.eigenspace],
            "eigenspace_literal_formula": [_coords(p) for p in self.eigenspace_literal],
            "admissible": self.admissible,
            "admissible_in_eigenspace": self.eigen_necessity(),
            "capacity_failures": self.capacity_failures,
            "points": [{k: v for k, v in r.items() if k != "seconds"} for r in self.scanned],
        }

    def timings(self) -> dict:
        return {",".join(map(str, r["point"])): round(r["seconds"], 3) for r in self.scanned}


def _run_jobs(jobs: list, workers: int) -> list[dict]:
    if workers <= 1 or len(jobs) <= 1:
        return [_point_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_point_job, jobs, chunksize=1))


def scan_family(
    spec: FamilySpec | int,
    mode: str = "full",
    limit: int | None = None,
    *,
    workers: int = 1,
    analyse: bool = True,
    relator_variant: str = "printed",
    order_method: str = "subgroup",
) -> AdmissibleReport:
    if isinstance(spec, int):
        spec = FAMILIES[spec]
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    spec = spec.with_relator(relator_variant)
    eig = eigenspace_one(build_Mi(spec))
    eig_lit = eigenspace_one(literal_Mi(spec))
    points = enumerate_pg2(spec.p) if mode == "full" else eig
    if order_method not in ORDER_METHODS:
        raise ValueError(f"order method must be one of {ORDER_METHODS}")
    jobs = [(spec.index, relator_variant, p.coords, limit, analyse, order_method) for p in points]
    log.info("family %d: %d points (%s)", spec.index, len(jobs), mode)
    records = _run_jobs(jobs, workers)
    records.sort(key=lambda r: r["point"])
    return AdmissibleReport(spec.index, spec.p, mode, relator_variant, eig, eig_lit, records)


def load_expected() -> dict:
    text = resources.files("regmaps").joinpath("data/expected_classification.json").read_text()
    return json.loads(text)


def verify(reports: list[AdmissibleReport], expected: dict | None = None) -> list[dict]:
    """Compare reports with the expected data; one check record per claim."""
    expected = expected or load_expected()
    checks = []

    def check(name, ok, detail=""):
        checks.append({"check": name, "ok": bool(ok), "detail": detail})

    for rep in reports:
        exp = expected["families"][str(rep.family)]
        fam = f"family {rep.family}"
        got = sorted(rep.admissible)
        want = sorted(exp["admissible"])
        if rep.capacity_failures:
            check(f"{fam}: every point enumerated", False, f"capacity exceeded at {rep.capacity_failures}")
        check(f"{fam}: admissible points", got == want, f"computed {got}, expected {want}")
        check(f"{fam}: admissible points lie in the 1-eigenspace", rep.eigen_necessity())
        for r in rep.scanned:
            if not r.get("admissible"):
                continue
            pt = ",".join(map(str, r["point"]))
            check(f"{fam} ({pt}): order", r["order"] == exp.get("order"), f"{r['order']} vs {exp.get('order')}")
            a = r.get("analysis")
            if a is None:
                continue
            nc = a["normal_closure"]
            check(
                f"{fam} ({pt}): normal closure of z is elementary abelian of order p^3",
                nc["order"] == rep.prime**3 and nc["abelian"] and nc["exponent"] == rep.prime,
                f"order {nc['order']}, exponent {nc['exponent']}",
            )
            q = a.get("quotient", {})
            check(f"{fam} ({pt}): quotient order", q.get("group_order") == exp.get("quotient_order"), str(q))
            m = a.get("map")
            if m is None:
                check(f"{fam} ({pt}): regular map exists", False, a.get("lift_error", ""))
                continue
            check(f"{fam} ({pt}): regular map exists", True)
            check(f"{fam} ({pt}): chi", m["chi"] == exp["chi"], f"{m['chi']} vs {exp['chi']}")
            check(f"{fam} ({pt}): non-orientable", not m["orientable"])
            check(f"{fam} ({pt}): type", sorted(m["type"]) == sorted(exp["type"]), str(m["type"]))
    return checks


def classification_summary(reports: list[AdmissibleReport]) -> dict:
    """Summarize which maps the computation found."""
    maps, order_only = [], []
    for rep in reports:
        for r in rep.scanned:
            if not r.get("admissible"):
                continue
            name = f"M_{rep.family}({','.join(map(str, r['point']))})"
            a = r.get("analysis") or {}
            if a.get("map"):
                m = a["map"]
                maps.append({"map": name, "chi": m["chi"], "type": m["type"], "group_order": m["group_order"]})
            else:
                order_only.append({"point": name, "group_order": r["order"], "reason": a.get("lift_error", "not analysed")})
    lines = [f"{m['map']}: type {{{m['type'][0]},{m['type'][1]}}}, chi = {m['chi']}, |G| = {m['group_order']}" for m in maps]
    lines += [f"{o['point']}: |G| = {o['group_order']} reaches the target order but carries no regular map" for o in order_only]
    return {"maps": maps, "admissible_without_map": order_only, "summary": lines}


def classify_all(
    mode: str = "full",
    limit: int | None = None,
    *,
    families: list[int] | None = None,
    workers: int = 1,
    analyse: bool = True,
) -> tuple[list[AdmissibleReport], dict]:
    idx = families or sorted(FAMILIES)
    reports = [scan_family(i, mode, limit, workers=workers, analyse=analyse) for i in idx]
    return reports, classification_summary(reports)


def report_document(reports: list[AdmissibleReport], summary: dict, *, config: dict, checks=None, metadata=None) -> dict:
    doc = {
        "schema": SCHEMA,
        "config": config,
        "families": [r.to_record() for r in reports],
        "summary": summary,
    }
    if checks is not None:
        doc["verification"] = {"ok": all(c["ok"] for c in checks), "checks": checks}
    if metadata is not None:
        doc["metadata"] = metadata
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
