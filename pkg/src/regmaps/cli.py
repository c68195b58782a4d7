"""Command-line front end.

Exit codes: 0 success (or verification passed), 1 verification mismatch or
a computed result contradicting the expected data, 2 input error, 3 coset
limit exceeded.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from regmaps import classify, numtheory
from regmaps.cosetenum import DEFAULT_LIMIT, LIMIT_ENV, CapacityExceeded, default_limit, enumerate_cosets, permutation_rep
from regmaps.families import (
    FAMILIES,
    REDUCED_SOURCES,
    RELATOR_VARIANTS,
    build_Mjk,
    build_Mm,
    family_presentation,
    family_source,
    reduced_presentation,
)
from regmaps.fpmod import ProjPoint
from regmaps.mapcore import MapError, describe
from regmaps.presentation import parse_presentation

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    families: list[int]
    primes: tuple[int, int]
    mode: str
    limit: int
    workers: int
    fmt: str
    out: Path | None

    def __post_init__(self):
        if self.limit < 1:
            raise InputError("--limit must be positive")
        if self.workers < 1:
            raise InputError("--workers must be positive")
        if self.mode not in classify.MODES:
            raise InputError(f"--mode must be one of {classify.MODES}")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected J,K, got {text!r}") from None
    return a, b


def _prime_range(text: str) -> tuple[int, int]:
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P or LO:HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty prime range {text!r}")
    return lo, hi


def _emit(args, doc: dict, text: str) -> None:
    body = classify.dumps(doc) if args.format == "json" else text.rstrip("\n") + "\n"
    if args.out:
        Path(args.out).write_text(body)
    else:
        sys.stdout.write(body)


def _limit(args) -> int:
    return args.limit if args.limit is not None else default_limit()


def _select_families(args) -> list[int]:
    if args.family is not None:
        if args.family not in FAMILIES:
            raise InputError(f"--family must be one of {sorted(FAMILIES)}")
        if args.p is not None and FAMILIES[args.family].p != args.p:
            raise InputError(f"family {args.family} lives over F_{FAMILIES[args.family].p}, not F_{args.p}")
        return [args.family]
    if args.p is not None:
        fams = [i for i, s in sorted(FAMILIES.items()) if s.p == args.p]
        if not fams:
            raise InputError(f"no family over F_{args.p}; primes are {sorted({s.p for s in FAMILIES.values()})}")
        return fams
    return sorted(FAMILIES)


# --------------------------------------------------------------------------
# subcommands


def cmd_order(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    pres = parse_presentation(text)
    t0 = time.perf_counter()
    table = enumerate_cosets(pres, _limit(args))
    elapsed = time.perf_counter() - t0
    st = table.stats
    doc = {"order": table.live_count, "cosets_defined": st.defined, "max_live": st.max_live}
    text = f"order: {table.live_count}\ncosets defined: {st.defined}\nmax live: {st.max_live}\ntime: {elapsed:.3f} s\n"
    _emit(args, doc | {"metadata": {"seconds": round(elapsed, 3)}}, text)
    return EXIT_OK


def _classify_text(reports, summary, checks) -> str:
    lines = []
    for rep in reports:
        lines.append(f"family {rep.family} over F_{rep.prime} ({rep.mode} scan, {len(rep.scanned)} points)")
        lines.append(f"  1-eigenspace of M: {', '.join(map(str, rep.eigenspace)) or 'empty'}")
        adm = ", ".join("(" + ",".join(map(str, p)) + ")" for p in rep.admissible) or "none"
        lines.append(f"  admissible: {adm}")
        if rep.capacity_failures:
            lines.append(f"  capacity exceeded at: {rep.capacity_failures}")
        for r in rep.scanned:
            a = r.get("analysis")
            if a is None:
                continue
            m = a.get("map")
            pt = ",".join(map(str, r["point"]))
            if m:
                lines.append(
                    f"  ({pt}): |G| = {m['group_order']}, type {{{m['type'][0]},{m['type'][1]}}}, "
                    f"chi = {m['chi']}, genus {m['genus']}, {'orientable' if m['orientable'] else 'non-orientable'}"
                )
            else:
                lines.append(f"  ({pt}): |G| = {r['order']}, no regular map: {a.get('lift_error')}")
    lines.append("summary:")
    lines += [f"  {s}" for s in summary["summary"]]
    if checks is not None:
        bad = [c for c in checks if not c["ok"]]
        lines.append(f"verification: {len(checks) - len(bad)}/{len(checks)} checks passed")
        lines += [f"  FAIL {c['check']}: {c['detail']}" for c in bad]
    return "\n".join(lines)


def cmd_classify(args) -> int:
    cfg = RunConfig("classify", _select_families(args), (0, 0), args.mode, _limit(args), args.workers, args.format, args.out)
    t0 = time.perf_counter()
    reports = [
        classify.scan_family(
            i,
            cfg.mode,
            cfg.limit,
            workers=cfg.workers,
            relator_variant=args.relator_variant,
            order_method=args.order_method,
        )
        for i in cfg.families
    ]
    summary = classify.classification_summary(reports)
    checks = classify.verify(reports) if args.verify else None
    metadata = {
        "workers": cfg.workers,
        "seconds": round(time.perf_counter() - t0, 3),
        "point_seconds": {str(r.family): r.timings() for r in reports},
    }
    config = {
        "families": cfg.families,
        "mode": cfg.mode,
        "limit": cfg.limit,
        "relator_variant": args.relator_variant,
        "order_method": args.order_method,
    }
    doc = classify.report_document(reports, summary, config=config, checks=checks, metadata=metadata)
    _emit(args, doc, _classify_text(reports, summary, checks))
    if any(r.capacity_failures for r in reports):
        return EXIT_LIMIT
    if checks is not None and not all(c["ok"] for c in checks):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_table1(args) -> int:
    pairs = numtheory.table1()
    doc = {"pairs": [{"x": t.x, "y": t.y, "k": int(t.k_value)} for t in pairs], "count": len(pairs)}
    text = "\n".join(f"{{{t.x},{t.y}}}  k = {t.k_value}" for t in pairs)
    _emit(args, doc, text)
    return EXIT_OK


def cmd_lemmas(args) -> int:
    lo, hi = args.primes
    primes = numtheory.primes_in(max(lo, 5), hi)
    if not primes:
        raise InputError(f"no primes >= 5 in {lo}:{hi}")
    rows, lines = [], [f"verified on primes {primes[0]}..{primes[-1]} ({len(primes)} primes)"]
    for p in primes:
        ints = [
            {"j": j, "k": 4 - j, "integral": [c.label for c in numtheory.lemma_int(p, j, 4 - j) if c.integral]}
            for j in (1, 2, 3)
        ]
        noi = numtheory.lemma_noi(p)
        exc = numtheory.solvable_exclusions(p)
        sols = {f"d={d},k={k}": [list(s) for s in v] for (d, k), v in noi.solutions.items()}
        rows.append(
            {
                "p": p,
                "lemma_int_integral": ints,
                "lemma_noi": sols,
                "lemma_noi_odd_cube": [list(s) for s in noi.odd_cube],
                "no_Mm": exc.no_Mm,
                "no_Mjk": exc.no_Mjk,
            }
        )
        integral = [i for i in ints if i["integral"]]
        nonempty = {k: v for k, v in sols.items() if v}
        lines.append(
            f"p={p}: integral fractions {integral or 'none'}; "
            f"diophantine solutions {nonempty or 'none'}; odd cube {noi.odd_cube or 'none'}; "
            f"solvable families excluded {exc.excluded}"
        )
    _emit(args, {"primes": [primes[0], primes[-1]], "rows": rows}, "\n".join(lines))
    return EXIT_OK


def _parse_point(spec, text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.strip().strip("()").split(","))
    except ValueError:
        raise InputError(f"expected a point a,b,c; got {text!r}") from None
    if len(parts) != 3:
        raise InputError(f"expected a point a,b,c; got {text!r}")
    if all(v % spec.p == 0 for v in parts):
        raise InputError("(0,0,0) is not a projective point")
    return parts


def _family_arg(index: int):
    if index not in FAMILIES:
        raise InputError(f"family must be one of {sorted(FAMILIES)}")
    return FAMILIES[index]


def cmd_map_info(args) -> int:
    spec = _family_arg(args.family).with_relator(args.relator_variant)
    coords = _parse_point(spec, args.point)
    table = enumerate_cosets(family_presentation(spec, coords), _limit(args))
    order = table.live_count
    doc = {
        "family": spec.index,
        "point": list(coords),
        "normalized_point": list(ProjPoint(spec.p, coords).coords),
        "order": order,
        "target_order": spec.target_order,
        "admissible": order == spec.target_order,
    }
    lines = [f"G_{spec.index}({','.join(map(str, coords))}) over F_{spec.p}", f"|G| = {order} (target {spec.target_order})"]
    if not doc["admissible"]:
        lines.append("not an admissible point")
        _emit(args, doc, "\n".join(lines))
        return EXIT_MISMATCH
    analysis = classify.analyse_point(spec, permutation_rep(table))
    doc["analysis"] = analysis
    nc = analysis["normal_closure"]
    lines.append(f"normal closure of z: order {nc['order']}, abelian {nc['abelian']}, exponent {nc['exponent']}")
    m = analysis.get("map")
    if m is None:
        lines.append(f"no regular map: {analysis.get('lift_error')}")
        if "preimage_search" in analysis:
            lines.append(f"flag triples over the quotient map: {analysis['preimage_search']}")
        _emit(args, doc, "\n".join(lines))
        return EXIT_MISMATCH
    x, y = sorted(m["type"])
    lines += [
        f"type {{{x},{y}}}",
        f"chi = {m['chi']}",
        "orientable" if m["orientable"] else "non-orientable",
        f"genus {m['genus']}",
        f"|G| = {m['group_order']}",
        f"quotient map: {analysis['quotient_map']}",
    ]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_census_check(args) -> int:
    if (args.jk is None) == (args.m is None):
        raise InputError("give exactly one of --jk J,K or --m M")
    if args.jk is not None:
        j, k = args.jk
        M, name, expected = build_Mjk(j, k), f"M({j},{k})", j + k - j * k
    else:
        M, name, expected = build_Mm(args.m), f"M({args.m})", 4 - args.m
    D = describe(M)
    ok = D.chi == expected
    doc = {"map": name, "descriptor": D.as_record(), "expected_chi": expected, "ok": ok}
    text = (
        f"{name}: type {{{D.x},{D.y}}}, |G| = {D.group_order}, chi = {D.chi} (expected {expected}), "
        f"{'orientable' if D.orientable else 'non-orientable'}, genus {D.genus}"
    )
    _emit(args, doc, text)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_export_presentation(args) -> int:
    if args.reduced is not None:
        if args.reduced not in REDUCED_SOURCES:
            raise InputError(f"unknown reduced presentation {args.reduced!r}; choose from {sorted(REDUCED_SOURCES)}")
        reduced_presentation(args.reduced)  # round-trip check
        rels = REDUCED_SOURCES[args.reduced]
        text = f"# {args.reduced}\ngenerators: R S\nrelators: {rels}\n"
    else:
        if args.family is None or args.point is None:
            raise InputError("give FAMILY POINT or --reduced NAME")
        spec = _family_arg(args.family).with_relator(args.relator_variant)
        text = family_source(spec, _parse_point(spec, args.point))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="regmaps", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, *, limit=True, workers=False):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", type=Path, help="write the report here instead of stdout")
        if limit:
            p.add_argument("--limit", type=_positive, help=f"coset limit (default ${LIMIT_ENV} or {DEFAULT_LIMIT})")
        if workers:
            p.add_argument("--workers", type=_positive, default=1)

    p = sub.add_parser("order", help="order of the group in a presentation file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("classify", help="scan the families G_i over PG(2, p)")
    p.add_argument("--p", type=int)
    p.add_argument("--family", type=int)
    p.add_argument("--mode", choices=classify.MODES, default="full")
    p.add_argument("--verify", action="store_true", help="compare with the embedded expected data")
    p.add_argument("--relator-variant", choices=RELATOR_VARIANTS, default="printed")
    p.add_argument(
        "--order-method",
        choices=classify.ORDER_METHODS,
        default="subgroup",
        help="enumerate over <z> and <w> (default) or over the trivial subgroup",
    )
    common(p, workers=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table1", help="type pairs {x,y} with integral k(x,y)")
    common(p, limit=False)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("lemmas", help="arithmetic lemma checks over a prime range")
    p.add_argument("--p", dest="primes", type=_prime_range, default=numtheory.DEFAULT_PRIMES, metavar="P|LO:HI")
    common(p, limit=False)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("map-info", help="the map at one point of one family")
    p.add_argument("family", type=int)
    p.add_argument("point", help="a,b,c")
    p.add_argument("--relator-variant", choices=RELATOR_VARIANTS, default="printed")
    common(p)
    p.set_defaults(func=cmd_map_info)

    p = sub.add_parser("census-check", help="validate a solvable map M(j,k) or M(m)")
    p.add_argument("--jk", type=_pair, metavar="J,K")
    p.add_argument("--m", type=int)
    common(p, limit=False)
    p.set_defaults(func=cmd_census_check)

    p = sub.add_parser("export-presentation", help="write a family or reduced presentation file")
    p.add_argument("family", type=int, nargs="?")
    p.add_argument("point", nargs="?", help="a,b,c")
    p.add_argument("--reduced", help=f"one of {', '.join(sorted(REDUCED_SOURCES))}")
    p.add_argument("--relator-variant", choices=RELATOR_VARIANTS, default="printed")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_export_presentation)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if os.environ.get(LIMIT_ENV) is not None:
            default_limit()  # reject a malformed value up front
        return args.func(args)
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except MapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:  # InputError, ParseError, ModulusMismatch, bad arguments
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
