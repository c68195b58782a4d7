"""Random small regular maps for property tests."""

from __future__ import annotations

import random
from functools import lru_cache

from regmaps.families import solvable_jk_triple, solvable_m_group
from regmaps.mapcore import AlgebraicMap, _elements, build_map
from regmaps.permgrp import Perm, PermGroup


def _sym(n):
    return PermGroup(n, [Perm.from_cycles(n, tuple(range(n))), Perm.from_cycles(n, (0, 1))])


def _dihedral_times_c2(n):
    deg = n + 2
    rot = Perm.from_cycles(deg, tuple(range(n)))
    refl = Perm([(-i) % n for i in range(n)] + [n, n + 1])
    swap = Perm.from_cycles(deg, (n, n + 1))
    return PermGroup(deg, [rot, refl, swap])


def _groups():
    gs = [_sym(4), _sym(5), solvable_m_group(9), solvable_m_group(3)]
    gs += [_dihedral_times_c2(n) for n in (4, 6, 8, 10, 12)]
    gs += [solvable_jk_triple(j, k)[0] for j, k in ((1, 3), (3, 5), (1, 5), (3, 7))]
    return gs


@lru_cache(maxsize=None)
def flag_triples(index: int, want: int = 12) -> tuple:
    G = _groups()[index]
    order = G.order()
    invs = sorted(g for g in _elements(G) if g.order() == 2)
    rnd = random.Random(index)
    found = []
    for _ in range(20000):
        t, l, r = rnd.choice(invs), rnd.choice(invs), rnd.choice(invs)
        if len({t, l, r}) < 3 or t * l != l * t:
            continue
        if G.subgroup([r, t, l]).order() == order:
            found.append((r, t, l))
            if len(found) == want:
                break
    return G, tuple(found)


GROUP_COUNT = len(_groups())


def random_map(rnd: random.Random) -> AlgebraicMap:
    while True:
        G, triples = flag_triples(rnd.randrange(GROUP_COUNT))
        if triples:
            return build_map(G, *rnd.choice(triples))
