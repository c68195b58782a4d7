"""Algebraic regular maps M(G; r, t, l).

``G`` is held as a regular permutation group, so each element is identified
with the point it sends 0 to.  The flag involutions r, t, l are elements of
``G``; ``rt`` and ``rl`` give the face length and vertex degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import numpy as np
from numba import njit

from regmaps.permgrp import (
    Perm,
    PermGroup,
    _orbit,
    element_of_point,
    group_order,
    orbit_labels,
    regular_representation,
    subgroup_index,
)

ISO_SIZE_GUARD = 20000


class MapError(ValueError):
    pass


class NotInvolution(MapError):
    pass


class CommutingViolation(MapError):
    pass


class DegenerateMap(MapError):
    pass


class NotGenerating(MapError):
    pass


class NotNormal(MapError):
    pass


class DegenerateQuotient(MapError):
    pass


class NoLiftExists(MapError):
    pass


class SizeGuardExceeded(MapError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraicMap:
    group: PermGroup
    r: Perm
    t: Perm
    l: Perm

    @property
    def order(self) -> int:
        return group_order(self.group)


@dataclass(frozen=True)
class MapDescriptor:
    x: int
    y: int
    chi: int
    orientable: bool
    genus: int
    group_order: int

    @property
    def type(self) -> tuple[int, int]:
        return (self.x, self.y)

    def as_record(self) -> dict:
        return {
            "type": [self.x, self.y],
            "chi": self.chi,
            "orientable": self.orientable,
            "genus": self.genus,
            "group_order": self.group_order,
        }


def euler_characteristic(order: int, x: int, y: int) -> int:
    """chi = -|G| (xy - 2x - 2y) / (4xy), required to be an integer."""
    chi = Fraction(-order * (x * y - 2 * x - 2 * y), 4 * x * y)
    if chi.denominator != 1:
        raise MapError(f"|G|={order} with type {{{x},{y}}} gives non-integral chi {chi}")
    return int(chi)


def genus(chi: int, orientable: bool) -> int:
    """Euler-Poincare: chi = 2 - 2g (orientable) or 2 - g (non-orientable)."""
    if orientable:
        if chi % 2:
            raise MapError(f"orientable surface with odd chi {chi}")
        return (2 - chi) // 2
    return 2 - chi


def build_map(G: PermGroup, r: Perm, t: Perm, l: Perm) -> AlgebraicMap:
    """Validate a flag triple and return the map, re-regularizing ``G`` if needed."""
    for name, g in (("r", r), ("t", t), ("l", l)):
        if g.degree != G.degree:
            raise MapError(f"{name} has degree {g.degree}, group has {G.degree}")
        if g.is_identity():
            raise DegenerateMap(f"{name} is the identity")
        if not (g * g).is_identity():
            raise NotInvolution(f"{name} has order {g.order()}, not 2")
    if t == l:
        raise DegenerateMap("t = l")
    if t * l != l * t:
        raise CommutingViolation("t and l do not commute")
    H = G.subgroup([r, t, l])
    if group_order(H) != group_order(G):
        raise NotGenerating(f"<r,t,l> has order {group_order(H)}, group has order {group_order(G)}")
    if not G.is_regular():
        G, (r, t, l) = regular_representation(H, r, t, l)
    return AlgebraicMap(G, r, t, l)


def describe(M: AlgebraicMap) -> MapDescriptor:
    order = M.order
    x = (M.r * M.t).order()
    y = (M.r * M.l).order()
    chi = euler_characteristic(order, x, y)
    even = M.group.subgroup([M.t * M.r, M.r * M.l])
    index = subgroup_index(M.group, even)
    if index not in (1, 2):
        raise MapError(f"even-word subgroup has index {index}")
    orientable = index == 2
    return MapDescriptor(x, y, chi, orientable, genus(chi, orientable), order)


def dual(M: AlgebraicMap) -> AlgebraicMap:
    return AlgebraicMap(M.group, M.r, M.l, M.t)


def induced_action(N: PermGroup, perms: list[Perm]) -> list[Perm]:
    """Action of elements of the regular group on the N-orbits (the cosets gN).

    Blocks are numbered by their smallest point, so block 0 is N itself.
    """
    labels, _ = orbit_labels(N)
    reps = np.unique(labels, return_index=True)[1]
    return [Perm(labels[g.images[reps]]) for g in perms]


def quotient_map(M: AlgebraicMap, N: PermGroup) -> AlgebraicMap:
    """The induced map on G/N.

    In the right regular representation the N-orbits are the cosets gN, which
    G permutes regularly through G/N; r, t, l are read off on block labels.
    """
    G = M.group
    if N.degree != G.degree:
        raise MapError("N and G have different degrees")
    if not N.is_normal_in(G):
        raise NotNormal("N is not normal in G")
    r, t, l = induced_action(N, [M.r, M.t, M.l])
    Q = PermGroup(r.degree, [r, t, l])
    try:
        return build_map(Q, r, t, l)
    except MapError as exc:
        raise DegenerateQuotient(f"quotient map does not exist: {exc}") from exc


@njit(cache=True)
def _involutions_in(gens, parent, pgen, points):
    path = np.empty(gens.shape[1], np.int64)
    out = np.empty(points.shape[0], np.int64)
    k = 0
    for x in points:
        if x != 0 and _apply_element(gens, parent, pgen, path, x, x) == 0:
            out[k] = x
            k += 1
    return out[:k]


@dataclass(frozen=True)
class PreimageSearch:
    """Flag triples of G lying over a flag triple of G/N."""

    candidates: tuple[int, int, int]
    triples: int
    generating: int
    subgroup_orders: tuple[int, ...]


def preimage_triples(G: PermGroup, N: PermGroup, quotient: AlgebraicMap, max_checks: int = 1 << 20) -> PreimageSearch:
    """Count triples (r, t, l) of G mapping onto the quotient's triple.

    Every map on G whose quotient by N is isomorphic to ``quotient`` is, after
    conjugation, one of these, so ``generating == 0`` rules such maps out.
    """
    if not G.is_regular():
        raise MapError("preimage_triples needs a regular group")
    labels, _ = orbit_labels(N)
    M = G.gen_matrix
    _, parent, pgen = _orbit(M, 0)
    pools = []
    for g in (quotient.r, quotient.t, quotient.l):
        block = g(0)
        pts = np.nonzero(labels == block)[0].astype(np.int64)
        pools.append([element_of_point(G, int(x)) for x in _involutions_in(M, parent, pgen, pts)])
    sizes = tuple(len(p) for p in pools)
    if sizes[0] * sizes[1] * sizes[2] > max_checks:
        raise SizeGuardExceeded(f"{sizes} candidate involutions exceed {max_checks} checks")
    order = group_order(G)
    triples = generating = 0
    orders = set()
    for t in pools[1]:
        for l in pools[2]:
            if t == l or t * l != l * t:
                continue
            for r in pools[0]:
                triples += 1
                h = group_order(G.subgroup([r, t, l]))
                orders.add(h)
                generating += h == order
    return PreimageSearch(sizes, triples, generating, tuple(sorted(orders)))


# ---------------------------------------------------------------------------
# lifting (R, S) to a flag triple


@njit(cache=True)
def _apply_element(gens, parent, pgen, path, x, p):
    """g_x(p), where g_x is the element sending 0 to x (tree word evaluation)."""
    n = 0
    h = x
    while parent[h] != h:
        path[n] = pgen[h]
        n += 1
        h = parent[h]
    for i in range(n - 1, -1, -1):
        p = gens[path[i], p]
    return p


@njit(cache=True)
def _lift_candidates(gens, parent, pgen, R, S, limit):
    n = gens.shape[1]
    path = np.empty(n, np.int64)
    out = np.empty(min(limit, n), np.int64)
    s0 = S[0]
    k = 0
    for x in range(1, n):
        # r = g_x must be an involution
        if _apply_element(gens, parent, pgen, path, x, x) != 0:
            continue
        pt = R[x]  # t = r*R
        pl = _apply_element(gens, parent, pgen, path, x, s0)  # l = S*r
        if pt == 0 or pl == 0 or pt == pl:
            continue
        if _apply_element(gens, parent, pgen, path, pt, pt) != 0:
            continue
        if _apply_element(gens, parent, pgen, path, pl, pl) != 0:
            continue
        if _apply_element(gens, parent, pgen, path, pl, pt) != _apply_element(gens, parent, pgen, path, pt, pl):
            continue
        out[k] = x
        k += 1
        if k == limit:
            break
    return out[:k]


def lift_points(G: PermGroup, R: Perm, S: Perm, count: int | None = 1) -> list[int]:
    """Points x (= elements r) for which r, t = rR, l = Sr is a flag triple, in increasing order."""
    if not G.is_regular():
        raise MapError("lift_points needs a regular group")
    M = G.gen_matrix
    _, parent, pgen = _orbit(M, 0)
    limit = G.degree if count is None else count
    return [int(x) for x in _lift_candidates(M, parent, pgen, R.images, S.images, max(limit, 1))]


def lift_to_map(G: PermGroup, R: Perm, S: Perm, count: int = 1) -> AlgebraicMap | list[AlgebraicMap]:
    """Find an involution r with t = rR and l = Sr forming a flag triple.

    Then rt = R, lr = S and RS = r(tl)r, matching presentations in which
    (RS)^2 = 1 encodes the edge involution tl.  Candidates r are scanned in
    point order of the regular representation.  With ``count=1`` the first
    map is returned; otherwise a list of up to ``count`` maps (``count=0``
    means all).
    """
    if G.subgroup([R, S]).order() != group_order(G):
        raise NotGenerating("R and S do not generate G")
    if not G.is_regular():
        G, (R, S) = regular_representation(G, R, S)
    xs = lift_points(G, R, S, None if count == 0 else count)
    if not xs:
        raise NoLiftExists("no involution r makes rR and Sr distinct commuting involutions")
    maps = []
    for x in xs:
        r = element_of_point(G, x)
        maps.append(build_map(G, r, r * R, S * r))
    return maps[0] if count == 1 else maps


def search_triples(G: PermGroup, map_type: tuple[int, int] | None = None):
    """First flag triple (r, t, l) of ``G`` (optionally of a given type) in a fixed order.

    Exhaustive over involutions, hence only for small groups.
    """
    elems = _elements(G)
    invs = sorted(g for g in elems if g.order() == 2)
    order = group_order(G)
    for t in invs:
        for l in invs:
            if l == t or t * l != l * t:
                continue
            for r in invs:
                if r == t or r == l:
                    continue
                if map_type is not None and ((r * t).order(), (r * l).order()) != tuple(map_type):
                    continue
                if G.subgroup([r, t, l]).order() == order:
                    return r, t, l
    return None


def _elements(G: PermGroup, max_order: int = 1 << 16) -> list[Perm]:
    seen = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for e in frontier:
            for g in G.generators:
                f = e * g
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        if len(seen) > max_order:
            raise SizeGuardExceeded(f"more than {max_order} elements")
        frontier = nxt
    return list(seen)


# ---------------------------------------------------------------------------
# isomorphism


@njit(cache=True)
def _extend_iso(a, b):
    """Map 0 -> 0 and extend along generator edges; -1 on an inconsistency."""
    k, n = a.shape
    phi = np.full(n, -1, np.int64)
    used = np.zeros(n, np.bool_)
    phi[0] = 0
    used[0] = True
    queue = np.empty(n, np.int64)
    queue[0] = 0
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for g in range(k):
            y = a[g, x]
            z = b[g, phi[x]]
            if phi[y] < 0:
                if used[z]:
                    return phi[:0]
                phi[y] = z
                used[z] = True
                queue[tail] = y
                tail += 1
            elif phi[y] != z:
                return phi[:0]
    return phi


def maps_equal_up_to_iso(M1: AlgebraicMap, M2: AlgebraicMap, guard: int = ISO_SIZE_GUARD) -> bool:
    """True iff some isomorphism G1 -> G2 sends (r1, t1, l1) to (r2, t2, l2)."""
    n1, n2 = M1.order, M2.order
    if max(n1, n2) > guard:
        raise SizeGuardExceeded(f"group orders {n1}, {n2} exceed the guard {guard}")
    if n1 != n2:
        return False
    a = np.stack([M1.r.images, M1.t.images, M1.l.images])
    b = np.stack([M2.r.images, M2.t.images, M2.l.images])
    phi = _extend_iso(a, b)
    return phi.shape[0] == n1 and bool((phi >= 0).all())
