"""Concrete groups and maps: the seven parameterized families G_i(a,b,c),
the reduced presentations of PGL(2,5), PGL(2,7) and PSL(2,13), and the
solvable families M(j,k) and M(m).

Family presentations are generated as text in the presentation format and
parsed, so the exported file is exactly what the enumerator sees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from regmaps.fpmod import Mat3, ProjPoint
from regmaps.permgrp import Perm, PermGroup
from regmaps.presentation import Presentation, parse_presentation

Triple = tuple[int, int, int]

REDUCED_SOURCES = {
    "PGL25": "R^4, S^6, (R*S)^2, (S^-1*R)^3",
    "PGL27_pre1": "R^8, S^3, (R*S)^2, (S*R^-2)^4",
    "PGL27_pre2": "R^8, S^3, (R*S)^2, ((S*R^-2)^2*R^-2)^2",
    "PSL213": "R^7, S^3, (R*S)^2, ((S*R^-2)^4*S*R^3)^2",
}
REDUCED_ORDERS = {"PGL25": 120, "PGL27_pre1": 336, "PGL27_pre2": 336, "PSL213": 1092}

# root words of the parameterized relators, as (text, power)
_G1_PRINTED = ("s^-1*w", 3)
_G1_PROOF = ("w*s^-2", 4)
RELATOR_VARIANTS = ("printed", "proof")


class ModulusMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    """One of the families G_i(a,b,c).

    ``basis`` lists the conjugators ``u`` of the basis elements ``z^u`` of the
    normal subgroup; ``w_action[j]`` is the exponent triple of ``(z^{u_j})^w``.
    For i = 1, 2 the basis is an s^2-orbit, so ``s_action`` gives the images
    ``(z^{u_j})^s`` as well.
    """

    index: int
    p: int
    map_type: tuple[int, int]
    basis: tuple[str, str, str]
    w_action: tuple[Triple, Triple, Triple]
    s_action: tuple[Triple, Triple, Triple] | None
    root: str
    root_power: int
    quotient: str

    def __post_init__(self):
        reduce = lambda rows: tuple(tuple(v % self.p for v in r) for r in rows)
        object.__setattr__(self, "w_action", reduce(self.w_action))
        if self.s_action is not None:
            object.__setattr__(self, "s_action", reduce(self.s_action))

    @property
    def relator_template(self) -> str:
        return f"({self.root})^{self.root_power}"

    @property
    def quotient_order(self) -> int:
        return REDUCED_ORDERS[self.quotient]

    @property
    def target_order(self) -> int:
        """|G| forcing Euler characteristic -p^4 for this type."""
        x, y = self.map_type
        num, den = 4 * x * y * self.p**4, x * y - 2 * x - 2 * y
        assert num % den == 0
        return num // den

    def w_matrix(self) -> Mat3:
        return Mat3.from_columns(self.p, self.w_action)

    def s_matrix(self) -> Mat3:
        """Action of s on the basis; for i >= 3 it cycles z -> z^s -> z^(s^-1) -> z."""
        if self.s_action is not None:
            return Mat3.from_columns(self.p, self.s_action)
        return Mat3.from_columns(self.p, [(0, 1, 0), (0, 0, 1), (1, 0, 0)])

    def with_relator(self, variant: str) -> FamilySpec:
        """Family 1 carries two readings of its parameterized relator."""
        if variant not in RELATOR_VARIANTS:
            raise ValueError(f"unknown relator variant {variant!r}")
        if self.index != 1:
            return self
        root, power = _G1_PRINTED if variant == "printed" else _G1_PROOF
        return FamilySpec(
            self.index, self.p, self.map_type, self.basis, self.w_action, self.s_action, root, power, self.quotient
        )


_S_BASIS = ("", "s^2", "s^4")
_W_BASIS = ("", "s", "s^-1")

FAMILIES: dict[int, FamilySpec] = {
    1: FamilySpec(
        1, 5, (4, 6), _S_BASIS,
        ((3, 0, 4), (0, 2, 3), (0, 0, 4)),
        ((1, 1, 2), (2, 1, 1), (1, 2, 1)),
        *_G1_PRINTED, "PGL25",
    ),
    2: FamilySpec(
        2, 5, (4, 6), _S_BASIS,
        ((1, 2, 1), (4, 1, 0), (0, 1, 4)),
        ((4, 4, 3), (3, 4, 4), (0, 1, 0)),
        "s^-1*w", 3, "PGL25",
    ),
    3: FamilySpec(3, 7, (8, 3), _W_BASIS, ((1, 3, 6), (6, 1, 4), (3, 3, 1)), None, "s*w^-2", 4, "PGL27_pre1"),
    4: FamilySpec(4, 7, (8, 3), _W_BASIS, ((3, 3, 5), (4, 5, 3), (5, 4, 3)), None, "s*w^-2", 4, "PGL27_pre1"),
    5: FamilySpec(5, 7, (8, 3), _W_BASIS, ((0, 0, 1), (6, 2, 2), (0, 1, 0)), None, "(s*w^-2)^2*w^-2", 2, "PGL27_pre2"),
    6: FamilySpec(6, 7, (8, 3), _W_BASIS, ((0, 5, 2), (6, 0, 0), (0, 5, 5)), None, "(s*w^-2)^2*w^-2", 2, "PGL27_pre2"),
    7: FamilySpec(7, 13, (7, 3), _W_BASIS, ((9, 5, 2), (12, 0, 0), (6, 11, 2)), None, "(s*w^-2)^4*s*w^3", 2, "PSL213"),
}

_SIMPLE_NAME = {"": "z", "s": "z^s"}
# conjugating the s^2-orbit basis by s gives z^s, z^(s^3), z^(s^5)
_S_CONJUGATORS = ("s", "s^3", "s^5")


def _basis_elem(u: str) -> str:
    return _SIMPLE_NAME.get(u) or f"z^({u})"


def _monomial(spec: FamilySpec, exps: Sequence[int]) -> str:
    """``z^a*(z^u)^b*(z^v)^c`` with zero factors dropped."""
    parts = []
    for u, e in zip(spec.basis, exps):
        if e == 0:
            continue
        base = _basis_elem(u)
        if e == 1:
            parts.append(base)
        else:
            parts.append(f"{base}^{e}" if u == "" else f"({base})^{e}")
    return "*".join(parts) if parts else "1"


def _conj(u: str, g: str) -> str:
    if u == "":
        return f"z^{g}" if g.isalpha() else f"z^({g})"
    return f"z^({u}*{g})"


def family_source(spec: FamilySpec, point: ProjPoint | Triple) -> str:
    """Presentation text of G_i(a,b,c)."""
    if isinstance(point, ProjPoint):
        if point.p != spec.p:
            raise ModulusMismatch(f"point over F_{point.p} given to family {spec.index} over F_{spec.p}")
        coords = point.coords
    else:
        coords = tuple(int(v) % spec.p for v in point)
    if coords == (0, 0, 0):
        raise ValueError("(0,0,0) is not a projective point")
    # the type {x, y} is (|w|, |s|)
    worder, sorder = spec.map_type
    rels = [f"w^{worder}", f"s^{sorder}", f"z^{spec.p}", "(w*s)^2"]
    rels.append(f"{spec.relator_template} = {_monomial(spec, coords)}")
    rels += [f"{_conj(u, 'w')} = {_monomial(spec, img)}" for u, img in zip(spec.basis, spec.w_action)]
    if spec.s_action is not None:
        rels += [f"{_conj('', g)} = {_monomial(spec, img)}" for g, img in zip(_S_CONJUGATORS, spec.s_action)]
    rels += [f"(z, {_basis_elem(u)})" for u in spec.basis[1:]]
    head = f"# G_{spec.index}({','.join(map(str, coords))}) over F_{spec.p}\n"
    return head + "generators: w s z\nrelators: " + ",\n  ".join(rels) + "\n"


def family_presentation(spec: FamilySpec, point: ProjPoint | Triple) -> Presentation:
    return parse_presentation(family_source(spec, point))


def reduced_presentation(name: str) -> Presentation:
    """PGL25, PGL27_pre1, PGL27_pre2 or PSL213 in generators R, S."""
    try:
        rels = REDUCED_SOURCES[name]
    except KeyError:
        raise ValueError(f"unknown reduced presentation {name!r}; choose from {sorted(REDUCED_SOURCES)}") from None
    return parse_presentation(f"generators: R S\nrelators: {rels}\n")


# ---------------------------------------------------------------------------
# solvable families


def _dihedral(n: int, offset: int, degree: int) -> tuple[Perm, Perm]:
    """Rotation and reflection of D_2n on the points from ``offset`` (two points when n = 1)."""
    if n == 1:
        rot = list(range(degree))
        refl = list(range(degree))
        refl[offset], refl[offset + 1] = offset + 1, offset
        return Perm(rot), Perm(refl)
    rot = list(range(degree))
    refl = list(range(degree))
    for i in range(n):
        rot[offset + i] = offset + (i + 1) % n
        refl[offset + i] = offset + (-i) % n
    return Perm(rot), Perm(refl)


def _dihedral_points(n: int) -> int:
    return 2 if n == 1 else n


def solvable_jk_triple(j: int, k: int) -> tuple[PermGroup, Perm, Perm, Perm]:
    """D_2j x D_2k with r = (v1, v2), t = (u1 v1, 1), l = (1, u2 v2)."""
    if j % 2 == 0 or k % 2 == 0:
        raise ValueError(f"M(j,k) needs odd j and k, got ({j},{k})")
    if math.gcd(j, k) != 1:
        raise ValueError(f"M(j,k) needs coprime j and k, got ({j},{k})")
    if not 1 <= j < k:
        raise ValueError(f"M(j,k) needs 1 <= j < k, got ({j},{k})")
    nj, nk = _dihedral_points(j), _dihedral_points(k)
    deg = nj + nk
    u1, v1 = _dihedral(j, 0, deg)
    u2, v2 = _dihedral(k, nj, deg)
    r = v1 * v2
    t = u1 * v1
    l = u2 * v2
    return PermGroup(deg, [r, t, l]), r, t, l


def build_Mjk(j: int, k: int):
    """The map M(j,k) of type {2j, 2k} with Euler characteristic j + k - jk."""
    from regmaps.mapcore import build_map

    G, r, t, l = solvable_jk_triple(j, k)
    return build_map(G, r, t, l)


def solvable_m_group(m: int) -> PermGroup:
    """V4 x| D_2m, with D_2m acting on V4 = F_2^2 through its quotient S_3.

    Faithful action on the four points of F_2^2 (affinely) together with the
    m vertices of an m-gon.
    """
    if m % 6 != 3:
        raise ValueError(f"M(m) needs m = 3 (mod 6), got {m}")
    vecs = [(0, 0), (1, 0), (0, 1), (1, 1)]
    idx = {v: i for i, v in enumerate(vecs)}
    deg = 4 + m

    def affine(f, polygon):
        img = [idx[f(v)] for v in vecs] + [4 + polygon(i) for i in range(m)]
        return Perm(img)

    ident = lambda i: i
    e1 = affine(lambda v: ((v[0] + 1) % 2, v[1]), ident)
    e2 = affine(lambda v: (v[0], (v[1] + 1) % 2), ident)
    # u acts by an order-3 element of GL(2,2), v by a transposition inverting it
    u = affine(lambda v: (v[1], (v[0] + v[1]) % 2), lambda i: (i + 1) % m)
    v = affine(lambda v: (v[1], v[0]), lambda i: (-i) % m)
    return PermGroup(deg, [e1, e2, u, v])


def build_Mm(m: int):
    """A regular map of type {4, m} on V4 x| D_2m, found by exhaustive search."""
    from regmaps.mapcore import MapError, build_map, search_triples

    G = solvable_m_group(m)
    triple = search_triples(G, (4, m))
    if triple is None:
        raise MapError(f"no flag triple of type {{4,{m}}} found in V4 x| D_{2 * m}")
    return build_map(G, *triple)
