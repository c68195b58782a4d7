"""Permutation groups: orders, element orders, normal closures, indices.

Permutations act on ``{0, ..., n-1}`` and compose left to right:
``(p * q)(i) == q(p(i))``.  This matches the right action of a coset table,
so evaluating a word letter by letter gives the permutation of the product.

Two order algorithms are used:

* groups that are *certified regular* (transitive, and centralized by a
  transitive group built from the Cayley graph) have order equal to their
  degree, and every subgroup acts semiregularly, so its order is the length of
  any orbit;
* everything else goes through a deterministic Schreier-Sims chain with
  base points chosen as the smallest moved point.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from regmaps.presentation import Word


class NotASubgroup(ValueError):
    """|H| does not divide |G|: H was not a subgroup of G."""


@njit(cache=True)
def _cycle_lengths(images):
    n = images.shape[0]
    seen = np.zeros(n, np.bool_)
    lengths = np.zeros(n + 1, np.bool_)
    for i in range(n):
        if seen[i]:
            continue
        k = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = images[j]
            k += 1
        lengths[k] = True
    return np.nonzero(lengths)[0]


@njit(cache=True)
def _orbit(gens, start):
    """BFS orbit of ``start``; returns (points, parent, parent_gen) with -1 outside the orbit."""
    k, n = gens.shape
    parent = np.full(n, -1, np.int64)
    pgen = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    order[0] = start
    parent[start] = start
    head = 0
    tail = 1
    while head < tail:
        c = order[head]
        head += 1
        for g in range(k):
            d = gens[g, c]
            if parent[d] < 0:
                parent[d] = c
                pgen[d] = g
                order[tail] = d
                tail += 1
    return order[:tail], parent, pgen


@njit(cache=True)
def _orbit_labels(gens, n):
    """Label every point by its orbit, orbits numbered by smallest point."""
    k = gens.shape[0]
    label = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    nlab = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = nlab
        top = 1
        stack[0] = s
        while top > 0:
            top -= 1
            c = stack[top]
            for g in range(k):
                d = gens[g, c]
                if label[d] < 0:
                    label[d] = nlab
                    stack[top] = d
                    top += 1
        nlab += 1
    return label, nlab


@njit(cache=True)
def _left_translations_commute(gens, order, parent, pgen):
    """Build left multiplication by each generator along the BFS tree and
    check it commutes with every generator.  Returns the translations or an
    empty array when the check fails."""
    k, n = gens.shape
    lam = np.empty((k, n), np.int64)
    for a in range(k):
        lam[a, order[0]] = gens[a, order[0]]
        for idx in range(1, n):
            h = order[idx]
            lam[a, h] = gens[pgen[h], lam[a, parent[h]]]
        for h in range(n):
            for b in range(k):
                if lam[a, gens[b, h]] != gens[b, lam[a, h]]:
                    return np.empty((0, n), np.int64)
    return lam


class Perm:
    """An immutable permutation of ``range(degree)``."""

    __slots__ = ("images", "_hash")

    def __init__(self, images, check: bool = True):
        arr = np.array(images, dtype=np.int64, copy=True)
        if arr.ndim != 1:
            raise ValueError("permutation images must be one-dimensional")
        if check:
            n = arr.shape[0]
            if n and (arr.min() < 0 or arr.max() >= n or np.unique(arr).shape[0] != n):
                raise ValueError("images do not form a bijection")
        arr.setflags(write=False)
        self.images = arr
        self._hash = None

    @classmethod
    def _raw(cls, arr: np.ndarray) -> Perm:
        p = cls.__new__(cls)
        arr.setflags(write=False)
        p.images = arr
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls._raw(np.arange(degree, dtype=np.int64))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Perm:
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return int(self.images.shape[0])

    def __call__(self, point: int) -> int:
        return int(self.images[point])

    def __mul__(self, other: Perm) -> Perm:
        return Perm._raw(other.images[self.images])

    def inverse(self) -> Perm:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.int64)
        return Perm._raw(inv)

    def __pow__(self, n: int) -> Perm:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = Perm.identity(self.degree)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, g: Perm) -> Perm:
        """``g^-1 * self * g``."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return bool((self.images == np.arange(self.degree)).all())

    def order(self) -> int:
        lengths = _cycle_lengths(self.images)
        return reduce(math.lcm, (int(x) for x in lengths), 1)

    def support(self) -> np.ndarray:
        return np.nonzero(self.images != np.arange(self.degree))[0]

    def first_moved(self) -> int | None:
        s = self.support()
        return int(s[0]) if s.size else None

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = int(self.images[i])
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = int(self.images[j])
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        return self.degree == other.degree and bool((self.images == other.images).all())

    def __lt__(self, other: Perm) -> bool:
        return tuple(self.images) < tuple(other.images)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def __repr__(self):
        if self.degree <= 30:
            body = "".join(str(c) for c in self.cycles()) or "()"
            return f"Perm({body}, degree={self.degree})"
        return f"Perm(degree={self.degree})"


class PermGroup:
    """A permutation group given by generators.

    ``cached_order`` may be supplied when the order is known from elsewhere
    (e.g. a complete coset table); it is written at most once.
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Perm],
        cached_order: int | None = None,
        *,
        semiregular: bool = False,
    ):
        self.degree = int(degree)
        self.generators: tuple[Perm, ...] = tuple(generators)
        for g in self.generators:
            if g.degree != self.degree:
                raise ValueError(f"generator of degree {g.degree} in a group of degree {self.degree}")
        self.cached_order = cached_order
        self._semiregular = semiregular
        self._regular: bool | None = None
        self._chain: _StabChain | None = None
        self._gen_matrix: np.ndarray | None = None

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def gen_matrix(self) -> np.ndarray:
        if self._gen_matrix is None:
            if self.generators:
                self._gen_matrix = np.stack([g.images for g in self.generators])
            else:
                self._gen_matrix = np.zeros((0, self.degree), np.int64)
        return self._gen_matrix

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def order(self) -> int:
        return group_order(self)

    def orbit(self, point: int = 0) -> np.ndarray:
        return _orbit(self.gen_matrix, point)[0]

    def is_transitive(self) -> bool:
        return self.degree == 0 or self.orbit(0).shape[0] == self.degree

    def is_semiregular(self) -> bool:
        """True when known to act semiregularly (a subgroup of a certified regular group)."""
        return self._semiregular or self.is_regular()

    def is_regular(self) -> bool:
        if self._regular is None:
            self._regular = _certify_regular(self)
            if self._regular:
                self._set_order(self.degree)
        return self._regular

    def subgroup(self, generators: Iterable[Perm]) -> PermGroup:
        """Subgroup generated by elements of this group (membership is the caller's contract)."""
        return PermGroup(self.degree, generators, semiregular=self.is_semiregular())

    def evaluate(self, word: Word) -> Perm:
        """Evaluate a word in this group's generators."""
        result = self.identity()
        for g, e in word.letters:
            result = result * (self.generators[g] ** e)
        return result

    def contains(self, perm: Perm) -> bool:
        if self.is_semiregular():
            # in a semiregular group at most one element sends 0 to perm(0)
            _, parent, pgen = _orbit(self.gen_matrix, 0)
            target = perm(0)
            if parent[target] < 0:
                return False
            return _element_from_tree(self, parent, pgen, target) == perm
        return self._stab_chain().contains(perm)

    def is_normal_in(self, G: PermGroup) -> bool:
        return all(self.contains(n.conjugate(g)) for n in self.generators for g in G.generators)

    def _stab_chain(self) -> _StabChain:
        if self._chain is None:
            self._chain = _StabChain(self.degree, self.generators)
        return self._chain

    def _set_order(self, n: int) -> None:
        if self.cached_order is None:
            self.cached_order = n
        elif self.cached_order != n:
            raise AssertionError(f"order recomputed as {n}, cached {self.cached_order}")


def _element_from_tree(G: PermGroup, parent, pgen, point: int) -> Perm:
    letters = []
    h = point
    while parent[h] != h:
        letters.append(int(pgen[h]))
        h = int(parent[h])
    result = G.identity()
    for g in reversed(letters):
        result = result * G.generators[g]
    return result


def _certify_regular(G: PermGroup) -> bool:
    # G transitive and centralized by a transitive group => G semiregular, hence regular
    if G.degree == 0:
        return False
    M = G.gen_matrix
    if M.shape[0] == 0:
        return G.degree == 1
    order, parent, pgen = _orbit(M, 0)
    if order.shape[0] != G.degree:
        return False
    lam = _left_translations_commute(M, order, parent, pgen)
    if lam.shape[0] == 0:
        return False
    return _orbit(lam, 0)[0].shape[0] == G.degree


class _StabChain:
    """Deterministic Schreier-Sims with Schreier-vector transversals."""

    def __init__(self, degree: int, generators: Sequence[Perm]):
        self.degree = degree
        self.base: list[int] = []
        self.levels: list[list[Perm]] = []
        self.trees: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        gens = [g for g in generators if not g.is_identity()]
        for g in gens:
            if all(g(b) == b for b in self.base):
                self.base.append(g.first_moved())
        self.levels = [[] for _ in self.base]
        for g in gens:
            for i in range(len(self.base)):
                if all(g(b) == b for b in self.base[:i]):
                    self.levels[i].append(g)
        self.trees = [None] * len(self.base)
        for i in range(len(self.base)):
            self._rebuild(i)
        self._complete()

    def _rebuild(self, i: int) -> None:
        M = np.stack([g.images for g in self.levels[i]])
        self.trees[i] = _orbit(M, self.base[i])

    def _transversal(self, i: int, point: int) -> Perm:
        _, parent, pgen = self.trees[i]
        gens = self.levels[i]
        letters = []
        h = point
        while parent[h] != h:
            letters.append(int(pgen[h]))
            h = int(parent[h])
        result = Perm.identity(self.degree)
        for g in reversed(letters):
            result = result * gens[g]
        return result

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.base)):
            beta = g(self.base[i])
            if self.trees[i][1][beta] < 0:
                return g, i
            g = g * self._transversal(i, beta).inverse()
        return g, len(self.base)

    def _complete(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            orbit = self.trees[i][0]
            for beta in orbit:
                u = self._transversal(i, int(beta))
                for x in list(self.levels[i]):
                    image = x(int(beta))
                    h = u * x * self._transversal(i, image).inverse()
                    if h.is_identity():
                        continue
                    y, j = self.sift(h, i + 1)
                    if y.is_identity():
                        continue
                    if j == len(self.base):
                        self.base.append(y.first_moved())
                        self.levels.append([])
                        self.trees.append(None)
                    for level in range(i + 1, j + 1):
                        self.levels[level].append(y)
                        self._rebuild(level)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self) -> int:
        n = 1
        for tree in self.trees:
            n *= int(tree[0].shape[0])
        return n

    def contains(self, g: Perm) -> bool:
        y, j = self.sift(g)
        return j == len(self.base) and y.is_identity()


def group_order(G: PermGroup) -> int:
    """Exact order of ``G``."""
    if G.cached_order is not None:
        return G.cached_order
    if not G.generators or all(g.is_identity() for g in G.generators):
        G._set_order(1)
    elif G._semiregular or G.is_regular():
        G._set_order(int(G.orbit(0).shape[0]))
    else:
        G._set_order(G._stab_chain().order())
    return G.cached_order


def element_order(G: PermGroup, w: Word) -> int:
    return G.evaluate(w).order()


def normal_closure(G: PermGroup, seeds: Sequence[Word | Perm]) -> PermGroup:
    """Smallest normal subgroup of ``G`` containing ``seeds``.

    Conjugates of the current generators by the generators of ``G`` are added
    until every such conjugate is already a member; elements are never listed.
    """
    gens = []
    for s in seeds:
        p = G.evaluate(s) if isinstance(s, Word) else s
        if not p.is_identity() and p not in gens:
            gens.append(p)
    N = G.subgroup(gens)
    queue = list(gens)
    while queue:
        n = queue.pop(0)
        for g in G.generators:
            c = n.conjugate(g)
            if not N.contains(c):
                gens.append(c)
                queue.append(c)
                N = G.subgroup(gens)
    return N


def subgroup_index(G: PermGroup, H: PermGroup) -> int:
    g, h = group_order(G), group_order(H)
    if g % h:
        raise NotASubgroup(f"|H| = {h} does not divide |G| = {g}")
    return g // h


def is_abelian(G: PermGroup) -> bool:
    gens = G.generators
    return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1 :])


def exponent(G: PermGroup) -> int:
    """lcm of the generator orders (the exponent when G is abelian)."""
    return reduce(math.lcm, (g.order() for g in G.generators), 1)


def regular_representation(G: PermGroup, *extra: Perm, max_order: int = 1 << 20):
    """Right regular representation of ``G`` plus the images of ``extra`` elements.

    Returns ``(R, mapped)``; when ``G`` is already certified regular it is
    returned unchanged.  Elements are enumerated, so ``max_order`` guards size.
    """
    if G.is_regular():
        return G, list(extra)
    if group_order(G) > max_order:
        raise ValueError(f"group of order {group_order(G)} exceeds max_order={max_order}")
    index: dict[Perm, int] = {G.identity(): 0}
    elements = [G.identity()]
    k = 0
    while k < len(elements):
        e = elements[k]
        for g in G.generators:
            f = e * g
            if f not in index:
                index[f] = len(elements)
                elements.append(f)
        k += 1

    def right_mult(x: Perm) -> Perm:
        return Perm._raw(np.array([index[e * x] for e in elements], np.int64))

    gens = [right_mult(g) for g in G.generators]
    R = PermGroup(len(elements), gens, cached_order=len(elements))
    R._regular = True
    return R, [right_mult(x) for x in extra]


def element_of_point(G: PermGroup, point: int) -> Perm:
    """In a regular group, the unique element mapping 0 to ``point``."""
    if not G.is_regular():
        raise ValueError("element_of_point needs a regular group")
    _, parent, pgen = _orbit(G.gen_matrix, 0)
    return _element_from_tree(G, parent, pgen, point)


def orbit_labels(G: PermGroup) -> tuple[np.ndarray, int]:
    return _orbit_labels(G.gen_matrix, G.degree)
