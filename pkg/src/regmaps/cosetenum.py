"""Todd-Coxeter coset enumeration (HLT with Felsch-style deduction processing).

Deductions are rescanned only against relators of length at most
``deduction_maxlen``; long relators are left to the HLT row scans.  This
hybrid keeps the live-coset peak close to Felsch while running near HLT speed.

The heavy lifting happens in :mod:`regmaps._tc_kernel`; this module prepares
relator arrays, manages table growth/compaction and wraps the result.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np

from regmaps import _tc_kernel as K
from regmaps.presentation import Presentation, Word

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 1 << 24
LIMIT_ENV = "REGMAPS_COSET_LIMIT"
_INITIAL_ROWS = 1 << 12
_DEDUCTION_STACK = 1 << 15
DEFAULT_DEDUCTION_MAXLEN = 8


class CapacityExceeded(RuntimeError):
    """The coset limit was reached before the table closed."""

    def __init__(self, limit: int, live: int):
        self.limit = limit
        self.live = live
        super().__init__(f"coset enumeration exceeded the limit of {limit} cosets ({live} live)")


class IncompleteTable(ValueError):
    pass


def default_limit() -> int:
    value = os.environ.get(LIMIT_ENV)
    if not value:
        return DEFAULT_LIMIT
    try:
        limit = int(value)
    except ValueError:
        raise ValueError(f"{LIMIT_ENV} must be a positive integer, got {value!r}") from None
    if limit < 1:
        raise ValueError(f"{LIMIT_ENV} must be a positive integer, got {value!r}")
    return limit


@dataclass
class EnumStats:
    defined: int = 0
    max_live: int = 0
    lookaheads: int = 0
    compactions: int = 0
    deduction_overflows: int = 0
    seconds: float = 0.0


@dataclass(frozen=True, eq=False)
class CosetTable:
    """A complete, standardized coset table.

    ``rows[c, 2*g]`` is the coset ``c * g`` and ``rows[c, 2*g + 1]`` is
    ``c * g^-1``; the subgroup coset is ``0`` (reported as coset 1 in dumps).
    """

    rows: np.ndarray
    ngens: int
    capacity_limit: int
    stats: EnumStats = field(default_factory=EnumStats)
    subgroup_trivial: bool = True

    @property
    def live_count(self) -> int:
        return int(self.rows.shape[0])

    @property
    def complete(self) -> bool:
        return bool((self.rows >= 0).all())

    @property
    def index(self) -> int:
        return self.live_count

    def action(self, g: int) -> np.ndarray:
        return self.rows[:, 2 * g]

    def trace(self, coset: int, word: Word) -> int:
        c = coset
        for x in _columns(word):
            c = int(self.rows[c, x])
        return c

    def dump(self) -> str:
        """Text dump: one row per coset, ``coset g1 g1' g2 g2' ...``, 1-based."""
        lines = []
        for c, row in enumerate(self.rows):
            lines.append(" ".join(str(int(v) + 1) for v in (c, *row)))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, CosetTable):
            return NotImplemented
        return self.ngens == other.ngens and np.array_equal(self.rows, other.rows)

    __hash__ = None


def _columns(word: Word) -> list[int]:
    out = []
    for g, e in word.letters:
        out.extend([2 * g if e > 0 else 2 * g + 1] * abs(e))
    return out


def _cyclic_reduce(cols: list[int]) -> list[int]:
    i, j = 0, len(cols) - 1
    while i < j and cols[i] == cols[j] ^ 1:
        i += 1
        j -= 1
    return cols[i : j + 1]


def _pack(words: list[list[int]]):
    start = np.zeros(len(words), np.int64)
    length = np.zeros(len(words), np.int64)
    flat: list[int] = []
    for k, w in enumerate(words):
        start[k] = len(flat)
        length[k] = len(w)
        flat.extend(w)
    return np.array(flat, np.int64), start, length


class _Relators:
    def __init__(self, pres: Presentation, deduction_maxlen: int = DEFAULT_DEDUCTION_MAXLEN):
        ncols = 2 * pres.ngens
        rels = []
        for w in pres.relators:
            cols = _cyclic_reduce(_columns(w))
            if cols:
                rels.append(cols)
        # shorter relators first: they close cheaply and feed deductions early
        rels.sort(key=len)
        self.rel, self.rel_start, self.rel_len = _pack(rels)
        by_col: list[list[list[int]]] = [[] for _ in range(ncols)]
        seen = set()
        for cols in rels:
            if len(cols) > deduction_maxlen:
                continue
            inv = [x ^ 1 for x in reversed(cols)]
            for base in (cols, inv):
                for i in range(len(base)):
                    rot = tuple(base[i:] + base[:i])
                    if rot not in seen:
                        seen.add(rot)
                        by_col[rot[0]].append(list(rot))
        flat_words = []
        self.col_first = np.zeros(ncols, np.int64)
        self.col_count = np.zeros(ncols, np.int64)
        for x in range(ncols):
            self.col_first[x] = len(flat_words)
            self.col_count[x] = len(by_col[x])
            flat_words.extend(sorted(by_col[x], key=len))
        self.cyc, self.cyc_start, self.cyc_len = _pack(flat_words)
        self.sub, self.sub_start, self.sub_len = _pack([_columns(w) for w in pres.subgroup_generators])

    def cyc_args(self):
        return self.cyc, self.cyc_start, self.cyc_len, self.col_first, self.col_count

    def rel_args(self):
        return self.rel, self.rel_start, self.rel_len


class _Enumerator:
    def __init__(self, pres: Presentation, limit: int, deduction_maxlen: int):
        self.pres = pres
        self.limit = limit
        self.ncols = 2 * pres.ngens
        self.R = _Relators(pres, deduction_maxlen)
        rows = max(1, min(limit, _INITIAL_ROWS))
        self.table = np.full((rows, max(self.ncols, 1)), -1, np.int32)
        self.parent = np.zeros(rows, np.int32)
        self.queue = np.zeros(rows, np.int32)
        self.ded = np.zeros((_DEDUCTION_STACK, 2), np.int32)
        self.state = np.zeros(K.NSTATE, np.int64)
        self.state[K.NEXT] = 1
        self.state[K.LIVE] = 1
        self.state[K.DEFINED] = 1
        self.state[K.MAXLIVE] = 1

    @property
    def capacity(self) -> int:
        return self.table.shape[0]

    def _grow(self) -> None:
        rows = min(self.limit, 2 * self.capacity)
        log.debug("growing coset table %d -> %d rows", self.capacity, rows)
        table = np.full((rows, self.table.shape[1]), -1, np.int32)
        n = int(self.state[K.NEXT])
        table[:n] = self.table[:n]
        parent = np.zeros(rows, np.int32)
        parent[:n] = self.parent[:n]
        self.table, self.parent = table, parent
        self.queue = np.zeros(rows, np.int32)

    def _make_room(self) -> None:
        st = self.state
        live = int(st[K.LIVE])
        dead = int(st[K.NEXT]) - live
        if dead > live:
            K.compact(self.table, self.parent, st)
        elif self.capacity < self.limit:
            self._grow()
        else:
            if dead:
                K.compact(self.table, self.parent, st)
            if st[K.NEXT] >= self.capacity:
                K.lookahead(self.table, self.parent, self.queue, self.ded, st, *self.R.rel_args(), *self.R.cyc_args())
                K.compact(self.table, self.parent, st)
            if st[K.NEXT] >= self.capacity:
                raise CapacityExceeded(self.limit, int(st[K.LIVE]))

    def run(self) -> CosetTable:
        t0 = time.perf_counter()
        R = self.R
        if self.ncols == 0:
            rows = np.zeros((1, 0), np.int32)
            return CosetTable(rows, 0, self.limit, EnumStats(1, 1), not self.pres.subgroup_generators)
        while True:
            code = K.scan_subgroup(
                self.table, self.parent, self.queue, self.ded, self.state, R.sub, R.sub_start, R.sub_len, *R.cyc_args()
            )
            if code == K.DONE:
                break
            self._make_room()
        while True:
            code = K.hlt_run(self.table, self.parent, self.queue, self.ded, self.state, *R.rel_args(), *R.cyc_args())
            if code == K.NEED_SPACE:
                self._make_room()
                continue
            K.compact(self.table, self.parent, self.state)
            n = int(self.state[K.NEXT])
            if K.first_gap(self.table, self.parent, n) < 0:
                break
            # not expected for HLT; rescan everything rather than return a bad table
            log.warning("HLT pass left gaps; rescanning")
            self.state[K.HLT] = 0
        n = int(self.state[K.NEXT])
        rows = K.standardize(self.table[:n], n)
        st = self.state
        stats = EnumStats(
            defined=int(st[K.DEFINED]),
            max_live=int(st[K.MAXLIVE]),
            lookaheads=int(st[K.LOOKAHEADS]),
            compactions=int(st[K.COMPACTIONS]),
            deduction_overflows=int(st[K.DED_OVERFLOW]),
            seconds=time.perf_counter() - t0,
        )
        return CosetTable(rows, self.pres.ngens, self.limit, stats, not self.pres.subgroup_generators)


def enumerate_cosets(
    pres: Presentation, limit: int | None = None, *, deduction_maxlen: int = DEFAULT_DEDUCTION_MAXLEN
) -> CosetTable:
    """Enumerate the cosets of ``pres.subgroup_generators`` in the presented group.

    Raises :class:`CapacityExceeded` if more than ``limit`` cosets would be
    needed simultaneously.  With no subgroup generators the result's
    ``live_count`` is the group order.  ``deduction_maxlen=0`` gives pure HLT.
    """
    if limit is None:
        limit = default_limit()
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return _Enumerator(pres, limit, deduction_maxlen).run()


def group_order(pres: Presentation, limit: int | None = None) -> int:
    return enumerate_cosets(pres.with_subgroup(()), limit).live_count


def relators_close(table: CosetTable, pres: Presentation) -> bool:
    """True iff every relator of ``pres`` closes at every coset of ``table``."""
    R = _Relators(pres, 0)
    return bool(K.relators_close(table.rows, R.rel, R.rel_start, R.rel_len))


def permutation_rep(table: CosetTable):
    """Permutation group of the coset action, one permutation per generator."""
    from regmaps.permgrp import Perm, PermGroup

    if not table.complete:
        raise IncompleteTable("coset table is not complete")
    gens = [Perm(table.rows[:, 2 * g].astype(np.int64)) for g in range(table.ngens)]
    order = table.live_count if table.subgroup_trivial else None
    return PermGroup(table.live_count, gens, cached_order=order)
