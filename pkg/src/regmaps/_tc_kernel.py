"""Numba kernels for HLT coset enumeration.

Table layout: ``table[c, x]`` for coset ``c`` and column ``x``; columns ``2g``
and ``2g+1`` hold generator ``g`` and its inverse, so ``x ^ 1`` is the inverse
column.  ``-1`` marks an undefined entry.  ``parent`` is the coincidence
union-find forest; a coset is live iff ``parent[c] == c``.

``state`` is an int64 vector shared between calls so an enumeration can be
suspended when the table fills up and resumed after the caller grows or
compacts it.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# state slots
NEXT = 0  # first unused row
LIVE = 1  # live coset count
HLT = 2  # coset currently being scanned by the HLT loop
DEFINED = 3  # total cosets ever defined
MAXLIVE = 4
DED_OVERFLOW = 5
LOOKAHEADS = 6
COMPACTIONS = 7
NSTATE = 8

# return codes
DONE = 0
NEED_SPACE = 1


@njit(cache=True)
def _rep(parent, k):
    r = k
    while parent[r] != r:
        r = parent[r]
    while parent[k] != r:
        nxt = parent[k]
        parent[k] = r
        k = nxt
    return r


@njit(cache=True)
def _merge(parent, queue, qlen, state, a, b):
    ra = _rep(parent, a)
    rb = _rep(parent, b)
    if ra == rb:
        return qlen
    if ra > rb:
        ra, rb = rb, ra
    parent[rb] = ra
    queue[qlen] = rb
    state[LIVE] -= 1
    return qlen + 1


@njit(cache=True)
def _coincidence(table, parent, queue, ded, dlen, state, a, b):
    """Process the coincidence ``a == b`` and everything it forces."""
    ncols = table.shape[1]
    qlen = _merge(parent, queue, 0, state, a, b)
    qi = 0
    while qi < qlen:
        g = queue[qi]
        qi += 1
        for x in range(ncols):
            d = table[g, x]
            if d < 0:
                continue
            xi = x ^ 1
            table[d, xi] = -1
            mu = _rep(parent, g)
            nu = _rep(parent, d)
            if table[mu, x] >= 0:
                qlen = _merge(parent, queue, qlen, state, nu, table[mu, x])
            elif table[nu, xi] >= 0:
                qlen = _merge(parent, queue, qlen, state, mu, table[nu, xi])
            else:
                table[mu, x] = nu
                table[nu, xi] = mu
                dlen = _push(ded, dlen, state, mu, x)
    return dlen


@njit(cache=True)
def _push(ded, dlen, state, c, x):
    if dlen < ded.shape[0]:
        ded[dlen, 0] = c
        ded[dlen, 1] = x
        return dlen + 1
    state[DED_OVERFLOW] += 1
    return dlen


@njit(cache=True)
def _scan(table, parent, queue, ded, dlen, state, letters, s, n, a):
    """Scan ``letters[s:s+n]`` at coset ``a`` without defining new cosets."""
    f = a
    i = 0
    j = n - 1
    while i <= j:
        nx = table[f, letters[s + i]]
        if nx < 0:
            break
        f = nx
        i += 1
    if i > j:
        if f != a:
            dlen = _coincidence(table, parent, queue, ded, dlen, state, f, a)
        return dlen
    b = a
    while j >= i:
        nx = table[b, letters[s + j] ^ 1]
        if nx < 0:
            break
        b = nx
        j -= 1
    if j < i:
        dlen = _coincidence(table, parent, queue, ded, dlen, state, f, b)
    elif j == i:
        x = letters[s + i]
        table[f, x] = b
        table[b, x ^ 1] = f
        dlen = _push(ded, dlen, state, f, x)
    return dlen


@njit(cache=True)
def _define(table, parent, state, c, x):
    k = state[NEXT]
    state[NEXT] = k + 1
    state[LIVE] += 1
    state[DEFINED] += 1
    if state[LIVE] > state[MAXLIVE]:
        state[MAXLIVE] = state[LIVE]
    parent[k] = k
    table[k, :] = -1
    table[c, x] = k
    table[k, x ^ 1] = c
    return k


@njit(cache=True)
def _scan_and_fill(table, parent, queue, ded, dlen, state, letters, s, n, a):
    """HLT scan of ``letters[s:s+n]`` at ``a``, defining cosets to close gaps.

    Returns ``(dlen, ok)``; ``ok`` is False when the table ran out of rows.
    """
    f = a
    i = 0
    b = a
    j = n - 1
    cap = table.shape[0]
    while True:
        while i <= j:
            nx = table[f, letters[s + i]]
            if nx < 0:
                break
            f = nx
            i += 1
        if i > j:
            if f != a:
                dlen = _coincidence(table, parent, queue, ded, dlen, state, f, a)
            return dlen, True
        while j >= i:
            nx = table[b, letters[s + j] ^ 1]
            if nx < 0:
                break
            b = nx
            j -= 1
        if j < i:
            dlen = _coincidence(table, parent, queue, ded, dlen, state, f, b)
            return dlen, True
        if j == i:
            x = letters[s + i]
            table[f, x] = b
            table[b, x ^ 1] = f
            dlen = _push(ded, dlen, state, f, x)
            return dlen, True
        if state[NEXT] >= cap:
            return dlen, False
        x = letters[s + i]
        _define(table, parent, state, f, x)
        dlen = _push(ded, dlen, state, f, x)


@njit(cache=True)
def _process_deductions(table, parent, queue, ded, dlen, state, cyc, cyc_start, cyc_len, col_first, col_count):
    """Felsch-style processing: rescan relator cyclic conjugates at each deduction."""
    while dlen > 0:
        dlen -= 1
        c = ded[dlen, 0]
        x = ded[dlen, 1]
        if parent[c] != c:
            continue
        for k in range(col_first[x], col_first[x] + col_count[x]):
            dlen = _scan(table, parent, queue, ded, dlen, state, cyc, cyc_start[k], cyc_len[k], c)
            if parent[c] != c:
                break
    return dlen


@njit(cache=True)
def hlt_run(table, parent, queue, ded, state, rel, rel_start, rel_len, cyc, cyc_start, cyc_len, col_first, col_count):
    """Run the HLT loop from ``state[HLT]`` until closure or until space runs out."""
    ncols = table.shape[1]
    nrel = rel_start.shape[0]
    cap = table.shape[0]
    dlen = 0
    a = state[HLT]
    while a < state[NEXT]:
        if parent[a] == a:
            for r in range(nrel):
                dlen, ok = _scan_and_fill(table, parent, queue, ded, dlen, state, rel, rel_start[r], rel_len[r], a)
                dlen = _process_deductions(
                    table, parent, queue, ded, dlen, state, cyc, cyc_start, cyc_len, col_first, col_count
                )
                if not ok:
                    state[HLT] = a
                    return NEED_SPACE
                if parent[a] != a:
                    break
            if parent[a] == a:
                for x in range(ncols):
                    if table[a, x] < 0:
                        if state[NEXT] >= cap:
                            state[HLT] = a
                            return NEED_SPACE
                        _define(table, parent, state, a, x)
                        dlen = _push(ded, dlen, state, a, x)
                        dlen = _process_deductions(
                            table, parent, queue, ded, dlen, state, cyc, cyc_start, cyc_len, col_first, col_count
                        )
                        if parent[a] != a:
                            break
        a += 1
    state[HLT] = a
    return DONE


@njit(cache=True)
def scan_subgroup(table, parent, queue, ded, state, words, w_start, w_len, cyc, cyc_start, cyc_len, col_first, col_count):
    """Scan-and-fill each subgroup generator at coset 0."""
    dlen = 0
    for r in range(w_start.shape[0]):
        dlen, ok = _scan_and_fill(table, parent, queue, ded, dlen, state, words, w_start[r], w_len[r], 0)
        if not ok:
            return NEED_SPACE
        dlen = _process_deductions(table, parent, queue, ded, dlen, state, cyc, cyc_start, cyc_len, col_first, col_count)
    return DONE


@njit(cache=True)
def lookahead(table, parent, queue, ded, state, rel, rel_start, rel_len, cyc, cyc_start, cyc_len, col_first, col_count):
    """Scan every relator at every live coset without defining anything."""
    state[LOOKAHEADS] += 1
    dlen = 0
    nrel = rel_start.shape[0]
    for a in range(state[NEXT]):
        if parent[a] != a:
            continue
        for r in range(nrel):
            dlen = _scan(table, parent, queue, ded, dlen, state, rel, rel_start[r], rel_len[r], a)
            dlen = _process_deductions(table, parent, queue, ded, dlen, state, cyc, cyc_start, cyc_len, col_first, col_count)
            if parent[a] != a:
                break


@njit(cache=True)
def compact(table, parent, state):
    """Drop dead rows, renumbering live cosets in increasing order."""
    n = state[NEXT]
    newidx = np.full(n, -1, np.int64)
    k = 0
    for c in range(n):
        if parent[c] == c:
            newidx[c] = k
            k += 1
    ncols = table.shape[1]
    for c in range(n):
        if parent[c] == c:
            nc = newidx[c]
            for x in range(ncols):
                d = table[c, x]
                table[nc, x] = newidx[d] if d >= 0 else -1
    for c in range(k):
        parent[c] = c
    h = state[HLT]
    nh = k
    for c in range(h, n):
        if newidx[c] >= 0:
            nh = newidx[c]
            break
    state[HLT] = nh
    state[NEXT] = k
    state[COMPACTIONS] += 1


@njit(cache=True)
def first_gap(table, parent, n):
    """Index of the first live coset with an undefined entry, or -1."""
    for c in range(n):
        if parent[c] == c:
            for x in range(table.shape[1]):
                if table[c, x] < 0:
                    return c
    return -1


@njit(cache=True)
def standardize(table, n):
    """Breadth-first renumbering from coset 0; returns the new compact table."""
    ncols = table.shape[1]
    order = np.full(n, -1, np.int64)
    newidx = np.full(n, -1, np.int64)
    order[0] = 0
    newidx[0] = 0
    head = 0
    tail = 1
    while head < tail:
        c = order[head]
        head += 1
        for x in range(ncols):
            d = table[c, x]
            if newidx[d] < 0:
                newidx[d] = tail
                order[tail] = d
                tail += 1
    out = np.empty((tail, ncols), table.dtype)
    for k in range(tail):
        c = order[k]
        for x in range(ncols):
            out[k, x] = newidx[table[c, x]]
    return out


@njit(cache=True)
def relators_close(table, rel, rel_start, rel_len):
    """True iff every relator traces to the identity from every coset."""
    n = table.shape[0]
    for r in range(rel_start.shape[0]):
        s = rel_start[r]
        for c in range(n):
            f = c
            for i in range(rel_len[r]):
                f = table[f, rel[s + i]]
                if f < 0:
                    return False
            if f != c:
                return False
    return True
