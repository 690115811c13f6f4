"""Compiled kernels for the condition-by-condition search and canonical forms.

Tables are flat ``int8`` arrays of length ``n*n`` with ``-1`` marking an
empty cell. The search is an explicit-stack DFS whose whole state lives in
numpy arrays, so it can stop when its output buffer fills up and resume on
the next call.

Every filled cell goes on a trail. After each branch the conditions that
read a newly filled cell are re-examined: a condition with both outer cells
filled must agree, and one with a single outer cell missing forces that
cell. Backtracking pops the trail.
"""

from __future__ import annotations

import numpy as np
from numba import njit

EMPTY = -1

F_CONNECTED = 1
F_LATIN = 2
F_UNITAL = 4
F_SPINDLE = 8
F_RACK = 16
F_QUANDLE = 32

ST_RUNNING = 0
ST_DONE = 1
ST_FULL = 2
ST_BUDGET = 3

# slots of the int64 ``st`` vector
DEPTH, NODES, STARTED, STATUS, BASE, TP, LEAVES, PHASE = range(8)
ST_LEN = 8

PH_DESCEND = 0
PH_NEXT = 1


@njit(cache=True, inline="always")
def _cond_violated(T, n, x, y, z):
    a = T[x * n + y]
    if a < 0:
        return False
    b = T[x * n + z]
    if b < 0:
        return False
    c = T[y * n + z]
    if c < 0:
        return False
    left = T[a * n + z]
    if left < 0:
        return False
    right = T[b * n + c]
    if right < 0:
        return False
    return left != right


@njit(cache=True)
def violates_any(T, n, conds, start):
    """Literal look-ahead: does any condition from ``start`` on fail outright?"""
    for i in range(start, conds.shape[0]):
        if _cond_violated(T, n, conds[i, 0], conds[i, 1], conds[i, 2]):
            return True
    return False


@njit(cache=True)
def _has_closed_proper_subset(T, n, reach, stack):
    """True when some element's right-orbit is closed, fully known and proper."""
    for s in range(n):
        for i in range(n):
            reach[i] = False
        reach[s] = True
        stack[0] = s
        sp = 1
        count = 1
        known = True
        while sp > 0 and known:
            sp -= 1
            u = stack[sp]
            for j in range(n):
                v = T[u * n + j]
                if v < 0:
                    known = False
                    break
                if not reach[v]:
                    reach[v] = True
                    stack[sp] = v
                    sp += 1
                    count += 1
        if known and count < n:
            return True
    return False


@njit(cache=True)
def _unital_possible(T, n):
    for e in range(n):
        ok = True
        for j in range(n):
            a = T[e * n + j]
            b = T[j * n + e]
            if (a >= 0 and a != j) or (b >= 0 and b != j):
                ok = False
                break
        if ok:
            return True
    return False


@njit(cache=True)
def _partial_ok(T, n, cells, m, flags, rowcnt, reach, stack):
    """Monotone filter pruning after ``m`` freshly filled ``cells``.

    Every test only inspects filled cells, and filled cells never change
    further down the tree, so a failure here is final.
    """
    row_done = False
    for i in range(m):
        c = cells[i]
        p = c // n
        q = c % n
        v = T[c]
        if flags & (F_SPINDLE | F_QUANDLE):
            if p == q and v != p:
                return False
        if flags & F_LATIN:
            for j in range(n):
                if j != q and T[p * n + j] == v:
                    return False
        if flags & (F_RACK | F_QUANDLE):
            for j in range(n):
                if j != p and T[j * n + q] == v:
                    return False
        if rowcnt[p] == n:
            row_done = True
    if flags & F_UNITAL:
        if not _unital_possible(T, n):
            return False
    if (flags & F_CONNECTED) and row_done and n > 1:
        if _has_closed_proper_subset(T, n, reach, stack):
            return False
    return True


@njit(cache=True)
def is_connected_full(T, n, reach, stack):
    for s in range(n):
        for i in range(n):
            reach[i] = False
        reach[s] = True
        stack[0] = s
        sp = 1
        count = 1
        while sp > 0:
            sp -= 1
            u = stack[sp]
            for j in range(n):
                v = T[u * n + j]
                if not reach[v]:
                    reach[v] = True
                    stack[sp] = v
                    sp += 1
                    count += 1
        if count < n:
            return False
    return True


@njit(cache=True)
def _rows_are_perms(T, n, seen):
    for x in range(n):
        for i in range(n):
            seen[i] = False
        for j in range(n):
            v = T[x * n + j]
            if seen[v]:
                return False
            seen[v] = True
    return True


@njit(cache=True)
def _cols_are_perms(T, n, seen):
    for y in range(n):
        for i in range(n):
            seen[i] = False
        for x in range(n):
            v = T[x * n + y]
            if seen[v]:
                return False
            seen[v] = True
    return True


@njit(cache=True)
def leaf_passes(T, n, flags, reach, stack):
    if flags & (F_SPINDLE | F_QUANDLE):
        for x in range(n):
            if T[x * n + x] != x:
                return False
    if flags & F_LATIN:
        if not _rows_are_perms(T, n, reach):
            return False
    if flags & (F_RACK | F_QUANDLE):
        if not _cols_are_perms(T, n, reach):
            return False
    if flags & F_UNITAL:
        found = False
        for e in range(n):
            ok = True
            for j in range(n):
                if T[e * n + j] != j or T[j * n + e] != j:
                    ok = False
                    break
            if ok:
                found = True
                break
        if not found:
            return False
    if flags & F_CONNECTED:
        if not is_connected_full(T, n, reach, stack):
            return False
    return True


@njit(cache=True)
def is_self_canonical(T, n, perms, invs):
    """True iff no relabeling of ``T`` has a smaller row-major flattening."""
    for k in range(perms.shape[0]):
        for i in range(n * n):
            a = perms[k, T[invs[k, i // n] * n + invs[k, i % n]]]
            b = T[i]
            if a < b:
                return False
            if a > b:
                break
    return True


@njit(cache=True)
def canonical_min(T, n, perms, invs, best):
    """Write the smallest relabeled flattening of ``T`` into ``best``.

    A relabeling is dropped as soon as its prefix exceeds the current best.
    """
    for i in range(n * n):
        best[i] = T[i]
    for k in range(perms.shape[0]):
        smaller = False
        for i in range(n * n):
            a = perms[k, T[invs[k, i // n] * n + invs[k, i % n]]]
            if smaller:
                best[i] = a
            elif a < best[i]:
                smaller = True
                best[i] = a
            elif a > best[i]:
                break


@njit(cache=True)
def canonical_batch(tables, n, perms, invs, out):
    best = np.empty(n * n, dtype=np.int8)
    for r in range(tables.shape[0]):
        canonical_min(tables[r], n, perms, invs, best)
        for i in range(n * n):
            out[r, i] = best[i]



@njit(cache=True, inline="always")
def _force(T, n, x, y, z):
    """Status of condition (x,y,z): 0 open or satisfied, 1 violated, 2 forcing.

    On status 2 the returned cell must take the returned value.
    """
    a = T[x * n + y]
    if a < 0:
        return 0, -1, -1
    b = T[x * n + z]
    if b < 0:
        return 0, -1, -1
    c = T[y * n + z]
    if c < 0:
        return 0, -1, -1
    o1 = a * n + z
    o2 = b * n + c
    left = T[o1]
    right = T[o2]
    if left < 0 and right < 0:
        return 0, -1, -1
    if left < 0:
        return 2, o1, right
    if right < 0:
        return 2, o2, left
    if left != right:
        return 1, -1, -1
    return 0, -1, -1


@njit(cache=True)
def propagate(T, n, trail, tp, q, rowcnt):
    """Examine the conditions reading trail cells from position ``q`` on.

    Forced cells are appended to the trail and examined in turn. Returns
    ``(consistent, new_tp)``; on failure the caller still pops to its mark.
    """
    while q < tp:
        cell = trail[q]
        q += 1
        p = cell // n
        r = cell % n
        # cell (p, r) as one of (x,y), (x,z), (y,z)
        for w in range(n):
            for role in range(3):
                if role == 0:
                    s, c, v = _force(T, n, p, r, w)
                elif role == 1:
                    s, c, v = _force(T, n, p, w, r)
                else:
                    s, c, v = _force(T, n, w, p, r)
                if s == 1:
                    return False, tp
                if s == 2:
                    T[c] = v
                    trail[tp] = c
                    tp += 1
                    rowcnt[c // n] += 1
        # as the outer-left cell ((x*y), z) with x*y == p, z == r
        for x in range(n):
            for y in range(n):
                if T[x * n + y] == p:
                    s, c, v = _force(T, n, x, y, r)
                    if s == 1:
                        return False, tp
                    if s == 2:
                        T[c] = v
                        trail[tp] = c
                        tp += 1
                        rowcnt[c // n] += 1
        # as the outer-right cell ((x*z), (y*z)) with x*z == p, y*z == r
        for z in range(n):
            for x in range(n):
                if T[x * n + z] == p:
                    for y in range(n):
                        if T[y * n + z] == r:
                            s, c, v = _force(T, n, x, y, z)
                            if s == 1:
                                return False, tp
                            if s == 2:
                                T[c] = v
                                trail[tp] = c
                                tp += 1
                                rowcnt[c // n] += 1
    return True, tp


@njit(cache=True)
def _pop_to(T, n, trail, tp, mark, rowcnt):
    for i in range(tp - 1, mark - 1, -1):
        c = trail[i]
        T[c] = -1
        rowcnt[c // n] -= 1
    return mark


@njit(cache=True)
def _undecided(T, n, conds, k):
    """Index of the first condition from ``k`` on with an empty cell."""
    nc = conds.shape[0]
    while k < nc:
        x = conds[k, 0]
        y = conds[k, 1]
        z = conds[k, 2]
        a = T[x * n + y]
        b = T[x * n + z]
        c = T[y * n + z]
        if a < 0 or b < 0 or c < 0 or T[a * n + z] < 0 or T[b * n + c] < 0:
            return k
        k += 1
    return nc


@njit(cache=True)
def _emit(T, n, flags, iso, perms, invs, out, st, reach, stack):
    if not leaf_passes(T, n, flags, reach, stack):
        return False
    if iso and not is_self_canonical(T, n, perms, invs):
        return False
    r = st[LEAVES]
    for i in range(n * n):
        out[r, i] = T[i]
    st[LEAVES] = r + 1
    return True


@njit(cache=True)
def search(T, n, conds, st, lcond, lmark, lc1, lc2, lv, trail, rowcnt,
           flags, prune, iso, perms, invs, out, budget):
    """Run (or resume) the DFS until done, ``out`` is full, or the budget trips.

    At each level the first condition (in ``conds`` order) with an empty
    cell picks the branch: its first empty cell among (x,y), (x,z), (y,z)
    takes each of the n values, or, once those are filled, both outer cells
    take each common value. ``st[LEAVES]`` counts rows written to ``out``
    during this call.
    """
    ncond = conds.shape[0]
    nn = n * n
    cap = out.shape[0]
    st[LEAVES] = 0
    st[STATUS] = ST_RUNNING
    reach = np.zeros(n, dtype=np.bool_)
    stack = np.zeros(n, dtype=np.int64)

    if st[STARTED] == 0:
        st[STARTED] = 1
        tp = 0
        for c in range(nn):
            if T[c] >= 0:
                trail[tp] = c
                tp += 1
        ok, tp = propagate(T, n, trail, tp, 0, rowcnt)
        if ok and prune and flags:
            ok = _partial_ok(T, n, trail, tp, flags, rowcnt, reach, stack)
        if not ok:
            st[TP] = tp
            st[STATUS] = ST_DONE
            return
        st[TP] = tp
        st[DEPTH] = 0
        lcond[0] = st[BASE]
        st[PHASE] = PH_DESCEND

    d = st[DEPTH]
    tp = st[TP]
    phase = st[PHASE]
    while True:
        if phase == PH_DESCEND:
            k = _undecided(T, n, conds, lcond[d])
            if k == ncond:
                _emit(T, n, flags, iso, perms, invs, out, st, reach, stack)
                d -= 1
                phase = PH_NEXT
                if st[LEAVES] == cap:
                    st[STATUS] = ST_FULL
                    break
                continue
            lcond[d] = k
            lmark[d] = tp
            lv[d] = 0
            x = conds[k, 0]
            y = conds[k, 1]
            z = conds[k, 2]
            a = T[x * n + y]
            b = T[x * n + z]
            c = T[y * n + z]
            lc2[d] = -1
            if a < 0:
                lc1[d] = x * n + y
            elif b < 0:
                lc1[d] = x * n + z
            elif c < 0:
                lc1[d] = y * n + z
            else:
                # both outer cells are empty (one empty one would have been forced)
                lc1[d] = a * n + z
                if b * n + c != a * n + z:
                    lc2[d] = b * n + c
            phase = PH_NEXT
        else:
            if d < 0:
                st[STATUS] = ST_DONE
                break
            tp = _pop_to(T, n, trail, tp, lmark[d], rowcnt)
            v = lv[d]
            if v >= n:
                d -= 1
                continue
            lv[d] = v + 1
            st[NODES] += 1
            if budget > 0 and st[NODES] > budget:
                st[STATUS] = ST_BUDGET
                break
            c1 = lc1[d]
            T[c1] = v
            trail[tp] = c1
            tp += 1
            rowcnt[c1 // n] += 1
            c2 = lc2[d]
            if c2 >= 0:
                T[c2] = v
                trail[tp] = c2
                tp += 1
                rowcnt[c2 // n] += 1
            mark = lmark[d]
            ok, tp = propagate(T, n, trail, tp, mark, rowcnt)
            if ok and prune and flags:
                ok = _partial_ok(T, n, trail[mark:], tp - mark, flags, rowcnt, reach, stack)
            if ok:
                d += 1
                lcond[d] = lcond[d - 1]
                phase = PH_DESCEND
    st[DEPTH] = d
    st[TP] = tp
    st[PHASE] = phase
