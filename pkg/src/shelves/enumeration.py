"""Condition-by-condition shelf enumeration.

Right-distributivity on ``n`` elements is the conjunction of ``n**3``
conditions ``(x, y, z)``: ``(x*y)*z == (x*z)*(y*z)``. The search starts from
an empty table, applies the conditions one at a time, and for each partial
table generates every minimal fill of the cells that condition reads. A
candidate survives only if no other fully determined condition fails.

``engine="python"`` runs this procedure literally on :class:`PartialTable`
objects and is the reference. ``engine="native"`` is the compiled search the
CLI uses (see ``_native``): it still takes conditions in the configured
order, but branches one cell at a time and fills every cell a condition
forces as soon as it is forced. Both produce the same set of tables.
"""

from __future__ import annotations

import logging
import multiprocessing
import os
import time
from concurrent.futures import FIRST_EXCEPTION, ProcessPoolExecutor, wait
from dataclasses import dataclass, field, replace
from itertools import permutations, product
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from . import _native
from .core import (
    ShelfTable,
    classify,
    identity_element,
    is_connected,
    is_latin,
    is_quandle,
    is_rack,
    is_spindle,
)
from .errors import BudgetExceeded, EnumerationError, InputError, PreconditionError

log = logging.getLogger(__name__)

EMPTY = -1

FILTERS = ("connected", "latin", "unital", "spindle", "rack", "quandle")
_FLAG_BITS = {
    "connected": _native.F_CONNECTED,
    "latin": _native.F_LATIN,
    "unital": _native.F_UNITAL,
    "spindle": _native.F_SPINDLE,
    "rack": _native.F_RACK,
    "quandle": _native.F_QUANDLE,
}

MAX_ORDER = 7
CONNECTED_BOUND = 6
UNITAL_BOUND = 5


class Condition(NamedTuple):
    x: int
    y: int
    z: int


class PartialTable:
    """n x n table whose cells are either filled (0..n-1) or ``EMPTY``."""

    __slots__ = ("n", "cells", "filled_count")

    def __init__(self, n: int, cells: Sequence[int] | None = None):
        if cells is None:
            cells = (EMPTY,) * (n * n)
        cells = tuple(int(v) for v in cells)
        if len(cells) != n * n:
            raise InputError(f"expected {n * n} cells, got {len(cells)}")
        for v in cells:
            if v != EMPTY and not 0 <= v < n:
                raise InputError(f"cell value {v} out of range for order {n}")
        self.n = n
        self.cells = cells
        self.filled_count = sum(v != EMPTY for v in cells)

    @classmethod
    def empty(cls, n: int) -> "PartialTable":
        return cls(n)

    @classmethod
    def from_rows(cls, rows) -> "PartialTable":
        rows = [list(r) for r in rows]
        return cls(len(rows), [v for r in rows for v in r])

    @classmethod
    def from_table(cls, t: ShelfTable) -> "PartialTable":
        return cls(t.order, t.flat)

    def get(self, x: int, y: int) -> int:
        return self.cells[x * self.n + y]

    def with_cells(self, updates: dict[int, int]) -> "PartialTable":
        if not updates:
            return self
        cells = list(self.cells)
        for idx, v in updates.items():
            cells[idx] = v
        return PartialTable(self.n, cells)

    @property
    def is_complete(self) -> bool:
        return self.filled_count == self.n * self.n

    def to_table(self) -> ShelfTable:
        if not self.is_complete:
            raise PreconditionError("partial table still has empty cells")
        return ShelfTable.from_flat(self.cells, self.n)

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.cells[i * n:(i + 1) * n]) for i in range(n)]

    def __eq__(self, other):
        if isinstance(other, PartialTable):
            return self.n == other.n and self.cells == other.cells
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.cells))

    def __repr__(self):
        return f"PartialTable({self.rows()})"


@dataclass
class EnumerationOptions:
    """Knobs for :func:`enumerate_shelves` and :func:`enumerate_parallel`.

    ``condition_ordering`` is ``None``/``"lex"`` or an explicit list of all
    ``n**3`` triples. ``prune`` turns on the monotone mid-search filter
    checks; ``lookahead`` the python engine's check of not-yet-applied
    conditions (the native engine always checks them while propagating).
    Neither changes the output, only the running time.
    """

    condition_ordering: object = None
    filters: frozenset = field(default_factory=frozenset)
    up_to_iso: bool = False
    worker_count: int = 1
    frontier_depth: int = 2
    budget: int | None = None
    engine: str = "native"
    prune: bool = True
    lookahead: bool = True

    def __post_init__(self):
        self.filters = frozenset(self.filters)
        unknown = self.filters - set(FILTERS)
        if unknown:
            raise InputError(f"unknown filters: {sorted(unknown)}")
        if self.worker_count < 1:
            raise InputError("worker_count must be at least 1")
        if self.frontier_depth < 0:
            raise InputError("frontier_depth must be non-negative")
        if self.engine not in ("native", "python"):
            raise InputError(f"unknown engine {self.engine!r}")

    @property
    def flag_bits(self) -> int:
        bits = 0
        for f in self.filters:
            bits |= _FLAG_BITS[f]
        return bits


def default_workers() -> int:
    env = os.environ.get("SHELVES_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"SHELVES_WORKERS must be an integer, got {env!r}") from None
    return 1


def conditions(n: int, ordering=None) -> list[Condition]:
    """All ``n**3`` conditions, lexicographic unless an explicit list is given."""
    if n < 1:
        raise InputError(f"order must be positive, got {n}")
    lex = [Condition(x, y, z) for x, y, z in product(range(n), repeat=3)]
    if ordering is None or ordering == "lex":
        return lex
    if isinstance(ordering, str):
        raise InputError(f"unknown condition ordering {ordering!r}")
    conds = [Condition(*map(int, c)) for c in ordering]
    if len(conds) != len(lex) or set(conds) != set(lex):
        raise InputError(f"condition ordering is not a permutation of the {n ** 3} conditions of order {n}")
    return conds


def generate_candidates(m: PartialTable, c) -> list[PartialTable]:
    """Every minimal fill of the cells read by condition ``c`` that satisfies it.

    Cells are filled in the order (x,y), (x,z), (y,z); each empty one loops
    over all values. Then the outer cells ((x*y),z) and ((x*z),(y*z)): both
    empty (or the same empty cell) gives n candidates with a common value,
    one empty copies the other, both filled must agree.
    """
    n = m.n
    x, y, z = c
    cells = list(m.cells)
    out: list[PartialTable] = []
    fills: dict[int, int] = {}

    def fill_first(stage_cells):
        if not stage_cells:
            finish()
            return
        cell, rest = stage_cells[0], stage_cells[1:]
        if cells[cell] == EMPTY:
            for v in range(n):
                cells[cell] = v
                fills[cell] = v
                fill_first(rest)
            cells[cell] = EMPTY
            del fills[cell]
        else:
            fill_first(rest)

    def finish():
        o1 = cells[x * n + y] * n + z
        o2 = cells[x * n + z] * n + cells[y * n + z]
        a, b = cells[o1], cells[o2]
        if o1 == o2:
            if a == EMPTY:
                for v in range(n):
                    out.append(m.with_cells({**fills, o1: v}))
            else:
                out.append(m.with_cells(dict(fills)))
        elif a == EMPTY and b == EMPTY:
            for v in range(n):
                out.append(m.with_cells({**fills, o1: v, o2: v}))
        elif a == EMPTY:
            out.append(m.with_cells({**fills, o1: b}))
        elif b == EMPTY:
            out.append(m.with_cells({**fills, o2: a}))
        elif a == b:
            out.append(m.with_cells(dict(fills)))

    fill_first([x * n + y, x * n + z, y * n + z])
    return out


def _condition_fails(cells, n, c) -> bool:
    x, y, z = c
    a = cells[x * n + y]
    b = cells[x * n + z]
    cc = cells[y * n + z]
    if a == EMPTY or b == EMPTY or cc == EMPTY:
        return False
    left = cells[a * n + z]
    right = cells[b * n + cc]
    if left == EMPTY or right == EMPTY:
        return False
    return left != right


def violates_remaining(m: PartialTable, applied_prefix_length: int, conds: Sequence) -> bool:
    """True iff a condition after the applied prefix is fully determined and fails.

    A condition reading an empty cell is undecided, never violated.
    """
    if applied_prefix_length > len(conds):
        raise InputError("prefix longer than the condition list")
    cells = m.cells
    n = m.n
    return any(_condition_fails(cells, n, c) for c in conds[applied_prefix_length:])


def _partial_prune_ok(m: PartialTable, filters: frozenset) -> bool:
    """Python twin of the native monotone pruning; looks at all filled cells."""
    if not filters:
        return True
    n = m.n
    rows = m.rows()
    if filters & {"spindle", "quandle"}:
        if any(rows[x][x] not in (EMPTY, x) for x in range(n)):
            return False
    if "latin" in filters:
        for r in rows:
            vals = [v for v in r if v != EMPTY]
            if len(vals) != len(set(vals)):
                return False
    if filters & {"rack", "quandle"}:
        for j in range(n):
            vals = [rows[i][j] for i in range(n) if rows[i][j] != EMPTY]
            if len(vals) != len(set(vals)):
                return False
    if "unital" in filters:
        if not any(
            all(rows[e][j] in (EMPTY, j) and rows[j][e] in (EMPTY, j) for j in range(n)) for e in range(n)
        ):
            return False
    if "connected" in filters and n > 1:
        for s in range(n):
            seen = {s}
            stack = [s]
            known = True
            while stack and known:
                u = stack.pop()
                if EMPTY in rows[u]:
                    known = False
                    break
                for v in rows[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            if known and len(seen) < n:
                return False
    return True


_PREDICATES = {
    "connected": is_connected,
    "latin": is_latin,
    "unital": lambda t: identity_element(t) is not None,
    "spindle": is_spindle,
    "rack": is_rack,
    "quandle": is_quandle,
}


def passes_filters(t: ShelfTable, filters: Iterable[str]) -> bool:
    return all(_PREDICATES[f](t) for f in filters)


def _check_order(n: int):
    if not isinstance(n, int) or n < 1:
        raise InputError(f"order must be a positive integer, got {n!r}")
    if n > MAX_ORDER:
        raise InputError(f"order {n} is beyond the supported maximum of {MAX_ORDER}")


def _resolve(opts: EnumerationOptions | None, kw) -> EnumerationOptions:
    if opts is None:
        opts = EnumerationOptions(**kw)
    elif kw:
        opts = replace(opts, **kw)
    return opts


# -- python reference engine -------------------------------------------------


class _Budget:
    def __init__(self, cap):
        self.cap = cap
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.cap is not None and self.nodes > self.cap:
            raise BudgetExceeded(f"search exceeded its budget of {self.cap} nodes", nodes=self.nodes)


def _python_search(n: int, opts: EnumerationOptions, start: PartialTable, base: int, conds, budget: _Budget):
    seen: set = set()

    def rec(m: PartialTable, k: int):
        if k == len(conds):
            if m.cells not in seen:
                seen.add(m.cells)
                yield m
            return
        for cand in generate_candidates(m, conds[k]):
            budget.tick()
            if opts.lookahead and violates_remaining(cand, k + 1, conds):
                continue
            if opts.prune and not _partial_prune_ok(cand, opts.filters):
                continue
            yield from rec(cand, k + 1)

    for m in rec(start, base):
        t = m.to_table()
        if passes_filters(t, opts.filters):
            yield t


# -- native engine -------------------------------------------------------------


def _perm_arrays(n: int):
    perms = np.array(list(permutations(range(n))), dtype=np.int8).reshape(-1, n)
    invs = np.argsort(perms, axis=1).astype(np.int8)
    return perms, invs


class _NativeSearch:
    """Owns the numpy state of one resumable native search."""

    def __init__(self, n, conds, opts: EnumerationOptions, start: PartialTable, base: int, budget):
        self.n = n
        nc = len(conds)
        self.conds = np.array(conds, dtype=np.int64).reshape(nc, 3)
        self.T = np.array(start.cells, dtype=np.int8)
        depth = n * n + 1
        self.lcond = np.zeros(depth, dtype=np.int64)
        self.lmark = np.zeros(depth, dtype=np.int64)
        self.lc1 = np.zeros(depth, dtype=np.int64)
        self.lc2 = np.zeros(depth, dtype=np.int64)
        self.lv = np.zeros(depth, dtype=np.int64)
        self.trail = np.zeros(n * n, dtype=np.int64)
        self.rowcnt = np.array([sum(v != EMPTY for v in start.cells[i * n:(i + 1) * n]) for i in range(n)],
                               dtype=np.int64)
        self.st = np.zeros(_native.ST_LEN, dtype=np.int64)
        self.st[_native.BASE] = base
        self.flags = opts.flag_bits
        self.prune = bool(opts.prune)
        self.iso = bool(opts.up_to_iso)
        if self.iso:
            self.perms, self.invs = _perm_arrays(n)
        else:
            self.perms = self.invs = np.zeros((1, n), dtype=np.int8)
        self.budget = 0 if budget is None else int(budget)

    @property
    def nodes(self) -> int:
        return int(self.st[_native.NODES])

    def chunks(self, chunk_size: int = 1 << 16) -> Iterator[np.ndarray]:
        out = np.empty((chunk_size, self.n * self.n), dtype=np.int8)
        while True:
            _native.search(
                self.T, self.n, self.conds, self.st, self.lcond, self.lmark, self.lc1, self.lc2, self.lv,
                self.trail, self.rowcnt, self.flags, self.prune, self.iso, self.perms, self.invs, out,
                self.budget,
            )
            got = int(self.st[_native.LEAVES])
            if got:
                yield out[:got].copy()
            status = self.st[_native.STATUS]
            if status == _native.ST_DONE:
                return
            if status == _native.ST_BUDGET:
                raise BudgetExceeded(f"search exceeded its budget of {self.budget} nodes", nodes=self.nodes)


def _rows_to_tables(arr: np.ndarray, n: int) -> list[ShelfTable]:
    return [ShelfTable.from_flat(row.tolist(), n) for row in arr]


def _native_stream(n, opts, start, base, conds, budget=None) -> Iterator[ShelfTable]:
    search = _NativeSearch(n, conds, opts, start, base, opts.budget if budget is None else budget)
    for chunk in search.chunks():
        yield from _rows_to_tables(chunk, n)


def enumerate_shelves(n: int, opts: EnumerationOptions | None = None, **kw) -> Iterator[ShelfTable]:
    """Stream every labeled shelf of order ``n`` that passes ``opts.filters``.

    With ``up_to_iso`` the stream is the sorted list of distinct canonical
    forms instead. Raises :class:`BudgetExceeded` when the node cap trips.
    """
    _check_order(n)
    opts = _resolve(opts, kw)
    conds = conditions(n, opts.condition_ordering)
    start = PartialTable.empty(n)
    if opts.engine == "python":
        stream = _python_search(n, opts, start, 0, conds, _Budget(opts.budget))
        if opts.up_to_iso:
            from .iso import reduce_to_iso_classes

            return iter(reduce_to_iso_classes(list(stream)))
        return stream
    stream = _native_stream(n, opts, start, 0, conds)
    if opts.up_to_iso:
        # each class contributes exactly its lexicographically least member
        return iter(sorted(stream))
    return stream


def frontier(n: int, opts: EnumerationOptions, conds=None) -> tuple[list[PartialTable], int]:
    """Breadth-first expansion of the first ``opts.frontier_depth`` conditions."""
    if conds is None:
        conds = conditions(n, opts.condition_ordering)
    depth = min(opts.frontier_depth, len(conds))
    level = [PartialTable.empty(n)]
    budget = _Budget(opts.budget)
    for k in range(depth):
        nxt = []
        for m in level:
            for cand in generate_candidates(m, conds[k]):
                budget.tick()
                if opts.lookahead and violates_remaining(cand, k + 1, conds):
                    continue
                if opts.prune and not _partial_prune_ok(cand, opts.filters):
                    continue
                nxt.append(cand)
        level = nxt
    return level, depth


def _subtree_task(args):
    n, opts, cells, base, conds, budget = args
    search = _NativeSearch(n, conds, opts, PartialTable(n, cells), base, budget)
    parts = list(search.chunks())
    arr = np.concatenate(parts) if parts else np.empty((0, n * n), dtype=np.int8)
    return arr, search.nodes


def enumerate_parallel(n: int, opts: EnumerationOptions | None = None, **kw) -> Iterator[ShelfTable]:
    """Frontier-partitioned enumeration with a schedule-independent result.

    The first ``frontier_depth`` conditions are expanded breadth first; each
    surviving partial table is searched depth first by a worker. The merged
    output is sorted by flattened table, so it is identical for any worker
    count.
    """
    _check_order(n)
    opts = _resolve(opts, kw)
    conds = conditions(n, opts.condition_ordering)
    if opts.engine == "python":
        result = set(enumerate_shelves(n, replace(opts, up_to_iso=False)))
        if opts.up_to_iso:
            from .iso import reduce_to_iso_classes

            return iter(reduce_to_iso_classes(list(result)))
        return iter(sorted(result))

    roots, depth = frontier(n, opts, conds)
    tasks = [(n, opts, m.cells, depth, conds, opts.budget) for m in roots]
    collected: set = set()
    total_nodes = 0

    def absorb(arr, nodes):
        nonlocal total_nodes
        total_nodes += nodes
        if opts.budget is not None and total_nodes > opts.budget:
            raise BudgetExceeded(f"search exceeded its budget of {opts.budget} nodes", nodes=total_nodes)
        for row in arr:
            collected.add(row.tobytes())

    t0 = time.perf_counter()
    if opts.worker_count == 1 or len(tasks) <= 1:
        for task in tasks:
            arr, nodes = _subtree_task(task)
            absorb(arr, nodes)
    else:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=opts.worker_count, mp_context=ctx) as pool:
            futures = {pool.submit(_subtree_task, task): i for i, task in enumerate(tasks)}
            done, pending = wait(futures, return_when=FIRST_EXCEPTION)
            for fut in pending:
                fut.cancel()
            for fut in futures:
                if fut.cancelled():
                    continue
                exc = fut.exception()
                if exc is not None:
                    if isinstance(exc, BudgetExceeded):
                        raise exc
                    raise EnumerationError(f"worker for frontier node {futures[fut]} failed: {exc!r}") from exc
            for fut in futures:
                absorb(*fut.result())
    log.debug("order %d: %d frontier nodes, %d search nodes, %.2fs", n, len(tasks), total_nodes,
              time.perf_counter() - t0)
    tables = sorted(np.frombuffer(b, dtype=np.int8).tolist() for b in collected)
    return iter(ShelfTable.from_flat(t, n) for t in tables)


# -- count tables ----------------------------------------------------------------


class CountRow(NamedTuple):
    order: int
    connected: int
    connected_racks: int
    connected_quandles: int
    unital: int | None


def connected_classes(n: int, workers: int = 1, budget: int | None = None) -> list[ShelfTable]:
    opts = EnumerationOptions(filters=frozenset({"connected"}), up_to_iso=True, worker_count=workers,
                              budget=budget)
    return list(enumerate_parallel(n, opts))


def count_summary(n_max: int, *, workers: int = 1, connected_bound: int = CONNECTED_BOUND,
                  unital_bound: int = UNITAL_BOUND, budget: int | None = None,
                  progress=None, collect: dict | None = None) -> list[CountRow]:
    """Iso-class counts per order: connected shelves/racks/quandles, unital shelves.

    Unital counts are only computed up to ``unital_bound`` (``None`` beyond).
    When ``collect`` is a dict, the connected classes of each order are
    stored in it under the order.
    """
    if n_max < 1:
        raise InputError("n_max must be at least 1")
    if n_max > connected_bound:
        raise InputError(f"n_max={n_max} exceeds the feasibility bound {connected_bound}")
    rows = []
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        conn = connected_classes(n, workers, budget)
        if collect is not None:
            collect[n] = conn
        recs = [classify(t) for t in conn]
        racks = sum(r.is_rack for r in recs)
        quandles = sum(r.is_quandle for r in recs)
        unital = None
        if n <= unital_bound:
            opts = EnumerationOptions(filters=frozenset({"unital"}), up_to_iso=True, worker_count=workers,
                                      budget=budget)
            unital = sum(1 for _ in enumerate_parallel(n, opts))
        rows.append(CountRow(n, len(conn), racks, quandles, unital))
        if progress is not None:
            progress(rows[-1], time.perf_counter() - t0)
    return rows
