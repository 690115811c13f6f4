"""Covering cycles in the right-multiplication digraph, and sweeps of the two conjectures.

C1: a shelf has a cycle ``x -> x*s -> ...`` through every element exactly
once iff it is connected. C2: a connected spindle of order n has polynomial
``n·t·s``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .core import ShelfTable, as_table, is_connected, is_spindle, shelf_polynomial, validate_shelf
from .errors import InputError

__all__ = [
    "CycleWitness",
    "ConjectureReport",
    "hamiltonian_cycle",
    "verify_witness",
    "check_c1",
    "check_c2",
    "sweep",
    "CONJECTURES",
    "SWEEP_BOUND",
]

CONJECTURES = ("c1", "c2")
SWEEP_BOUND = 6
# below this order C2 is swept over every shelf class, at the bound over connected classes only
FULL_UNIVERSE_BOUND = 5


class Step(NamedTuple):
    multiplier: int
    element: int


@dataclass(frozen=True)
class CycleWitness:
    """Cycle from ``start``; ``steps[i].element = previous * steps[i].multiplier``."""

    start: int
    steps: tuple

    def path(self) -> list[int]:
        return [self.start] + [s.element for s in self.steps]

    def render(self) -> str:
        return "->".join(map(str, self.path()))


def hamiltonian_cycle(t) -> CycleWitness | None:
    """Lexicographically least covering cycle from 0, or None.

    Vertex sequences are compared lexicographically; each step uses the
    smallest multiplier that realizes the edge. Order 1 gets the empty
    witness.
    """
    t = as_table(t)
    n = t.order
    if n == 1:
        return CycleWitness(0, ())
    succ = []
    for x in range(n):
        first: dict[int, int] = {}
        for s in range(n):
            first.setdefault(t.op(x, s), s)
        succ.append(sorted(first.items()))
    visited = [False] * n
    visited[0] = True
    path: list[Step] = []

    def extend(x: int) -> bool:
        if len(path) == n - 1:
            for y, s in succ[x]:
                if y == 0:
                    path.append(Step(s, 0))
                    return True
            return False
        for y, s in succ[x]:
            if not visited[y]:
                visited[y] = True
                path.append(Step(s, y))
                if extend(y):
                    return True
                path.pop()
                visited[y] = False
        return False

    if extend(0):
        return CycleWitness(0, tuple(path))
    return None


def verify_witness(t, w: CycleWitness) -> bool:
    """Re-check a witness directly against the table."""
    t = as_table(t)
    n = t.order
    if n == 1:
        return w.start == 0 and len(w.steps) == 0
    if len(w.steps) != n:
        return False
    cur = w.start
    seen = []
    for s, y in w.steps:
        if not (0 <= s < n) or t.rows[cur][s] != y:
            return False
        seen.append(y)
        cur = y
    return cur == w.start and sorted(seen) == list(range(n))


def check_c1(t) -> bool:
    return (hamiltonian_cycle(t) is not None) == is_connected(t)


def check_c2(t) -> bool:
    t = as_table(t)
    if not (validate_shelf(t) and is_connected(t) and is_spindle(t)):
        return True
    return shelf_polynomial(t).terms == {(1, 1): t.order}


@dataclass
class ConjectureReport:
    conjecture: str
    order: int
    universe: str
    universe_size: int
    counterexamples: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def line(self) -> str:
        return (f"{self.conjecture} order={self.order} universe={self.universe} "
                f"size={self.universe_size} counterexamples={len(self.counterexamples)}")


def _universe(n: int, connected_only: bool, workers: int, budget) -> list[ShelfTable]:
    from .enumeration import EnumerationOptions, enumerate_parallel

    filters = frozenset({"connected"}) if connected_only else frozenset()
    opts = EnumerationOptions(filters=filters, up_to_iso=True, worker_count=workers, budget=budget)
    return list(enumerate_parallel(n, opts))


def sweep(n_max: int, which: str = "both", workers: int = 1, budget: int | None = None,
          n_min: int = 1) -> list[ConjectureReport]:
    """Check C1 over connected classes and C2 over all classes, per order.

    At order 6 the C2 universe is restricted to connected classes, which is
    where its hypothesis can hold.
    """
    if which not in ("c1", "c2", "both"):
        raise InputError(f"unknown conjecture {which!r}; use c1, c2 or both")
    if not 1 <= n_min <= n_max <= SWEEP_BOUND:
        raise InputError(f"conjecture sweeps run for orders 1..{SWEEP_BOUND}")
    picked: Sequence[str] = CONJECTURES if which == "both" else (which,)
    reports = []
    for n in range(n_min, n_max + 1):
        connected = None
        for name in picked:
            t0 = time.perf_counter()
            if name == "c1" or n > FULL_UNIVERSE_BOUND:
                if connected is None:
                    connected = _universe(n, True, workers, budget)
                universe, label = connected, "connected"
                check = check_c1 if name == "c1" else check_c2
            else:
                universe, label, check = _universe(n, False, workers, budget), "all", check_c2
            bad = [t for t in universe if not check(t)]
            reports.append(ConjectureReport(name, n, label, len(universe), bad, time.perf_counter() - t0))
    return reports
