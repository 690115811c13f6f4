"""Published reference values used by the verification commands.

Counts are numbers of isomorphism classes per order. The Latin table maps
the list index ``k`` of ``S_{n,k}`` to the printed row cycles and the
printed name of the group they generate.
"""

from __future__ import annotations

from collections import Counter
from typing import NamedTuple

CONNECTED_SHELVES = {1: 1, 2: 2, 3: 5, 4: 18, 5: 165, 6: 3987}
CONNECTED_RACKS = {1: 1, 2: 1, 3: 2, 4: 2, 5: 4, 6: 4}
CONNECTED_QUANDLES = {1: 1, 2: 0, 3: 1, 4: 1, 5: 3, 6: 2}
UNITAL_SHELVES = {1: 1, 2: 1, 3: 2, 4: 6, 5: 23}


class LatinEntry(NamedTuple):
    order: int
    index: int
    cycles: tuple
    group: str
    quandle: bool = False


def _e(n, k, cycles, group, quandle=False):
    return LatinEntry(n, k, tuple(cycles.split()), group, quandle)


LATIN_GROUPS = (
    # order 1 is not in the printed table; listed so every order has an entry
    _e(1, 1, "(id)", "trivial"),
    _e(2, 1, "(id) (id)", "trivial"),
    _e(3, 1, "(id) (id) (id)", "trivial"),
    _e(3, 2, "(id) (id) (01)", "ℤ₂"),
    _e(3, 3, "(12) (02) (01)", "D₃", True),
    _e(4, 1, "(id) (id) (id) (id)", "trivial"),
    _e(4, 2, "(132) (023) (031) (012)", "A₄", True),
    _e(4, 3, "(23) (23) (01) (01)", "ℤ₂×ℤ₂"),
    _e(4, 4, "(id) (id) (01) (01)", "ℤ₂"),
    _e(4, 7, "(id) (id) (id) (021)", "ℤ₃"),
    _e(4, 13, "(id) (id) (id) (12)", "ℤ₂"),
    _e(5, 126, "(id) (id) (id) (id) (id)", "trivial"),
    _e(5, 127, "(id) (id) (id) (id) (23)", "ℤ₂"),
    _e(5, 129, "(id) (id) (id) (id) (132)", "ℤ₃"),
    _e(5, 133, "(id) (id) (id) (id) (01)(23)", "ℤ₂"),
    _e(5, 135, "(id) (id) (id) (id) (0321)", "ℤ₄"),
    _e(5, 136, "(id) (id) (id) (12) (12)", "ℤ₂"),
    _e(5, 139, "(id) (id) (id) (12) (01)", "D₃"),
    _e(5, 140, "(id) (id) (id) (12) (021)", "D₃"),
    _e(5, 150, "(id) (id) (id) (021) (021)", "ℤ₃"),
    _e(5, 151, "(id) (id) (id) (021) (012)", "ℤ₃"),
    _e(5, 152, "(id) (id) (34) (01) (01)", "ℤ₂×ℤ₂"),
    _e(5, 153, "(id) (id) (01) (01) (01)", "ℤ₂"),
    _e(5, 154, "(id) (id) (01) (01) (01)(23)", "ℤ₂×ℤ₂"),
    _e(5, 155, "(id) (34) (34) (12) (12)", "ℤ₂×ℤ₂"),
    _e(5, 156, "(34) (34) (34) (12) (12)", "ℤ₂×ℤ₂"),
    _e(5, 158, "(34) (34) (34) (021) (021)", "ℤ₂×ℤ₃"),
    _e(5, 159, "(34) (34) (01)(34) (01) (01)", "ℤ₂×ℤ₂"),
    _e(5, 162, "(12)(34) (03)(24) (13)(04) (02)(14) (01)(23)", "D₅", True),
    _e(5, 163, "(1432) (0342) (0413) (0124) (0231)", "GA(1,5)", True),
    _e(5, 164, "(1432) (0423) (0134) (0241) (0312)", "GA(1,5)", True),
)


def latin_entry(n: int, k: int) -> LatinEntry | None:
    for e in LATIN_GROUPS:
        if e.order == n and e.index == k:
            return e
    return None


def latin_group_multiset(n: int) -> Counter:
    return Counter(e.group for e in LATIN_GROUPS if e.order == n)
