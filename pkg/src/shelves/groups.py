"""Row permutations of Latin shelves and the groups they generate.

For a Latin shelf every row ``L_x(y) = x*y`` is a permutation. This module
reads the rows as permutations, closes them into a group ``G``, identifies
``G`` by a small invariant-based catalog, and re-checks at runtime the two
derived structures: the shelf of distinct rows with ``L_a ▷ L_b = L_{a*b}``,
and conjugation ``a ◇ b = b^-1 a b`` on ``G``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .core import ShelfTable, as_table, validate_shelf
from .errors import BudgetExceeded, InputError, InvariantViolation, PreconditionError

__all__ = [
    "Permutation",
    "PermGroup",
    "DerivedShelfReport",
    "LatinGroupRow",
    "row_permutations",
    "cycle_notation",
    "group_closure",
    "identify_group",
    "lmult_shelf",
    "conjugation_checks",
    "derived_shelf_report",
    "latin_group_table",
    "named_group",
]

DEFAULT_CLOSURE_CAP = 5040


class Permutation(tuple):
    """One-line permutation: ``p[i]`` is the image of ``i``.

    ``p * q`` is composition as maps, ``(p * q)(i) = p(q(i))``.
    """

    def __new__(cls, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise InputError(f"not a permutation of 0..{len(images) - 1}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(other) != len(self):
            raise InputError("cannot compose permutations of different degree")
        return Permutation(self[i] for i in other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, v in enumerate(self):
            inv[v] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest member, sorted."""
        seen = set()
        out = []
        for start in range(len(self)):
            if start in seen or self[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        k = 1
        for c in self.cycles():
            k = k * len(c) // gcd(k, len(c))
        return k

    def __repr__(self):
        return f"Permutation({list(self)})"


def cycle_notation(p: Sequence[int]) -> str:
    """Disjoint cycles as ``"(12)(34)"``; ``"(id)"`` for the identity."""
    p = p if isinstance(p, Permutation) else Permutation(p)
    cycles = p.cycles()
    if not cycles:
        return "(id)"
    return "".join("(" + "".join(map(str, c)) + ")" for c in cycles)


def row_permutations(t) -> list[Permutation]:
    t = as_table(t)
    perms = []
    for x, row in enumerate(t.rows):
        if len(set(row)) != len(row):
            raise PreconditionError(f"row {x} = {list(row)} is not a permutation; the table is not Latin")
        perms.append(Permutation(row))
    return perms


@dataclass
class PermGroup:
    degree: int
    generators: list
    elements: list
    order: int
    abelian: bool
    element_order_multiset: dict
    identified_name: str | None = None

    def index(self) -> dict:
        return {g: i for i, g in enumerate(self.elements)}


def group_closure(gens: Sequence[Sequence[int]], max_size: int = DEFAULT_CLOSURE_CAP,
                  degree: int | None = None) -> PermGroup:
    """Breadth-first closure of ``gens`` under composition.

    In a finite group closing under products already yields inverses.
    Elements are listed sorted by image tuple.
    """
    gens = [g if isinstance(g, Permutation) else Permutation(g) for g in gens]
    if gens:
        degs = {g.degree for g in gens}
        if len(degs) != 1:
            raise InputError(f"generators have mixed degrees {sorted(degs)}")
        degree = degs.pop()
    elif degree is None:
        raise InputError("need a degree when there are no generators")
    ident = Permutation.identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g * a
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > max_size:
                        raise BudgetExceeded(f"group closure exceeded {max_size} elements")
        frontier = nxt
    elements = sorted(seen)
    orders = Counter(p.order() for p in elements)
    abelian = all(a * b == b * a for a in gens for b in gens)
    group = PermGroup(
        degree=degree,
        generators=list(gens),
        elements=elements,
        order=len(elements),
        abelian=abelian,
        element_order_multiset=dict(sorted(orders.items())),
    )
    group.identified_name = identify_group(group)
    return group


def _sig(order, abelian, orders):
    return order, abelian, tuple(sorted(orders.items()))


# (order, abelian, element orders) separates every group that can arise here
_CATALOG = {
    _sig(1, True, {1: 1}): "trivial",
    _sig(2, True, {1: 1, 2: 1}): "ℤ₂",
    _sig(3, True, {1: 1, 3: 2}): "ℤ₃",
    _sig(4, True, {1: 1, 2: 1, 4: 2}): "ℤ₄",
    _sig(4, True, {1: 1, 2: 3}): "ℤ₂×ℤ₂",
    _sig(5, True, {1: 1, 5: 4}): "ℤ₅",
    _sig(6, True, {1: 1, 2: 1, 3: 2, 6: 2}): "ℤ₂×ℤ₃",
    _sig(6, False, {1: 1, 2: 3, 3: 2}): "D₃",
    _sig(8, True, {1: 1, 2: 1, 4: 2, 8: 4}): "ℤ₈",
    _sig(8, True, {1: 1, 2: 3, 4: 4}): "ℤ₂×ℤ₄",
    _sig(8, True, {1: 1, 2: 7}): "ℤ₂×ℤ₂×ℤ₂",
    _sig(8, False, {1: 1, 2: 5, 4: 2}): "D₄",
    _sig(8, False, {1: 1, 2: 1, 4: 6}): "Q₈",
    _sig(10, False, {1: 1, 2: 5, 5: 4}): "D₅",
    _sig(12, False, {1: 1, 2: 3, 3: 8}): "A₄",
    _sig(12, False, {1: 1, 2: 7, 3: 2, 6: 2}): "D₆",
    _sig(20, False, {1: 1, 2: 5, 4: 10, 5: 4}): "GA(1,5)",
    _sig(24, False, {1: 1, 2: 9, 3: 8, 4: 6}): "S₄",
    _sig(60, False, {1: 1, 2: 15, 3: 20, 5: 24}): "A₅",
    _sig(120, False, {1: 1, 2: 25, 3: 20, 4: 30, 5: 24, 6: 20}): "S₅",
}


def identify_group(g: PermGroup) -> str:
    """Catalog label, or a descriptor like ``"order-8, nonabelian, orders {1:1, 2:5, 4:2}"``."""
    label = _CATALOG.get(_sig(g.order, g.abelian, g.element_order_multiset))
    if label is not None:
        return label
    kind = "abelian" if g.abelian else "nonabelian"
    orders = ", ".join(f"{k}:{v}" for k, v in sorted(g.element_order_multiset.items()))
    return f"order-{g.order}, {kind}, orders {{{orders}}}"


class LeftMultShelf(NamedTuple):
    table: ShelfTable
    rows: list
    phi: list
    phi_surjective: bool


def lmult_shelf(t) -> LeftMultShelf:
    """Shelf on the distinct rows X = {L_x}, with ``L_a ▷ L_b = L_{a*b}``.

    ``rows`` lists X in order of first occurrence, ``phi[x]`` is the index of
    ``L_x`` in it. Raises :class:`InvariantViolation` if ▷ is not
    well defined, does not agree with the pointwise product, or is not a shelf.
    """
    t = as_table(t)
    row_permutations(t)
    n = t.order
    X: list = []
    where: dict = {}
    phi = []
    for x in range(n):
        r = t.rows[x]
        if r not in where:
            where[r] = len(X)
            X.append(r)
        phi.append(where[r])
    m = len(X)
    table = [[-1] * m for _ in range(m)]
    for a in range(n):
        for b in range(n):
            i, j = phi[a], phi[b]
            v = phi[t.op(a, b)]
            pointwise = tuple(t.op(X[i][s], X[j][s]) for s in range(n))
            if pointwise != t.rows[t.op(a, b)]:
                raise InvariantViolation(f"L_{a} ▷ L_{b} differs from L_{{{a}*{b}}} pointwise")
            if table[i][j] == -1:
                table[i][j] = v
            elif table[i][j] != v:
                raise InvariantViolation(f"▷ is not well defined at rows ({i}, {j})")
    lm = ShelfTable(table)
    if not validate_shelf(lm):
        raise InvariantViolation("the shelf of rows is not right-distributive")
    return LeftMultShelf(lm, [Permutation(r) for r in X], phi, set(phi) == set(range(m)))


class ConjugationReport(NamedTuple):
    self_distributive: bool
    idempotent: bool
    axiom2: bool
    axiom2_whole_group: bool
    generators_transpositions_or_identity: bool
    generators_square_trivial: bool


def _cayley(g: PermGroup) -> tuple[np.ndarray, np.ndarray]:
    idx = g.index()
    m = g.order
    mul = np.empty((m, m), dtype=np.int64)
    for i, a in enumerate(g.elements):
        for j, b in enumerate(g.elements):
            mul[i, j] = idx[a * b]
    inv = np.array([idx[a.inverse()] for a in g.elements], dtype=np.int64)
    return mul, inv


def conjugation_checks(g: PermGroup, gens: Sequence[Sequence[int]] | None = None) -> ConjugationReport:
    """Check conjugation ``a ◇ b = b^-1 a b`` on G.

    Right self-distributivity and idempotence are checked on every
    triple/element of G and must hold. ``axiom2`` is ``(a◇b)◇b == a`` for
    every a in G and every generator b; ``axiom2_whole_group`` lets b range
    over all of G as well (this fails for S3 generated by transpositions,
    where b can be a 3-cycle).
    """
    gens = [Permutation(p) for p in (g.generators if gens is None else gens)]
    idx = g.index()
    for p in gens:
        if p not in idx:
            raise InputError(f"generator {list(p)} is not an element of the group")
    mul, inv = _cayley(g)
    m = g.order
    # conj[a, b] = b^-1 a b, composing as maps
    conj = mul[np.broadcast_to(inv[None, :], (m, m)), mul]
    a_idx = np.arange(m)
    # (a◇b)◇c against (a◇c)◇(b◇c), one slab of a at a time
    self_dist = True
    for a in range(m):
        left = conj[conj[a][:, None], a_idx[None, :]]
        right = conj[conj[a][None, :], conj]
        if not np.array_equal(left, right):
            self_dist = False
            break
    idem = bool(np.array_equal(conj[a_idx, a_idx], a_idx))
    if not self_dist:
        raise InvariantViolation("conjugation on the row group is not self-distributive")
    if not idem:
        raise InvariantViolation("conjugation on the row group is not idempotent")
    gi = sorted({idx[p] for p in gens})
    ax2_gens = all(np.array_equal(conj[conj[:, b], b], a_idx) for b in gi)
    twice = conj[conj, np.arange(m)[None, :]]
    ax2_all = bool(np.array_equal(twice, a_idx[:, None].repeat(m, 1)))
    transp = all(p.is_identity() or (len(p.cycles()) == 1 and len(p.cycles()[0]) == 2) for p in gens)
    square = all((p * p).is_identity() for p in gens)
    return ConjugationReport(self_dist, idem, ax2_gens, ax2_all, transp, square)


@dataclass
class DerivedShelfReport:
    lmult_shelf: ShelfTable
    phi_surjective: bool
    conj_self_distributive: bool
    conj_idempotent: bool
    conj_axiom2: bool
    group: PermGroup = field(repr=False, default=None)
    conjugation: ConjugationReport = field(repr=False, default=None)


def derived_shelf_report(t) -> DerivedShelfReport:
    lm = lmult_shelf(t)
    rows = row_permutations(t)
    g = group_closure(rows)
    cj = conjugation_checks(g, rows)
    return DerivedShelfReport(
        lmult_shelf=lm.table,
        phi_surjective=lm.phi_surjective,
        conj_self_distributive=cj.self_distributive,
        conj_idempotent=cj.idempotent,
        conj_axiom2=cj.axiom2,
        group=g,
        conjugation=cj,
    )


class LatinGroupRow(NamedTuple):
    order: int
    table: ShelfTable
    appendix_index: int | None
    cycles: list
    group: str


def latin_group_table(n_max: int, workers: int = 1) -> list[LatinGroupRow]:
    """Cycle notations of rows and the row group for every Latin class up to ``n_max``."""
    from .data import appendix_index_map
    from .enumeration import EnumerationOptions, enumerate_parallel

    if n_max > 5:
        raise InputError("the Latin group table is defined for orders up to 5")
    out = []
    for n in range(1, n_max + 1):
        index = appendix_index_map(n)
        opts = EnumerationOptions(filters=frozenset({"latin"}), up_to_iso=True, worker_count=workers)
        for t in enumerate_parallel(n, opts):
            rows = row_permutations(t)
            g = group_closure(rows)
            out.append(LatinGroupRow(n, t, index.get(t), [cycle_notation(p) for p in rows], g.identified_name))
    out.sort(key=lambda r: (r.order, r.appendix_index if r.appendix_index is not None else 10**9, r.table))
    return out


def named_group(name: str) -> list[Permutation]:
    """Element list of a small named group, sorted by image tuple.

    Names: ``trivial``, ``Z<k>``, ``S<k>``, ``D<k>``, ``A4``, ``V4``.
    """
    key = name.strip().upper()
    if key in ("TRIVIAL", "1", "Z1"):
        gens, deg = [], 1
    elif key == "V4":
        gens, deg = [Permutation([1, 0, 3, 2]), Permutation([2, 3, 0, 1])], 4
    elif key == "A4":
        gens, deg = [Permutation([1, 2, 0, 3]), Permutation([0, 2, 3, 1])], 4
    elif key[:1] in "ZSD" and key[1:].isdigit():
        k = int(key[1:])
        if k < 1 or k > 7:
            raise InputError(f"group size parameter {k} out of range 1..7")
        if key[0] == "Z":
            gens, deg = [Permutation([(i + 1) % k for i in range(k)])], k
        elif key[0] == "S":
            gens = [Permutation([(i + 1) % k for i in range(k)])]
            if k > 1:
                gens.append(Permutation([1, 0] + list(range(2, k))))
            deg = k
        else:
            if k < 3:
                raise InputError("dihedral groups here start at D3")
            rot = Permutation([(i + 1) % k for i in range(k)])
            ref = Permutation([(-i) % k for i in range(k)])
            gens, deg = [rot, ref], k
    else:
        raise InputError(f"unknown group name {name!r}")
    return group_closure(gens, degree=deg).elements
