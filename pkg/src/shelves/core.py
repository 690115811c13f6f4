"""Shelf tables, structural predicates, the shelf polynomial and example families.

A table of order ``n`` lives on the elements ``0..n-1``; cell ``(x, y)`` holds
``x * y`` (row ``x``, column ``y``).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError, InvariantViolation, PreconditionError

__all__ = [
    "ShelfTable",
    "TranslationMaps",
    "ShelfPolynomial",
    "ClassificationRecord",
    "as_table",
    "validate_shelf",
    "translations",
    "is_connected",
    "is_latin",
    "is_rack",
    "is_spindle",
    "is_quandle",
    "is_associative",
    "identity_element",
    "classify",
    "shelf_polynomial",
    "linear_shelf",
    "conjugation_shelf",
    "laver_table",
]


class ShelfTable:
    """Immutable n x n operation table over ``0..n-1``.

    Construction checks shape and range only; right-distributivity is the
    business of :func:`validate_shelf`. Tables compare and sort by their
    row-major flattening.
    """

    __slots__ = ("_rows", "__dict__")

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0:
            raise InputError("a table needs at least one row")
        for i, r in enumerate(rows):
            if len(r) != n:
                raise InputError(f"row {i} has {len(r)} entries, expected {n}")
            for j, v in enumerate(r):
                if isinstance(v, bool) or not isinstance(v, int):
                    try:
                        iv = int(v)
                    except (TypeError, ValueError):
                        raise InputError(f"cell ({i},{j}) is not an integer: {v!r}") from None
                    if iv != v:
                        raise InputError(f"cell ({i},{j}) is not an integer: {v!r}")
                if not 0 <= v < n:
                    raise InputError(f"cell ({i},{j}) = {v} is out of range for order {n}")
        self._rows = tuple(tuple(int(v) for v in r) for r in rows)

    @classmethod
    def from_flat(cls, flat: Sequence[int], n: int | None = None) -> "ShelfTable":
        if n is None:
            n = math.isqrt(len(flat))
        if n * n != len(flat):
            raise InputError(f"flat table of length {len(flat)} is not square")
        return cls(tuple(flat[i * n:(i + 1) * n]) for i in range(n))

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    @property
    def order(self) -> int:
        return len(self._rows)

    @cached_property
    def flat(self) -> tuple[int, ...]:
        return tuple(v for r in self._rows for v in r)

    def op(self, x: int, y: int) -> int:
        return self._rows[x][y]

    def column(self, y: int) -> tuple[int, ...]:
        return tuple(r[y] for r in self._rows)

    def transpose(self) -> "ShelfTable":
        return ShelfTable(zip(*self._rows))

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __len__(self):
        return len(self._rows)

    def __getitem__(self, x):
        return self._rows[x]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other):
        if isinstance(other, ShelfTable):
            return self._rows == other._rows
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, ShelfTable):
            return NotImplemented
        return (self.order, self.flat) < (other.order, other.flat)

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"ShelfTable({self.to_lists()})"

    def __str__(self):
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self._rows) + "]"


def as_table(t) -> ShelfTable:
    return t if isinstance(t, ShelfTable) else ShelfTable(t)


def validate_shelf(t) -> bool:
    """True iff ``(x*y)*z == (x*z)*(y*z)`` for every triple."""
    t = as_table(t)
    rows = t.rows
    n = t.order
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            ry = rows[y]
            rxy = rows[rx[y]]
            for z in range(n):
                if rxy[z] != rows[rx[z]][ry[z]]:
                    return False
    return True


class TranslationMaps(NamedTuple):
    """``rights[x][y] = y*x`` (column x), ``lefts[x][y] = x*y`` (row x)."""

    rights: tuple[tuple[int, ...], ...]
    lefts: tuple[tuple[int, ...], ...]


def translations(t) -> TranslationMaps:
    t = as_table(t)
    return TranslationMaps(
        rights=tuple(t.column(x) for x in range(t.order)),
        lefts=t.rows,
    )


def _is_perm(seq) -> bool:
    return len(set(seq)) == len(seq)


def is_connected(t) -> bool:
    """Every element reaches every other along edges ``x -> x*s``.

    Strong connectivity of that digraph is checked by one forward and one
    backward search from element 0.
    """
    t = as_table(t)
    n = t.order
    succ = [set(r) for r in t.rows]
    pred = [set() for _ in range(n)]
    for x in range(n):
        for v in succ[x]:
            pred[v].add(x)

    def reach(adj):
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == n

    return reach(succ) and reach(pred)


def is_latin(t) -> bool:
    return all(_is_perm(r) for r in as_table(t).rows)


def is_rack(t) -> bool:
    t = as_table(t)
    return validate_shelf(t) and all(_is_perm(c) for c in translations(t).rights)


def is_spindle(t) -> bool:
    t = as_table(t)
    return all(t.op(x, x) == x for x in range(t.order)) and validate_shelf(t)


def is_quandle(t) -> bool:
    return is_spindle(t) and is_rack(t)


def is_associative(t) -> bool:
    t = as_table(t)
    r = t.rows
    n = t.order
    return all(r[r[x][y]][z] == r[x][r[y][z]] for x, y, z in product(range(n), repeat=3))


def identity_element(t) -> int | None:
    """Smallest ``e`` with ``e*x = x = x*e`` for all x, or None."""
    t = as_table(t)
    n = t.order
    ident = tuple(range(n))
    for e in range(n):
        if t.rows[e] == ident and t.column(e) == ident:
            return e
    return None


@dataclass(frozen=True)
class ShelfPolynomial:
    """Multiset of exponent pairs ``(r, c)``; ``terms[(r, c)]`` is the multiplicity.

    ``r(x)`` counts the x's in row x, ``c(x)`` counts column-x entries that
    equal their row index.
    """

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", dict(sorted((k, v) for k, v in self.terms.items() if v)))

    def __eq__(self, other):
        if isinstance(other, ShelfPolynomial):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    @property
    def degree_sum(self) -> int:
        return sum(self.terms.values())

    def as_triples(self) -> list[list[int]]:
        return [[r, c, m] for (r, c), m in self.terms.items()]

    @classmethod
    def from_triples(cls, triples) -> "ShelfPolynomial":
        terms: Counter = Counter()
        for r, c, m in triples:
            terms[(int(r), int(c))] += int(m)
        return cls(dict(terms))

    def render(self) -> str:
        """Terms by ascending ``(r, c)``, e.g. ``4·t·s``, ``3·t^3·s^3``, ``3``."""
        parts = []
        for (r, c), m in self.terms.items():
            factors = []
            if m != 1 or (r == 0 and c == 0):
                factors.append(str(m))
            for var, e in (("t", r), ("s", c)):
                if e == 1:
                    factors.append(var)
                elif e > 1:
                    factors.append(f"{var}^{e}")
            parts.append("·".join(factors))
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.render()


def shelf_polynomial(t) -> ShelfPolynomial:
    t = as_table(t)
    n = t.order
    terms: Counter = Counter()
    for x in range(n):
        r = sum(1 for y in range(n) if t.op(x, y) == x)
        c = sum(1 for y in range(n) if t.op(y, x) == y)
        terms[(r, c)] += 1
    return ShelfPolynomial(dict(terms))


@dataclass(frozen=True)
class ClassificationRecord:
    is_shelf: bool
    is_connected: bool
    is_latin: bool
    is_rack: bool
    is_quandle: bool
    is_spindle: bool
    is_unital: bool
    is_associative: bool
    polynomial: ShelfPolynomial
    identity_element: int | None = None

    FLAG_NAMES = (
        "is_shelf",
        "is_connected",
        "is_latin",
        "is_rack",
        "is_quandle",
        "is_spindle",
        "is_unital",
        "is_associative",
    )

    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in self.FLAG_NAMES}


def classify(t) -> ClassificationRecord:
    """Classify a table.

    Class memberships (connected, Latin, rack, quandle, spindle, unital) are
    memberships of *shelf* classes, so they are all False for a table that is
    not right-distributive. Associativity and the polynomial are reported for
    any table.
    """
    t = as_table(t)
    n = t.order
    shelf = validate_shelf(t)
    rights = translations(t).rights
    latin = shelf and all(_is_perm(r) for r in t.rows)
    rack = shelf and all(_is_perm(c) for c in rights)
    spindle = shelf and all(t.op(x, x) == x for x in range(n))
    e = identity_element(t) if shelf else None
    return ClassificationRecord(
        is_shelf=shelf,
        is_connected=shelf and is_connected(t),
        is_latin=latin,
        is_rack=rack,
        is_quandle=rack and spindle,
        is_spindle=spindle,
        is_unital=e is not None,
        is_associative=is_associative(t),
        polynomial=shelf_polynomial(t),
        identity_element=e,
    )


def linear_shelf(n: int, a: int, b: int) -> ShelfTable:
    """``x*y = a*x + b*y (mod n)``; requires ``b*(a+b-1) == 0 (mod n)``."""
    if n < 1:
        raise PreconditionError(f"order must be positive, got {n}")
    a %= n
    b %= n
    if (b * (a + b - 1)) % n:
        raise PreconditionError(
            f"b*(a+b-1) = {b * (a + b - 1)} is not 0 mod {n}; x*y = {a}x + {b}y need not be a shelf"
        )
    return ShelfTable([[(a * x + b * y) % n for y in range(n)] for x in range(n)])


def _compose(p, q):
    """``(p∘q)(i) = p(q(i))``."""
    return tuple(p[i] for i in q)


def _inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def conjugation_shelf(elements: Sequence[Sequence[int]]) -> ShelfTable:
    """Conjugation ``x*y = y x y^-1`` on an explicitly listed permutation group.

    Cell ``(i, j)`` is the index of ``g_j ∘ g_i ∘ g_j^-1``.
    """
    elems = [tuple(p) for p in elements]
    if not elems:
        raise InputError("group element list is empty")
    deg = len(elems[0])
    index = {}
    for i, p in enumerate(elems):
        if len(p) != deg or sorted(p) != list(range(deg)):
            raise InputError(f"element {i} is not a permutation of degree {deg}: {p}")
        if p in index:
            raise InputError(f"element {i} is listed twice")
        index[p] = i
    for p in elems:
        if _inverse(p) not in index:
            raise InputError(f"element list is not closed under inverse: {p}")
        for q in elems:
            if _compose(p, q) not in index:
                raise InputError(f"element list is not closed under composition: {p}∘{q}")
    rows = []
    for x in elems:
        rows.append([index[_compose(_compose(y, x), _inverse(y))] for y in elems])
    return ShelfTable(rows)


def _laver_rows(N: int) -> list[list[int]]:
    # 1-based values; p*1 = p+1 (mod N) and p*(q+1) = (p*q)*(p*1)
    memo: dict[tuple[int, int], int] = {}
    for p in range(N, 0, -1):
        for q in range(1, N + 1):
            stack = [(p, q)]
            while stack:
                a, b = stack[-1]
                if (a, b) in memo:
                    stack.pop()
                    continue
                if b == 1:
                    memo[(a, b)] = a % N + 1
                    stack.pop()
                    continue
                prev = memo.get((a, b - 1))
                if prev is None:
                    stack.append((a, b - 1))
                    continue
                nxt = (prev, a % N + 1)
                if nxt in memo:
                    memo[(a, b)] = memo[nxt]
                    stack.pop()
                elif nxt in stack:
                    raise InvariantViolation(f"Laver recurrence is circular at N={N}")
                else:
                    stack.append(nxt)
    return [[memo[(p, q)] for q in range(1, N + 1)] for p in range(1, N + 1)]


def laver_table(N: int) -> tuple[ShelfTable, bool]:
    """Laver-type table on ``{1..N}`` stored 0-based and transposed.

    The recurrence builds a left-distributive candidate; its transpose is the
    right-distributive orientation used everywhere else here. The flag is the
    right-distributivity of the returned table, which holds exactly when N is
    a power of two.
    """
    if N < 1:
        raise PreconditionError(f"N must be positive, got {N}")
    rows = _laver_rows(N)
    t = ShelfTable([[rows[y][x] - 1 for y in range(N)] for x in range(N)])
    return t, validate_shelf(t)
