"""Relabeling, canonical forms and isomorphism classes of operation tables."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from . import _native
from .core import ShelfTable, as_table
from .errors import InputError

__all__ = [
    "Relabeling",
    "relabel",
    "canonical_form",
    "canonical_forms",
    "are_isomorphic",
    "reduce_to_iso_classes",
]


class Relabeling(tuple):
    """A permutation of ``0..n-1`` in one-line form: ``images[i]`` is sigma(i)."""

    def __new__(cls, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise InputError(f"not a bijection on 0..{len(images) - 1}: {images}")
        return super().__new__(cls, images)

    @property
    def order(self) -> int:
        return len(self)

    def inverse(self) -> "Relabeling":
        inv = [0] * len(self)
        for i, v in enumerate(self):
            inv[v] = i
        return Relabeling(inv)


def relabel(t, sigma: Sequence[int]) -> ShelfTable:
    """``T'(i, j) = sigma(T(sigma^-1(i), sigma^-1(j)))``; sigma is then an isomorphism T -> T'."""
    t = as_table(t)
    sigma = sigma if isinstance(sigma, Relabeling) else Relabeling(sigma)
    if sigma.order != t.order:
        raise InputError(f"relabeling of size {sigma.order} does not match table order {t.order}")
    inv = sigma.inverse()
    n = t.order
    rows = t.rows
    return ShelfTable([[sigma[rows[inv[i]][inv[j]]] for j in range(n)] for i in range(n)])


@lru_cache(maxsize=None)
def _perm_arrays(n: int):
    perms = np.array(list(permutations(range(n))), dtype=np.int8).reshape(-1, n)
    invs = np.argsort(perms, axis=1).astype(np.int8)
    return perms, invs


def canonical_form(t) -> ShelfTable:
    """Relabeled copy of ``t`` with the lexicographically least row-major flattening."""
    t = as_table(t)
    n = t.order
    perms, invs = _perm_arrays(n)
    best = np.empty(n * n, dtype=np.int8)
    _native.canonical_min(np.array(t.flat, dtype=np.int8), n, perms, invs, best)
    return ShelfTable.from_flat(best.tolist(), n)


def canonical_forms(ts: Sequence) -> list[ShelfTable]:
    """Batch version of :func:`canonical_form` for tables of one order."""
    ts = [as_table(t) for t in ts]
    if not ts:
        return []
    n = ts[0].order
    if any(t.order != n for t in ts):
        raise InputError("canonical_forms needs tables of a single order")
    perms, invs = _perm_arrays(n)
    arr = np.array([t.flat for t in ts], dtype=np.int8).reshape(len(ts), n * n)
    out = np.empty_like(arr)
    _native.canonical_batch(arr, n, perms, invs, out)
    return [ShelfTable.from_flat(row, n) for row in out.tolist()]


def are_isomorphic(a, b) -> bool:
    a, b = as_table(a), as_table(b)
    if a.order != b.order:
        return False
    return canonical_form(a) == canonical_form(b)


def reduce_to_iso_classes(ts: Sequence) -> list[ShelfTable]:
    """Sorted list of the distinct canonical forms among ``ts``."""
    ts = [as_table(t) for t in ts]
    if not ts:
        return []
    orders = {t.order for t in ts}
    if len(orders) > 1:
        raise InputError(f"tables of mixed orders {sorted(orders)}")
    return sorted(set(canonical_forms(ts)))
