"""Shipped corpus of connected shelf classes for orders 2 to 5.

One bracket line per class, in the order of the published lists, so the
1-based line number is the index ``k`` in the label ``S_{n,k}``.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..core import ShelfTable

CORPUS_ORDERS = (2, 3, 4, 5)


def corpus_lines(n: int) -> list[str]:
    """Raw bracket lines for order ``n`` (empty for orders outside the corpus)."""
    if n not in CORPUS_ORDERS:
        return []
    text = resources.files(__name__).joinpath(f"appendix_order{n}.txt").read_text(encoding="ascii")
    return [line for line in text.splitlines() if line.strip()]


@lru_cache(maxsize=None)
def _corpus(n: int) -> tuple[ShelfTable, ...]:
    from ..formats import parse_bracket

    return tuple(parse_bracket(line) for line in corpus_lines(n))


def appendix_tables(n: int) -> list[ShelfTable]:
    """The published connected classes of order ``n`` in list order."""
    return list(_corpus(n))


@lru_cache(maxsize=None)
def _index_map(n: int) -> dict:
    from ..iso import canonical_form

    return {canonical_form(t): k for k, t in enumerate(_corpus(n), start=1)}


def appendix_index_map(n: int) -> dict:
    """Map canonical form to the 1-based list index ``k`` of ``S_{n,k}``.

    Order 1 has a single class which gets index 1.
    """
    if n == 1:
        return {ShelfTable([[0]]): 1}
    return dict(_index_map(n))
