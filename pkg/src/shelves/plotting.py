"""Figures for the ``report`` command, rendered off-screen to files."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .enumeration import CountRow  # noqa: E402
from .reference import CONNECTED_QUANDLES, CONNECTED_RACKS, CONNECTED_SHELVES, UNITAL_SHELVES  # noqa: E402


def plot_counts(rows: Sequence[CountRow], path: str | Path) -> Path:
    """Counted classes per order against the published values, log scale.

    Zero counts are left off the log axis.
    """
    path = Path(path)
    orders = [r.order for r in rows]
    series = [
        ("connected shelves", [r.connected for r in rows], CONNECTED_SHELVES, "o"),
        ("connected racks", [r.connected_racks for r in rows], CONNECTED_RACKS, "s"),
        ("connected quandles", [r.connected_quandles for r in rows], CONNECTED_QUANDLES, "^"),
        ("unital shelves", [r.unital for r in rows], UNITAL_SHELVES, "D"),
    ]
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label, counts, published, marker in series:
        pts = [(n, c) for n, c in zip(orders, counts) if c]
        if pts:
            line, = ax.plot(*zip(*pts), marker=marker, label=label)
            ref = [(n, published[n]) for n in orders if published.get(n)]
            if ref:
                ax.plot(*zip(*ref), linestyle="none", marker=marker, markersize=11,
                        markerfacecolor="none", color=line.get_color())
    ax.set_yscale("log")
    ax.set_xticks(orders)
    ax.set_xlabel("order n")
    ax.set_ylabel("isomorphism classes")
    ax.set_title("Counted classes (filled) and published values (hollow)")
    ax.legend(fontsize="small")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_polynomial_spectrum(tables_by_order: dict, path: str | Path) -> Path:
    """Share of connected classes whose polynomial is ``n·t·s``, per order."""
    from .core import shelf_polynomial

    path = Path(path)
    orders = sorted(tables_by_order)
    shares = []
    for n in orders:
        ts = tables_by_order[n]
        hits = sum(1 for t in ts if shelf_polynomial(t).terms == {(1, 1): n})
        shares.append(hits / len(ts) if ts else 0.0)
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.bar(orders, shares, color="tab:blue")
    ax.set_xticks(orders)
    ax.set_ylim(0, 1)
    ax.set_xlabel("order n")
    ax.set_ylabel("share with P = n·t·s")
    ax.set_title("Connected classes with the flat polynomial")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
