import itertools

import pytest

from shelves.core import ShelfTable

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def brute_force_shelves(n):
    """Every n x n table that passes a literal triple loop, as a set."""
    out = set()
    for flat in itertools.product(range(n), repeat=n * n):
        rows = [flat[i * n:(i + 1) * n] for i in range(n)]
        if all(rows[rows[x][y]][z] == rows[rows[x][z]][rows[y][z]]
               for x in range(n) for y in range(n) for z in range(n)):
            out.add(ShelfTable(rows))
    return out


@pytest.fixture(scope="session")
def shelves_by_order():
    """All labeled shelves of orders 1 to 3 from the brute-force oracle."""
    return {n: brute_force_shelves(n) for n in (1, 2, 3)}


@pytest.fixture(scope="session")
def connected_classes_upto5():
    from shelves.enumeration import connected_classes

    return {n: connected_classes(n) for n in range(1, 6)}


@pytest.fixture(scope="session")
def latin_classes_upto5():
    from shelves.enumeration import EnumerationOptions, enumerate_parallel

    opts = EnumerationOptions(filters=frozenset({"latin"}), up_to_iso=True)
    return {n: list(enumerate_parallel(n, opts)) for n in range(1, 6)}
