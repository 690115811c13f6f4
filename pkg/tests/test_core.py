import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shelves.core import (
    ShelfPolynomial,
    ShelfTable,
    classify,
    conjugation_shelf,
    identity_element,
    is_connected,
    is_spindle,
    laver_table,
    linear_shelf,
    shelf_polynomial,
    translations,
    validate_shelf,
)
from shelves.errors import InputError, PreconditionError
from shelves.groups import named_group


def triple_loop(rows):
    n = len(rows)
    return all(rows[rows[x][y]][z] == rows[rows[x][z]][rows[y][z]]
               for x in range(n) for y in range(n) for z in range(n))


@st.composite
def tables(draw, max_order=4):
    n = draw(st.integers(1, max_order))
    flat = draw(st.lists(st.integers(0, n - 1), min_size=n * n, max_size=n * n))
    return ShelfTable([flat[i * n:(i + 1) * n] for i in range(n)])


@st.composite
def shelves(draw):
    """Random shelves drawn from the brute-force lists of orders 1 to 3."""
    n = draw(st.integers(1, 3))
    return draw(st.sampled_from(_SHELVES[n]))


def _all_shelves(n):
    return [ShelfTable([flat[i * n:(i + 1) * n] for i in range(n)])
            for flat in itertools.product(range(n), repeat=n * n)
            if triple_loop([flat[i * n:(i + 1) * n] for i in range(n)])]


_SHELVES = {n: _all_shelves(n) for n in (1, 2, 3)}


class TestShelfTable:
    def test_rejects_out_of_range(self):
        with pytest.raises(InputError):
            ShelfTable([[0, 2], [0, 1]])

    def test_rejects_non_square(self):
        with pytest.raises(InputError):
            ShelfTable([[0, 1], [0]])

    def test_str_is_bracket_line(self):
        assert str(ShelfTable([[0, 1], [0, 1]])) == "[[0,1],[0,1]]"

    def test_cell_convention(self):
        t = ShelfTable([[0, 1, 1], [0, 1, 2], [0, 1, 2]])
        assert t.op(0, 2) == 1
        assert t.column(2) == (1, 2, 2)


class TestValidateShelf:
    def test_examples(self):
        assert validate_shelf([[0, 1], [0, 1]])
        assert not validate_shelf([[0, 1], [1, 0]])
        assert validate_shelf([[0, 0], [1, 1]])

    def test_out_of_range_is_input_error(self):
        with pytest.raises(InputError):
            validate_shelf([[0, 5], [0, 1]])

    def test_exhaustive_order2(self):
        for flat in itertools.product(range(2), repeat=4):
            rows = [flat[:2], flat[2:]]
            assert validate_shelf(rows) == triple_loop(rows)

    @given(tables())
    @settings(max_examples=300, deadline=None)
    def test_agrees_with_triple_loop(self, t):
        assert validate_shelf(t) == triple_loop(t.rows)


class TestTranslations:
    def test_rights_and_lefts(self):
        t = ShelfTable([[0, 2, 1], [2, 1, 0], [1, 0, 2]])
        tm = translations(t)
        for x in range(3):
            for y in range(3):
                assert tm.rights[x][y] == t.op(y, x)
                assert tm.lefts[x][y] == t.op(x, y)


class TestConnected:
    def test_examples(self):
        assert is_connected([[0, 1, 1, 3], [0, 1, 2, 0], [0, 1, 2, 0], [0, 1, 1, 3]])
        assert not is_connected([[0, 0], [1, 1]])
        assert is_connected([[1, 1], [0, 0]])

    @given(shelves())
    @settings(max_examples=200, deadline=None)
    def test_matches_reachability_oracle(self, t):
        n = t.order
        reach = {x: {x} for x in range(n)}
        for _ in range(n):
            for x in range(n):
                reach[x] = reach[x] | {t.op(y, s) for y in reach[x] for s in range(n)}
        assert is_connected(t) == all(len(r) == n for r in reach.values())


class TestClassify:
    def test_non_quandle_rack(self):
        r = classify([[1, 1, 1], [2, 2, 2], [0, 0, 0]])
        assert r.is_rack and not r.is_quandle and not r.is_latin and r.is_connected

    def test_latin_quandle(self):
        r = classify([[0, 2, 1], [2, 1, 0], [1, 0, 2]])
        assert r.is_latin and r.is_quandle

    def test_latin_non_rack(self):
        r = classify([[0, 1, 2], [0, 1, 2], [0, 1, 2]])
        assert r.is_latin and not r.is_rack

    def test_non_shelf_is_reported(self):
        r = classify([[0, 1], [1, 0]])
        assert not r.is_shelf
        assert not any(getattr(r, f) for f in ("is_connected", "is_latin", "is_rack", "is_unital"))

    def test_unital(self):
        t = [[0, 1], [1, 1]]
        assert validate_shelf(t)
        r = classify(t)
        assert r.is_unital and r.identity_element == 0
        assert identity_element([[0, 0], [1, 1]]) is None

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_class_implications(self, n):
        for t in _SHELVES[n]:
            r = classify(t)
            assert r.is_shelf
            if r.is_quandle:
                assert r.is_rack and r.is_spindle
            if r.is_latin:
                assert r.is_connected
            assert r.is_unital == (r.identity_element is not None)


class TestPolynomial:
    def test_worked_examples(self):
        assert shelf_polynomial([[0, 1, 1, 3], [0, 1, 2, 3], [0, 1, 2, 3], [0, 1, 1, 3]]).render() == "4·t·s"
        assert shelf_polynomial([[0, 0, 0], [1, 1, 1], [2, 2, 2]]).render() == "3·t^3·s^3"
        assert shelf_polynomial([[1, 1, 1], [2, 2, 2], [0, 0, 0]]).render() == "3"
        assert shelf_polynomial([[0, 1, 1], [0, 1, 0], [0, 1, 2]]).render() == "3·t·s"

    def test_render_mixed(self):
        p = ShelfPolynomial({(1, 1): 1, (0, 2): 2})
        assert p.render() == "2·s^2 + t·s"

    def test_triples_roundtrip(self):
        p = ShelfPolynomial({(1, 1): 2, (3, 0): 1})
        assert ShelfPolynomial.from_triples(p.as_triples()) == p

    @given(shelves())
    @settings(max_examples=200, deadline=None)
    def test_multiplicities_sum_to_order(self, t):
        p = shelf_polynomial(t)
        assert p.degree_sum == t.order
        assert all(0 <= r <= t.order and 0 <= c <= t.order for r, c in p.terms)

    @given(shelves())
    @settings(max_examples=200, deadline=None)
    def test_spindle_terms_have_positive_exponents(self, t):
        if is_spindle(t):
            assert all(r >= 1 and c >= 1 for r, c in shelf_polynomial(t).terms)


class TestLinearShelf:
    def test_z10(self):
        t = linear_shelf(10, 2, 5)
        assert validate_shelf(t)
        assert t.op(3, 1) == (2 * 3 + 5) % 10

    def test_projection(self):
        assert linear_shelf(3, 1, 0) == ShelfTable([[0, 0, 0], [1, 1, 1], [2, 2, 2]])

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            linear_shelf(5, 1, 1)

    @given(st.integers(1, 12), st.integers(0, 11), st.integers(0, 11))
    @settings(max_examples=300, deadline=None)
    def test_valid_whenever_precondition_holds(self, n, a, b):
        a, b = a % n, b % n
        if b * (a + b - 1) % n == 0:
            assert validate_shelf(linear_shelf(n, a, b))


class TestConjugationShelf:
    def test_trivial_group(self):
        assert conjugation_shelf([[0]]) == ShelfTable([[0]])

    def test_z2_is_projection(self):
        assert conjugation_shelf([[0, 1], [1, 0]]) == ShelfTable([[0, 0], [1, 1]])

    def test_s3_is_quandle(self):
        t = conjugation_shelf(named_group("S3"))
        r = classify(t)
        assert t.order == 6 and r.is_quandle

    @pytest.mark.parametrize("name", ["Z4", "V4", "S3", "D4", "A4", "D5", "S4"])
    def test_always_rack_and_spindle(self, name):
        r = classify(conjugation_shelf(named_group(name)))
        assert r.is_shelf and r.is_rack and r.is_spindle

    def test_not_closed(self):
        with pytest.raises(InputError):
            conjugation_shelf([[0, 1, 2], [1, 2, 0]])


class TestLaver:
    @pytest.mark.parametrize("N", range(1, 17))
    def test_power_of_two_criterion(self, N):
        _, ok = laver_table(N)
        assert ok == (N & (N - 1) == 0)

    def test_order2_brute_force(self):
        t, ok = laver_table(2)
        assert ok and triple_loop(t.rows)

    def test_defining_equations(self):
        # 1-based p*1 = p+1 mod N, stored transposed and 0-based
        for N in (4, 8):
            t, _ = laver_table(N)
            for p in range(N):
                assert t.op(0, p) == (p + 1) % N
