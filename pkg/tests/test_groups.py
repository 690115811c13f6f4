from collections import Counter

import pytest

from shelves.core import ShelfTable, is_latin, validate_shelf
from shelves.data import appendix_tables
from shelves.errors import BudgetExceeded, InputError, PreconditionError
from shelves.groups import (
    Permutation,
    conjugation_checks,
    cycle_notation,
    derived_shelf_report,
    group_closure,
    identify_group,
    latin_group_table,
    lmult_shelf,
    named_group,
    row_permutations,
)
from shelves.iso import are_isomorphic
from shelves.reference import LATIN_GROUPS, latin_group_multiset

S33 = ShelfTable([[0, 2, 1], [2, 1, 0], [1, 0, 2]])


def _inverted(cycle_str):
    """Reverse every cycle of a printed cycle string, renormalized."""
    if cycle_str == "(id)":
        return cycle_str
    out = []
    for part in cycle_str.strip("()").split(")("):
        digits = [int(ch) for ch in part]
        rev = [digits[0]] + digits[1:][::-1]
        out.append(rev)
    return "".join("(" + "".join(map(str, c)) + ")" for c in sorted(out))


class TestPermutation:
    def test_composition_is_as_maps(self):
        p = Permutation([1, 2, 0])
        q = Permutation([1, 0, 2])
        assert (p * q) == Permutation([p[q[i]] for i in range(3)])

    def test_inverse(self):
        p = Permutation([2, 0, 3, 1])
        assert (p * p.inverse()).is_identity()

    def test_rejects_non_bijection(self):
        with pytest.raises(InputError):
            Permutation([0, 0, 1])

    def test_order(self):
        assert Permutation.from_cycles(5, [(0, 1), (2, 3, 4)]).order() == 6


class TestCycleNotation:
    def test_examples(self):
        assert cycle_notation([0, 1, 2]) == "(id)"
        assert cycle_notation([1, 0, 2]) == "(01)"
        assert cycle_notation([0, 2, 1, 4, 3]) == "(12)(34)"

    def test_cycles_start_at_smallest(self):
        assert cycle_notation([2, 0, 1]) == "(021)"


class TestRowPermutations:
    def test_latin_quandle(self):
        assert [cycle_notation(p) for p in row_permutations(S33)] == ["(12)", "(02)", "(01)"]

    def test_identity_rows(self):
        assert all(p.is_identity() for p in row_permutations([[0, 1, 2]] * 3))
        assert all(p.is_identity() for p in row_permutations([[0, 1], [0, 1]]))

    def test_non_latin_names_row(self):
        with pytest.raises(PreconditionError, match="row 1"):
            row_permutations([[0, 1], [0, 0]])


class TestClosure:
    def test_single_involution(self):
        g = group_closure([Permutation([1, 0])])
        assert g.order == 2 and g.abelian

    def test_s3(self):
        g = group_closure(row_permutations(S33))
        assert g.order == 6 and not g.abelian and g.identified_name == "D₃"

    def test_closed_and_contains_identity(self):
        g = group_closure(named_group("A4")[:3])
        elems = set(g.elements)
        assert Permutation.identity(4) in elems
        assert all(a * b in elems for a in elems for b in elems)
        assert all(a.inverse() in elems for a in elems)
        assert sum(g.element_order_multiset.values()) == g.order

    def test_cap(self):
        with pytest.raises(BudgetExceeded):
            group_closure([Permutation([1, 2, 3, 4, 0]), Permutation([1, 0, 2, 3, 4])], max_size=50)

    def test_mixed_degrees(self):
        with pytest.raises(InputError):
            group_closure([Permutation([1, 0]), Permutation([1, 0, 2])])

    def test_d5_from_latin_quandle(self):
        t = appendix_tables(5)[161]
        g = group_closure(row_permutations(t))
        assert g.order == 10 and not g.abelian and g.identified_name == "D₅"


class TestIdentify:
    @pytest.mark.parametrize("name,label", [
        ("trivial", "trivial"), ("Z2", "ℤ₂"), ("Z3", "ℤ₃"), ("Z4", "ℤ₄"), ("V4", "ℤ₂×ℤ₂"),
        ("Z6", "ℤ₂×ℤ₃"), ("S3", "D₃"), ("D5", "D₅"), ("A4", "A₄"),
    ])
    def test_catalog(self, name, label):
        elems = named_group(name)
        assert group_closure(elems, degree=len(elems[0])).identified_name == label

    def test_ga15(self):
        t = appendix_tables(5)[162]
        g = group_closure(row_permutations(t))
        assert g.order == 20 and g.identified_name == "GA(1,5)"

    def test_descriptor_fallback(self):
        g = group_closure([Permutation.from_cycles(7, [(0, 1, 2, 3, 4, 5, 6)])])
        assert identify_group(g).startswith("order-7, abelian")

    def test_stable_under_generator_inversion(self, latin_classes_upto5):
        for n, ts in latin_classes_upto5.items():
            for t in ts:
                rows = row_permutations(t)
                assert group_closure(rows).identified_name == \
                    group_closure([p.inverse() for p in rows]).identified_name


class TestLmultShelf:
    def test_identity_shelf_collapses(self):
        lm = lmult_shelf([[0, 1, 2]] * 3)
        assert lm.table == ShelfTable([[0]]) and lm.phi_surjective

    def test_injective_phi_gives_isomorphic_shelf(self):
        lm = lmult_shelf(S33)
        assert lm.table.order == 3 and are_isomorphic(lm.table, S33)

    def test_requires_latin(self):
        with pytest.raises(PreconditionError):
            lmult_shelf([[0, 0], [1, 1]])

    def test_pointwise_identity(self, latin_classes_upto5):
        for ts in latin_classes_upto5.values():
            for t in ts:
                n = t.order
                for x in range(n):
                    for y in range(n):
                        xy = t.op(x, y)
                        assert all(t.op(xy, s) == t.op(t.op(x, s), t.op(y, s)) for s in range(n))


class TestConjugation:
    def test_transpositions_give_axiom2(self):
        rows = row_permutations(S33)
        rep = conjugation_checks(group_closure(rows), rows)
        assert rep.axiom2 and rep.generators_transpositions_or_identity
        # b = (012) is not an involution, so (a◇b)◇b = b^-2 a b^2 differs from a
        assert not rep.axiom2_whole_group

    def test_trivial_group(self):
        g = group_closure([], degree=3)
        rep = conjugation_checks(g, [])
        assert rep.self_distributive and rep.idempotent and rep.axiom2

    def test_cyclic_group(self):
        g = group_closure([Permutation.from_cycles(4, [(0, 1, 2, 3)])])
        rep = conjugation_checks(g)
        assert rep.idempotent and rep.axiom2_whole_group

    def test_a4_fails_axiom2(self):
        t = appendix_tables(4)[1]
        rows = row_permutations(t)
        rep = conjugation_checks(group_closure(rows), rows)
        assert rep.self_distributive and rep.idempotent
        assert not rep.generators_square_trivial

    def test_generator_not_in_group(self):
        g = group_closure([Permutation([1, 0, 2])])
        with pytest.raises(InputError):
            conjugation_checks(g, [Permutation([0, 2, 1])])

    def test_square_trivial_generators_imply_axiom2(self, latin_classes_upto5):
        for ts in latin_classes_upto5.values():
            for t in ts:
                rows = row_permutations(t)
                rep = conjugation_checks(group_closure(rows), rows)
                if rep.generators_square_trivial:
                    assert rep.axiom2


class TestDerivedReport:
    def test_every_latin_shelf_upto5(self, latin_classes_upto5):
        count = 0
        for ts in latin_classes_upto5.values():
            for t in ts:
                rep = derived_shelf_report(t)
                assert validate_shelf(rep.lmult_shelf)
                assert rep.phi_surjective and rep.conj_self_distributive and rep.conj_idempotent
                count += 1
        assert count == 1 + 1 + 3 + 6 + 20


class TestLatinGroupTable:
    def test_order3(self):
        rows = [r for r in latin_group_table(3) if r.order == 3]
        assert [r.group for r in rows] == ["trivial", "ℤ₂", "D₃"]
        assert [r.appendix_index for r in rows] == [1, 2, 3]

    def test_multisets_match_reference(self):
        rows = latin_group_table(5)
        for n in range(1, 6):
            assert Counter(r.group for r in rows if r.order == n) == latin_group_multiset(n)

    def test_rows_match_reference_entries(self):
        by_key = {(e.order, e.index): e for e in LATIN_GROUPS}
        for r in latin_group_table(5):
            e = by_key[(r.order, r.appendix_index)]
            assert r.group == e.group
            # printed cycles agree up to reversing every cycle of a row
            for ours, printed in zip(r.cycles, e.cycles):
                assert ours == printed or ours == _inverted(printed)

    def test_rows_are_latin(self):
        assert all(is_latin(r.table) for r in latin_group_table(4))

    def test_bound(self):
        with pytest.raises(InputError):
            latin_group_table(6)
