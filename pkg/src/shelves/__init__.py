"""Finite shelves: enumeration, classification and analysis up to isomorphism."""

from .conjectures import CycleWitness, ConjectureReport, check_c1, check_c2, hamiltonian_cycle, sweep, verify_witness
from .core import (
    ClassificationRecord,
    ShelfPolynomial,
    ShelfTable,
    TranslationMaps,
    classify,
    conjugation_shelf,
    identity_element,
    is_associative,
    is_connected,
    is_latin,
    is_quandle,
    is_rack,
    is_spindle,
    laver_table,
    linear_shelf,
    shelf_polynomial,
    translations,
    validate_shelf,
)
from .enumeration import (
    Condition,
    CountRow,
    EnumerationOptions,
    PartialTable,
    conditions,
    count_summary,
    enumerate_parallel,
    enumerate_shelves,
    generate_candidates,
    violates_remaining,
)
from .errors import BudgetExceeded, EnumerationError, InputError, InvariantViolation, PreconditionError, ShelfError
from .formats import emit, parse_bracket, parse_record, to_bracket, to_record
from .groups import (
    PermGroup,
    Permutation,
    conjugation_checks,
    cycle_notation,
    derived_shelf_report,
    group_closure,
    identify_group,
    latin_group_table,
    lmult_shelf,
    row_permutations,
)
from .iso import Relabeling, are_isomorphic, canonical_form, reduce_to_iso_classes, relabel

__version__ = "0.1.0"
