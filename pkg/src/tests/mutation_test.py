"""Test mutant closures, conditions (i)/(ii) and the assembled system."""

import pytest

from src.core.ring.monomial import Monomial
from src.core.ring.parser import parse_trinomial
from src.engine.mutation.classifier import Verdict, classify_monomial
from src.engine.mutation.conditions import (
    certify_condition_ii,
    check_condition_i,
    check_condition_ii,
    condition_ii_multiplier,
    verify_certificate,
)
from src.engine.mutation.mutants import (
    MutantDescriptor,
    generate_mutant_sets,
    is_absorbed,
)
from src.engine.mutation.system import assemble_system, select_C1_and_split

CONIC = "x0^2 + x0*x1 + x1^2"
# [1] = x0^2, [2] = x0*x1, [3] = x2^2 with x2 extra.
WALKER = "x0^2 + x0*x1 + x2^2"


@pytest.mark.parametrize(
    ("exponents", "expected"),
    [((2, 1), True), ((1, 1), False), ((0, 0), False), ((3, 0), True)],
    ids=["divisible", "not-divisible", "constant", "pure-power"],
)
def test_condition_i(exponents: tuple[int, int], expected: bool) -> None:
    """[1] = x0^2 divides A or not."""
    f = parse_trinomial(CONIC, 2)
    assert check_condition_i(Monomial(exponents), f) is expected


def test_condition_ii_needs_extra_variables() -> None:
    """Without extra variables in [3] the walk is never consulted."""
    # Arrange
    f = parse_trinomial(CONIC, 2)

    # Act & Assert
    for a in range(4):
        for b in range(4):
            assert check_condition_ii(Monomial((a, b)), f, 4) is None


def test_condition_ii_needs_second_term() -> None:
    """[2] ∤ A leaves condition (ii) absent."""
    f = parse_trinomial(WALKER, 2)
    assert check_condition_ii(Monomial((1, 0, 3)), f, 4) is None


def test_condition_ii_walk_and_certificate() -> None:
    """x0*x1^3 walks to x0^4 in three steps and the certificate verifies."""
    # Arrange
    f = parse_trinomial(WALKER, 2)
    A = Monomial((1, 3, 0))

    # Act
    m_value = check_condition_ii(A, f, 4)
    multiplier = condition_ii_multiplier(A, f, 3)

    # Assert
    assert m_value == 3
    assert set(multiplier) == {
        Monomial((0, 2, 0)),
        Monomial((1, 1, 0)),
        Monomial((2, 0, 0)),
    }
    assert verify_certificate(A, f, 4, multiplier)
    assert certify_condition_ii(A, f, 4, 3)
    assert classify_monomial(A, f, 4).verdict is Verdict.IN_VIA_II


def test_certificate_rejects_wrong_multiplier() -> None:
    """A multiplier whose product misses A does not certify."""
    f = parse_trinomial(WALKER, 2)
    assert not verify_certificate(Monomial((1, 3, 0)), f, 4, {Monomial((0, 1, 0)): 1})


def test_mutant_closure_of_conic_pivot() -> None:
    """x0x1 at q = 2 has one mutant, one multiplier and one row."""
    # Arrange
    f = parse_trinomial(CONIC, 2)
    A = Monomial((1, 1))

    # Act
    sets = generate_mutant_sets(A, f, 2, depth=3)

    # Assert
    assert [m.value for m in sets.B_set] == [A.to_laurent()]
    assert [m.exponents for m in sets.A_set] == [(0, -1, 0)]
    assert [m.value for m in sets.L_set] == [A.to_laurent()]
    assert len(sets.E_set) == 3
    assert sets.saturated


def test_mutant_closure_rejects_zero_depth() -> None:
    """Depth counts levels of B and starts at 1."""
    f = parse_trinomial(CONIC, 2)
    with pytest.raises(ValueError):
        generate_mutant_sets(Monomial((1, 1)), f, 2, depth=0)


def test_mutants_are_deduplicated_and_not_absorbed() -> None:
    """Every kept mutant is distinct, inside the box and not ⊳ A."""
    # Arrange
    f = parse_trinomial(WALKER, 2)
    A = Monomial((1, 2, 1))

    # Act
    sets = generate_mutant_sets(A, f, 4, depth=5)

    # Assert
    values = [m.value for m in sets.B_set]
    assert len(values) == len(set(values))
    assert all(not is_absorbed(value, A) for value in values)
    assert all(all(0 <= e < 4 for e in value.exponents) for value in values)
    assert all(m.base == A for m in sets.A_set + sets.E_set)


def test_saturation_is_monotone_in_depth() -> None:
    """Once saturated, a deeper closure produces the same rows."""
    # Arrange
    f = parse_trinomial(CONIC, 2)
    A = Monomial((1, 2))

    # Act
    shallow = generate_mutant_sets(A, f, 4, depth=6)
    deep = generate_mutant_sets(A, f, 4, depth=9)

    # Assert
    if shallow.saturated:
        assert {m.value for m in shallow.L_set} == {m.value for m in deep.L_set}


def test_descriptor_order_and_label() -> None:
    """Fewer rewrites first, then (e3, e2, e1); labels show the fraction."""
    # Arrange
    f = parse_trinomial(CONIC, 2)
    A = Monomial((1, 1))
    plain = MutantDescriptor.of(A, f)
    rewritten = MutantDescriptor.of(A, f, 1, -1, 0)

    # Assert
    assert plain.order_key() < rewritten.order_key()
    assert rewritten.label() == "A*[1]/[2]"
    assert rewritten.value.exponents == (2, 0)


def test_assembled_system_of_conic_pivot() -> None:
    """The 1x1 system f·1 = x0x1 is solvable and its only row goes to S."""
    # Arrange
    f = parse_trinomial(CONIC, 2)
    A = Monomial((1, 1))
    sets = generate_mutant_sets(A, f, 2, depth=2)

    # Act
    system = assemble_system(A, f, sets)
    r_set, s_set = select_C1_and_split(system)

    # Assert
    assert system.matrix.shape == (1, 1)
    assert system.a_row == 0
    assert system.is_solvable()
    assert r_set == []
    assert [row.value for row in s_set] == [A.to_laurent()]


def test_assemble_rejects_foreign_sets() -> None:
    """Sets built for another base monomial are refused."""
    f = parse_trinomial(CONIC, 2)
    sets = generate_mutant_sets(Monomial((1, 1)), f, 2, depth=2)
    with pytest.raises(ValueError):
        assemble_system(Monomial((0, 1)), f, sets)


def test_split_groups_rows_by_first_column() -> None:
    """Rows sharing a smallest column: all but the ≾-least land in R."""
    # Arrange
    f = parse_trinomial(WALKER, 2)
    A = Monomial((1, 2, 1))
    system = assemble_system(A, f, generate_mutant_sets(A, f, 4, depth=4))

    # Act
    r_set, s_set = select_C1_and_split(system)

    # Assert
    nonempty = {row for row, _, _ in system.matrix.entries()}
    assert len(r_set) + len(s_set) == len(nonempty)
    assert not {m.value for m in r_set} & {m.value for m in s_set}
