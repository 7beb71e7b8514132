"""Test the ring primitives: field, monomials, trinomials and parsing."""

import itertools
import math

import numpy as np
import pytest

from src.core.errors import (
    DimensionMismatchError,
    InvalidFieldError,
    PolynomialParseError,
)
from src.core.ring.field import PrimeField, binom_mod_p, is_prime, sign_mod_p
from src.core.ring.monomial import LaurentMonomial, Monomial, Ordering, deglex_compare
from src.core.ring.parser import PolynomialParser, parse_trinomial
from src.core.ring.trinomial import classify_variables, laurent_apply

CONIC = "x0^2 + x0*x1 + x1^2"


@pytest.mark.parametrize(
    ("text", "p", "expected"),
    [
        (CONIC, 2, ((2, 0), (1, 1), (0, 2))),
        ("x0 + x1 + x2", 2, ((1, 0, 0), (0, 1, 0), (0, 0, 1))),
        ("x2 + x1 + x0", 5, ((1, 0, 0), (0, 1, 0), (0, 0, 1))),
        ("x1^2 + x0^2 + x0*x1", 3, ((2, 0), (1, 1), (0, 2))),
    ],
    ids=["conic", "linear", "linear-unsorted", "conic-unsorted"],
)
def test_parse_trinomial_orders_terms(
    text: str, p: int, expected: tuple[tuple[int, ...], ...]
) -> None:
    """Terms come out as [1] ⊴ [2] ⊴ [3] whatever the input order."""
    # Act
    f = parse_trinomial(text, p)

    # Assert
    assert f.exponent_rows() == expected
    assert f.p == p


@pytest.mark.parametrize(
    ("text", "p", "error"),
    [
        ("x0^2 + 3*x0*x1 + x1^2", 3, PolynomialParseError),
        ("x0 + x1", 2, PolynomialParseError),
        ("x0 + x1 + x2 + x0*x1", 2, PolynomialParseError),
        ("x0 + x0 + x1", 2, PolynomialParseError),
        ("x0 + x1 + 1", 2, PolynomialParseError),
        ("x0 + y1 + x2", 2, PolynomialParseError),
        ("x0 + x1 +", 2, PolynomialParseError),
        ("x0 + x1 + x2", 4, InvalidFieldError),
    ],
    ids=[
        "zero-coefficient",
        "two-terms",
        "four-terms",
        "merged-terms",
        "constant-term",
        "bad-variable",
        "dangling-plus",
        "non-prime",
    ],
)
def test_parse_trinomial_rejects(text: str, p: int, error: type[Exception]) -> None:
    """Malformed input raises the documented error."""
    with pytest.raises(error):
        parse_trinomial(text, p)


def test_parse_signed_coefficients() -> None:
    """Negative coefficients are reduced into [1, p)."""
    # Act
    f = parse_trinomial("x0 - x1 + 4*x2", 3)

    # Assert
    assert f.coeffs == (1, 2, 1)


def test_parser_returns_raw_terms() -> None:
    """The parser itself keeps coefficients and exponent maps unreduced."""
    # Act
    terms = PolynomialParser().parse("2*x0^3*x2 - x1")

    # Assert
    assert terms == [(2, {0: 3, 2: 1}), (-1, {1: 1})]


def test_explicit_variable_count() -> None:
    """m can exceed the largest index but not fall below it."""
    # Act
    f = parse_trinomial("x0 + x1 + x0*x1", 2, m=3)

    # Assert
    assert f.m == 3
    with pytest.raises(PolynomialParseError):
        parse_trinomial("x0 + x1 + x2", 2, m=2)


@pytest.mark.parametrize(
    ("a", "b", "expected"),
    [
        ((2, 0), (1, 1), Ordering.LESS),
        ((3, 0), (0, 2), Ordering.GREATER),
        ((1, 1), (1, 1), Ordering.EQUAL),
        ((1, 0, 0), (0, 0, 1), Ordering.LESS),
    ],
    ids=["tie-on-larger-variable", "degree-dominates", "identity", "later-larger"],
)
def test_deglex_compare(
    a: tuple[int, ...], b: tuple[int, ...], expected: Ordering
) -> None:
    """Degree decides first, then the exponent of the largest variable."""
    assert deglex_compare(Monomial(a), Monomial(b)) is expected


def test_deglex_compare_dimension_mismatch() -> None:
    """Monomials from different rings cannot be compared."""
    with pytest.raises(DimensionMismatchError):
        deglex_compare(Monomial((1, 0)), Monomial((1, 0, 0)))


@pytest.mark.parametrize(
    ("text", "extra", "negative", "zero", "positive"),
    [
        (CONIC, (), (0,), (), (1,)),
        ("x0 + x1 + x2", (2,), (0,), (), (1,)),
        ("x0^2 + x0*x1 + x0*x2", (2,), (0,), (), (1,)),
    ],
    ids=["conic", "linear", "shared-x0"],
)
def test_classify_variables(
    text: str,
    extra: tuple[int, ...],
    negative: tuple[int, ...],
    zero: tuple[int, ...],
    positive: tuple[int, ...],
) -> None:
    """Variables split by membership in [3] only and by deg[2] − deg[1]."""
    # Act
    classes = classify_variables(parse_trinomial(text, 2))

    # Assert
    assert classes.extra == extra
    assert classes.negative == negative
    assert classes.zero == zero
    assert classes.positive == positive
    assert classes.has_extra is bool(extra)


@pytest.mark.parametrize(
    ("n", "k", "p", "expected"),
    [
        (5, 2, 2, 0),
        (4, 0, 3, 1),
        (4, 2, 2, 0),
        (5, 1, 2, 1),
        (10, 3, 7, 120 % 7),
        (3, 5, 2, 0),
        (3, -1, 2, 0),
    ],
    ids=["even", "k-zero", "lucas-zero", "odd", "p7", "k-above-n", "negative-k"],
)
def test_binom_mod_p(n: int, k: int, p: int, expected: int) -> None:
    """Lucas products agree with the integer binomial reduced mod p."""
    assert binom_mod_p(n, k, p) == expected


def test_binom_mod_p_matches_math_comb() -> None:
    """Exhaustive check for n <= 64 and p = 2, 3, 5, 7."""
    for p in (2, 3, 5, 7):
        for n in range(65):
            for k in range(n + 1):
                assert binom_mod_p(n, k, p) == math.comb(n, k) % p


def test_prime_field() -> None:
    """Primality is enforced and signs live in [0, p)."""
    # Assert
    assert [v for v in range(20) if is_prime(v)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert PrimeField(5).inverse(2) == 3
    assert sign_mod_p(3, 5) == 4
    assert sign_mod_p(3, 2) == 1
    with pytest.raises(InvalidFieldError):
        PrimeField(9)


@pytest.mark.parametrize(
    ("base", "ijk", "expected"),
    [
        ((1, 1), (0, 0, 0), (1, 1)),
        ((1, 1), (1, -1, 0), (2, 0)),
        ((0, 0), (0, 0, -1), (0, -2)),
    ],
    ids=["identity", "rewrite-2-to-1", "divide-by-3"],
)
def test_laurent_apply(
    base: tuple[int, int], ijk: tuple[int, int, int], expected: tuple[int, int]
) -> None:
    """Exponents add along the term exponent vectors."""
    # Arrange
    f = parse_trinomial(CONIC, 2)

    # Act
    value = laurent_apply(Monomial(base), f, *ijk)

    # Assert
    assert value == LaurentMonomial(expected)


def test_laurent_apply_dimension_mismatch() -> None:
    """The base must live in the ring of f."""
    f = parse_trinomial(CONIC, 2)
    with pytest.raises(DimensionMismatchError):
        laurent_apply(Monomial((1, 1, 1)), f, 1, 0, 0)


def test_relabel_resorts_terms() -> None:
    """Swapping x0 and x1 keeps the conic and re-sorts its terms."""
    # Arrange
    f = parse_trinomial(CONIC, 2)

    # Act
    swapped = f.relabel([1, 0])

    # Assert
    assert swapped == f
    assert str(f) == "x0^2 + x0*x1 + x1^2"


def test_deglex_is_a_total_order() -> None:
    """Random exponent triples compare antisymmetrically and transitively."""
    # Arrange
    rng = np.random.default_rng(3)
    mons = [Monomial(tuple(int(e) for e in row)) for row in rng.integers(0, 4, (40, 3))]
    flipped = {
        Ordering.LESS: Ordering.GREATER,
        Ordering.GREATER: Ordering.LESS,
        Ordering.EQUAL: Ordering.EQUAL,
    }

    for a, b in itertools.product(mons, repeat=2):
        # Act
        forward = deglex_compare(a, b)

        # Assert
        assert deglex_compare(b, a) is flipped[forward]
        assert (forward is Ordering.EQUAL) == (a == b)
    for a, b, c in itertools.product(mons[:15], repeat=3):
        if (
            deglex_compare(a, b) is Ordering.LESS
            and deglex_compare(b, c) is Ordering.LESS
        ):
            assert deglex_compare(a, c) is Ordering.LESS


@pytest.mark.parametrize(
    "ijk",
    [(1, 0, 0), (2, -1, 0), (0, 3, -2), (-1, -1, -1)],
    ids=["first", "rewrite", "mixed", "all-negative"],
)
def test_laurent_apply_inverse_round_trip(ijk: tuple[int, int, int]) -> None:
    """Applying (i, j, k) then (-i, -j, -k) returns the base."""
    # Arrange
    f = parse_trinomial("x0^2 + x0*x1 + x2^2", 3)
    base = Monomial((1, 2, 0))
    inverse = tuple(-e for e in ijk)

    # Act
    there = laurent_apply(base, f, *ijk)
    back = laurent_apply(there, f, *inverse)

    # Assert
    assert back == base.to_laurent()


@pytest.mark.parametrize(
    "text",
    [CONIC, "x0 + x1 + x2", "x0^2 + x0*x1 + x0*x2", "2*x0^3 + x1*x2 + x0*x1^2"],
    ids=["conic", "linear", "shared-x0", "mixed-degree"],
)
def test_classify_variables_ignores_term_order(text: str) -> None:
    """Every ordering of the term text gives the same partition."""
    # Arrange
    terms = [term.strip() for term in text.split("+")]
    expected = classify_variables(parse_trinomial(text, 5))

    for order in itertools.permutations(terms):
        # Act
        classes = classify_variables(parse_trinomial(" + ".join(order), 5))

        # Assert
        assert classes == expected


@pytest.mark.parametrize(
    ("text", "m", "back"),
    [
        (CONIC, None, (0, 1)),
        (CONIC, 3, (0, 1, 2)),
        ("x0^2 + x0*x1 + x2^2", None, (2, 0, 1)),
        ("x1 + x0*x2 + x2^2", None, (1, 0, 2)),
    ],
    ids=["conic", "conic-unused", "walker", "no-extra"],
)
def test_arranged_keeps_map_back(
    text: str, m: int | None, back: tuple[int, ...]
) -> None:
    """Extra variables come first and the map back restores f."""
    # Arrange
    f = parse_trinomial(text, 2, m)

    # Act
    arranged, mapping = f.arranged()

    # Assert
    assert mapping == back
    assert arranged.relabel(mapping) == f
