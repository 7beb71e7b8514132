"""Polynomial Parser Module.

Tokenizes and parses the single polynomial text format used across the
toolkit: ``term (+ term)*`` where a term is ``[int*] [x<idx>[^int]]*``
with ``*`` separators. Whitespace is insignificant.
"""

import logging
import re

from src.core.errors import PolynomialParseError
from src.core.ring.monomial import Monomial
from src.core.ring.trinomial import Term, Trinomial

logger = logging.getLogger(__name__)

_TOKEN_SPEC = [
    ("INT", r"\d+"),
    ("VAR", r"x(\d+)"),
    ("CARET", r"\^"),
    ("STAR", r"\*"),
    ("PLUS", r"\+"),
    ("MINUS", r"-"),
    ("SKIP", r"\s+"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{rx})" for name, rx in _TOKEN_SPEC))


class PolynomialParser:
    """Recursive-descent parser for sums of integer-coefficient monomials.

    The parser keeps the token list and a cursor. ``parse`` returns raw
    (coefficient, exponents) pairs so that callers decide the variable
    count.
    """

    def __init__(self) -> None:
        """Initialize an empty parser."""
        self.tokens: list[tuple[str, str, int]] = []
        self.current_token_idx: int = 0

    def parse(self, text: str) -> list[tuple[int, dict[int, int]]]:
        """Parse text into a list of (coefficient, {variable: exponent}).

        Raises:
            PolynomialParseError: On any lexical or syntax error.
        """
        self.tokens = self._tokenize(text)
        self.current_token_idx = 0
        if not self.tokens:
            raise PolynomialParseError("empty polynomial")

        terms = [self._parse_term(sign=self._parse_sign())]
        while self._peek() is not None:
            kind = self._peek()
            if kind not in ("PLUS", "MINUS"):
                raise self._error("expected '+' between terms")
            terms.append(self._parse_term(sign=self._parse_sign()))
        return terms

    def _tokenize(self, text: str) -> list[tuple[str, str, int]]:
        tokens: list[tuple[str, str, int]] = []
        for match in _TOKEN_RE.finditer(text):
            kind = match.lastgroup or "MISMATCH"
            if kind == "SKIP":
                continue
            if kind == "MISMATCH":
                raise PolynomialParseError(
                    f"unexpected character {match.group()!r} "
                    f"at position {match.start()}"
                )
            value = match.group()[1:] if kind == "VAR" else match.group()
            tokens.append((kind, value, match.start()))
        return tokens

    def _peek(self) -> str | None:
        if self.current_token_idx >= len(self.tokens):
            return None
        return self.tokens[self.current_token_idx][0]

    def _advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.current_token_idx]
        self.current_token_idx += 1
        return token

    def _expect(self, kind: str) -> tuple[str, str, int]:
        if self._peek() != kind:
            raise self._error(f"expected {kind.lower()}")
        return self._advance()

    def _error(self, message: str) -> PolynomialParseError:
        if self.current_token_idx < len(self.tokens):
            position = self.tokens[self.current_token_idx][2]
            return PolynomialParseError(f"{message} at position {position}")
        return PolynomialParseError(f"{message} at end of input")

    def _parse_sign(self) -> int:
        sign = 1
        while self._peek() in ("PLUS", "MINUS"):
            if self._advance()[0] == "MINUS":
                sign = -sign
        return sign

    def _parse_term(self, sign: int) -> tuple[int, dict[int, int]]:
        coeff = 1
        exponents: dict[int, int] = {}
        seen_factor = False
        if self._peek() == "INT":
            coeff = int(self._advance()[1])
            seen_factor = True
            if self._peek() == "STAR":
                self._advance()
                if self._peek() != "VAR":
                    raise self._error("expected a variable after '*'")
        while self._peek() == "VAR":
            index = int(self._advance()[1])
            power = 1
            if self._peek() == "CARET":
                self._advance()
                power = int(self._expect("INT")[1])
            exponents[index] = exponents.get(index, 0) + power
            seen_factor = True
            if self._peek() == "STAR":
                self._advance()
                if self._peek() != "VAR":
                    raise self._error("expected a variable after '*'")
        if not seen_factor:
            raise self._error("expected a term")
        return sign * coeff, exponents


def parse_trinomial(text: str, p: int, m: int | None = None) -> Trinomial:
    """Parse polynomial text into a canonical trinomial over F_p.

    Args:
        text: Polynomial text, e.g. ``"x0^2 + x0*x1 + x1^2"``.
        p: Field characteristic.
        m: Ambient variable count. Defaults to one more than the largest
            variable index that occurs.

    Returns:
        The trinomial with terms sorted so that [1] ⊴ [2] ⊴ [3].

    Raises:
        PolynomialParseError: On syntax errors, a term count other than
            three, zero coefficients mod p or repeated monomials.
        InvalidFieldError: If p is not prime.
    """
    raw_terms = PolynomialParser().parse(text)
    largest = max((max(exps, default=-1) for _, exps in raw_terms), default=-1)
    ambient = largest + 1 if m is None else m
    if largest >= ambient:
        raise PolynomialParseError(
            f"variable x{largest} does not exist in a {ambient}-variable ring"
        )
    terms = []
    for coeff, exps in raw_terms:
        vector = tuple(exps.get(index, 0) for index in range(ambient))
        if coeff == 0:
            raise PolynomialParseError(f"term {Monomial(vector)} has coefficient 0")
        terms.append(Term(coeff, Monomial(vector)))
    trinomial = Trinomial.from_terms(terms, p)
    logger.debug("parsed %r as %s over F_%d", text, trinomial, p)
    return trinomial


def parse_monomial(text: str, m: int) -> Monomial:
    """Parse a monomial written as ``x0^a*x1^b`` or ``1``.

    Raises:
        PolynomialParseError: On syntax errors, a coefficient other than
            1, more than one term or a variable outside 0..m-1.
    """
    raw_terms = PolynomialParser().parse(text)
    if len(raw_terms) != 1 or raw_terms[0][0] != 1:
        raise PolynomialParseError(f"{text!r} is not a monomial")
    exps = raw_terms[0][1]
    if any(index >= m for index in exps):
        raise PolynomialParseError(f"{text!r} uses a variable beyond x{m - 1}")
    return Monomial(tuple(exps.get(index, 0) for index in range(m)))
