"""Prime field module.

Arithmetic helpers for F_p: the field wrapper itself, binomial
coefficients reduced mod p through Lucas' theorem, and signed units.
"""

import math
from dataclasses import dataclass

from src.core.errors import InvalidFieldError


def is_prime(value: int) -> bool:
    """Trial-division primality test."""
    if value < 2:
        return False
    if value < 4:
        return True
    if value % 2 == 0:
        return False
    divisor = 3
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p.

    Attributes:
        p: The characteristic. Checked for primality at construction.
    """

    p: int

    def __post_init__(self) -> None:
        """Reject non-prime characteristics."""
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidFieldError(f"characteristic {self.p!r} is not a prime")

    def reduce(self, value: int) -> int:
        """Reduce an integer into the range [0, p)."""
        return value % self.p

    def inverse(self, value: int) -> int:
        """Multiplicative inverse of a nonzero element."""
        return pow(value % self.p, -1, self.p)


def sign_mod_p(exponent: int, p: int) -> int:
    """Return (-1)^exponent reduced into [0, p)."""
    return 1 if exponent % 2 == 0 else (p - 1) % p


def binom_mod_p(n: int, k: int, p: int) -> int:
    """Binomial coefficient C(n, k) mod p via Lucas' theorem.

    The value is the product of the digit-wise binomials of n and k
    written in base p. Out-of-range arguments (k < 0, k > n or n < 0)
    give 0.

    Args:
        n: Upper argument.
        k: Lower argument.
        p: A prime.

    Returns:
        C(n, k) mod p in [0, p).
    """
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n, n_digit = divmod(n, p)
        k, k_digit = divmod(k, p)
        if k_digit > n_digit:
            return 0
        result = result * math.comb(n_digit, k_digit) % p
    return result
