"""Entry formulas of the reduced system and the M_A ratios.

Case I covers the F31 rows, Case II the F21 rows and Case III the single
row A[−2]/[1]. All values are binomials reduced mod p through Lucas'
theorem, with signs (−1)^k mapped into F_p.
"""

import logging
from dataclasses import dataclass

from src.core.ring.field import binom_mod_p, sign_mod_p
from src.core.ring.monomial import Monomial
from src.core.ring.trinomial import Trinomial
from src.engine.mutation.conditions import ratio_walk_length
from src.engine.reduced.indices import ColIndex, ColShape, RowIndex

logger = logging.getLogger(__name__)

_DIVISOR = {31: 2, 21: 1}


@dataclass(frozen=True)
class EntryContext:
    """Parameters shared by every entry of one reduced system.

    Attributes:
        M31: M_A(−3/1), 0 when the walk never converges.
        M21: M_A(−2/1), 0 when the walk never converges.
        p: Field characteristic.
    """

    M31: int
    M21: int
    p: int

    @classmethod
    def from_walks(cls, m31: int | None, m21: int | None, p: int) -> "EntryContext":
        """Build the context from walk lengths, None meaning no walk.

        A missing walk leaves no low rows and no mixed cutoff, so it is
        stored as 0.
        """
        if m31 is None or m21 is None:
            logger.debug("ratio walk missing: M31=%s M21=%s", m31, m21)
        return cls(m31 or 0, m21 or 0, p)

    @classmethod
    def for_monomial(cls, A: Monomial, f: Trinomial, q: int) -> "EntryContext":
        """Context of the reduced system of A at box side q."""
        return cls.from_walks(
            compute_M_ratio(A, f, 31, q), compute_M_ratio(A, f, 21, q), f.p
        )


def compute_M_ratio(A: Monomial, f: Trinomial, which: int, q: int) -> int | None:
    """M_A(−3/1) for which=31 or M_A(−2/1) for which=21.

    The least M >= 1 such that A*([1]/[3])^(M-1)/[3] (resp. with [2]) has
    no negative powers and A*([1]/[3])^M is convergent.

    Returns:
        M, or None when no such M exists within q * (max exponent of f)
        steps.

    Raises:
        ValueError: If which is not 31 or 21.
    """
    if which not in _DIVISOR:
        raise ValueError(f"which must be 31 or 21, got {which}")
    return ratio_walk_length(A, f, _DIVISOR[which], q)


def _own_family(m: int, other: int, a: int, b: int, p: int) -> int:
    if 0 <= a <= m and b >= other:
        return binom_mod_p(b - other, m - a, p)
    return 0


def entry_of(row: RowIndex, col: ColIndex, ctx: EntryContext) -> int:
    """Entry of 𝔅_{A,f} at (row, col), in [0, p).

    Case I, row (m, x):
        - Col_31 (a, b): C(b−x, m−a) when 0 <= a <= m and b >= x, else 0.
        - Col_mixed (a, b): 0 when m >= M31; otherwise
          (−1)^(a+b−m) C(a+b−m−1, a) when b != 0, else 0.
        - Col_21: 0.

    Case II, row (m, y): the same with the roles of [2] and [3] swapped,
    so the mixed entry is (−1)^(a+b−m) C(a+b−m−1, b) when a != 0 and
    m < M21, and every Col_31 entry is 0.

    Case III: (−1)^(a+b+1) C(a+b, a) on Col_mixed, 0 elsewhere.
    """
    p = ctx.p
    a, b = col.a, col.b
    case = row.family.case
    if case == "III":
        if col.shape is not ColShape.COL_MIXED:
            return 0
        return sign_mod_p(a + b + 1, p) * binom_mod_p(a + b, a, p) % p

    other = row.x_or_y or 0
    if case == "I":
        own, cutoff, mixed_nonzero, mixed_lower = ColShape.COL_31, ctx.M31, b, a
    else:
        own, cutoff, mixed_nonzero, mixed_lower = ColShape.COL_21, ctx.M21, a, b
    if col.shape is own:
        return _own_family(row.m, other, a, b, p)
    if col.shape is ColShape.COL_MIXED:
        if row.m >= cutoff or mixed_nonzero == 0:
            return 0
        upper = a + b - row.m - 1
        return sign_mod_p(a + b - row.m, p) * binom_mod_p(upper, mixed_lower, p) % p
    return 0
