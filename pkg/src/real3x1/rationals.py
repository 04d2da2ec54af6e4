"""Exact rational helpers: parsing, floors, parity, 2-adic splits.

Everything here is integer or Fraction arithmetic; no floats are created or
accepted anywhere.  Fraction already guarantees the invariants the rest of the
package leans on: canonical reduced form, positive denominator, immutability,
arbitrary precision.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import DomainError

# A rational in canonical reduced form with positive denominator.
ExactRational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p' (optional sign, arbitrary-size digits) exactly.

    Decimal notation is rejected on purpose: a decimal literal invites float
    thinking and every interface in this package is exact.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a p/q rational: {text!r}")
    if "/" in s:
        num_text, den_text = s.split("/")
        if int(den_text) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num_text), int(den_text))
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    """Canonical text form: 'p/q' reduced, '/q' omitted when q = 1."""
    return str(Fraction(x))


def floor_of(x: Fraction) -> int:
    """Exact floor; math.floor on Fraction is integer arithmetic."""
    return math.floor(x)


class OddDenomRational:
    """A rational whose reduced denominator is odd.

    These are exactly the rationals with a well-defined parity: the parity of
    the reduced numerator.  Halving an 'even' one or applying (3r+1)/2 to an
    'odd' one stays inside the class; any other move leaves it.
    """

    __slots__ = ("value",)

    def __init__(self, value: Fraction | int):
        v = Fraction(value)
        if v.denominator % 2 == 0:
            raise DomainError(f"even reduced denominator, parity undefined: {v}")
        object.__setattr__(self, "value", v)

    @property
    def parity(self) -> str:
        return "odd" if self.value.numerator % 2 else "even"

    def __repr__(self) -> str:
        return f"OddDenomRational({format_rational(self.value)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, OddDenomRational) and self.value == other.value

    def __hash__(self) -> int:
        return hash((OddDenomRational, self.value))


def parity(x: Fraction | int | OddDenomRational) -> str:
    """'even' or 'odd' via the reduced numerator; odd denominators only."""
    if isinstance(x, OddDenomRational):
        return x.parity
    return OddDenomRational(x).parity


def two_adic_split(n: int) -> tuple[int, int]:
    """Split n >= 1 as 2^e * odd, returning (e, odd)."""
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise ValueError(f"two_adic_split needs an integer >= 1, got {n!r}")
    e = (n & -n).bit_length() - 1
    return e, n >> e


def compare_pow3_pow2(n: int, l: int) -> int:
    """Exact sign of 3^n - 2^l: -1, 0, or +1.

    This is the only comparison the inequality ledgers ever make; n > l*log_3(2)
    is exactly 3^n > 2^l (no nontrivial ties: 3^n = 2^l only at n = l = 0).
    """
    if n < 0 or l < 0:
        raise ValueError(f"negative exponent: n={n}, l={l}")
    a, b = 3**n, 2**l
    return (a > b) - (a < b)
