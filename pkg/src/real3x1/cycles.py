"""Exhaustive enumeration of forced-branch cycle candidates.

A length-l bit sequence s forces a branch chain of the rational map g
(bit 0: halve, bit 1: r -> (3r+1)/2).  The chain composes to
x -> (3^n x + offset) / 2^l, which has the single fixed point

    x0(s) = offset / d,      d = 2^l - 3^n,

and that fixed point is the only value whose forced walk closes.  A closed
forced walk is automatically parity aligned with g's own dispatch: one
misaligned step sends the 2-adic valuation negative, both branches then push
it down forever, and the walk could never return to its start.  candidate()
asserts this alignment at every step while rebuilding the cycle in integer
arithmetic over the common denominator |d|.

Whether the same closed walk is realized by the floor-parity maps is a
separate, stricter question: U requires floor(x_i) parity to equal the branch
bit at every step (and x0 >= 1), Uflip requires the opposite parity at every
step (and x0 >= 0).  The sweep records the first index where each of these
fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterator

from .maps import affine_offset
from .errors import StructureError


@dataclass(frozen=True)
class BitSeq:
    """A nonempty 0/1 branch sequence; rank is its value as a binary numeral."""

    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(self.bits))
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be a nonempty 0/1 sequence: {self.bits!r}")

    @property
    def l(self) -> int:
        return len(self.bits)

    @property
    def n(self) -> int:
        return sum(self.bits)

    @property
    def rank(self) -> int:
        r = 0
        for b in self.bits:
            r = (r << 1) | b
        return r

    @classmethod
    def from_rank(cls, l: int, rank: int) -> "BitSeq":
        if l < 1 or not 0 <= rank < (1 << l):
            raise ValueError(f"rank {rank} out of range for length {l}")
        return cls(tuple((rank >> (l - 1 - j)) & 1 for j in range(l)))

    @classmethod
    def from_string(cls, text: str) -> "BitSeq":
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"bit string must be nonempty over 0/1: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def rotated(self, k: int = 1) -> "BitSeq":
        k %= self.l
        return BitSeq(self.bits[k:] + self.bits[:k])

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


class CycleClass(str, Enum):
    INTEGER_POSITIVE = "integer_positive"
    INTEGER_NEGATIVE = "integer_negative"
    ZERO = "zero"
    FRACTIONAL_POSITIVE = "fractional_positive"
    FRACTIONAL_NEGATIVE = "fractional_negative"


@dataclass
class CycleRecord:
    """One candidate cycle: closure point, exact cycle, realization verdicts."""

    s: BitSeq
    d: int
    phi: int
    x0: Fraction
    numerators: tuple[int, ...]  # cycle values times |d|, length l+1, closed
    cls: CycleClass
    realized_U: bool | None = None
    misalign_U: int | None = None
    realized_Uflip: bool | None = None
    misalign_Uflip: int | None = None

    @cached_property
    def g_cycle(self) -> tuple[Fraction, ...]:
        D = abs(self.d)
        return tuple(Fraction(a, D) for a in self.numerators)

    def floors(self) -> tuple[int, ...]:
        """floor(x_i) for i = 0..l, exact via integer division."""
        D = abs(self.d)
        return tuple(a // D for a in self.numerators)


def candidate(s: BitSeq) -> CycleRecord:
    """Build the closed forced-branch cycle for s, realization flags unset."""
    bits = s.bits
    l, n = s.l, s.n
    d = (1 << l) - 3**n
    phi = affine_offset(bits)
    assert d != 0 and d % 2 == 1, f"d = 2^{l} - 3^{n} must be odd nonzero, got {d}"
    if n >= 1:
        assert d % 3 != 0, f"3 divides d = {d} with n = {n} >= 1"

    D = abs(d)
    a = phi if d > 0 else -phi
    nums = [a]
    for j, b in enumerate(bits):
        # Closed forced walks are parity aligned with g's own dispatch.
        if a % 2 != b:
            raise StructureError(f"parity misalignment at step {j} of {s}")
        a = a >> 1 if b == 0 else (3 * a + D) >> 1
        nums.append(a)
    if nums[-1] != nums[0]:
        raise StructureError(f"forced walk of {s} failed to close")

    x0 = Fraction(phi, d)
    if phi == 0:
        cls = CycleClass.ZERO
    elif phi % d == 0:
        cls = CycleClass.INTEGER_POSITIVE if d > 0 else CycleClass.INTEGER_NEGATIVE
    else:
        cls = (
            CycleClass.FRACTIONAL_POSITIVE if d > 0 else CycleClass.FRACTIONAL_NEGATIVE
        )
    return CycleRecord(s, d, phi, x0, tuple(nums), cls)


def check_U_realization(rec: CycleRecord) -> tuple[bool, int | None]:
    """Does U itself walk rec's cycle?  (False, i) names the first bad step.

    Requires x0 >= 1 (U's domain); along any prefix where the floor parities
    match the branch bits, the walk consists of genuine U steps, so the domain
    stays forward-invariant and only the bit comparison is needed.
    """
    if rec.x0 < 1:
        return False, None
    D = abs(rec.d)
    for i, b in enumerate(rec.s.bits):
        if (rec.numerators[i] // D) % 2 != b:
            return False, i
    return True, None


def check_Uflip_realization(rec: CycleRecord) -> tuple[bool, int | None]:
    """Same question for Uflip: floor parity must OPPOSE the branch bit."""
    if rec.x0 < 0:
        return False, None
    D = abs(rec.d)
    for i, b in enumerate(rec.s.bits):
        if (rec.numerators[i] // D) % 2 != 1 - b:
            return False, i
    return True, None


def evaluate(s: BitSeq) -> CycleRecord:
    """candidate() plus both realization checks."""
    rec = candidate(s)
    rec.realized_U, rec.misalign_U = check_U_realization(rec)
    rec.realized_Uflip, rec.misalign_Uflip = check_Uflip_realization(rec)
    return rec


def sweep(l_max: int, l_min: int = 1) -> Iterator[CycleRecord]:
    """All candidates for l_min <= l <= l_max in deterministic (l, rank) order.

    Every bit sequence of every length is emitted, the all-zero one included
    (it carries the zero cycle).  Rank ranges partition cleanly, so parallel
    runs over [rank_lo, rank_hi) chunks merge back into this exact order.
    """
    if l_min < 1 or l_max < l_min:
        raise ValueError(f"need 1 <= l_min <= l_max, got {l_min}..{l_max}")
    for l in range(l_min, l_max + 1):
        yield from sweep_range(l, 0, 1 << l)


def sweep_range(l: int, rank_lo: int, rank_hi: int) -> Iterator[CycleRecord]:
    """Candidates of one length for rank_lo <= rank < rank_hi, in rank order."""
    for rank in range(rank_lo, rank_hi):
        yield evaluate(BitSeq.from_rank(l, rank))
