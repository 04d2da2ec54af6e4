"""Remainder ledgers for candidate cycles over a common odd denominator.

Write each cycle value as x_i = c_i / d with d = 2^l - 3^n > 0 and split
c_i = q_i * d + r_i, 0 <= r_i < d.  U walks the cycle iff floor parity equals
numerator parity at every index, i.e. q_i == c_i (mod 2); since d is odd that
forces every r_i = c_i - q_i*d to be even, and the remainders then obey an
autonomous integer recurrence:

    r_i = r_{i-1} / 2                  if q_{i-1} even
    r_i = 3 r_{i-1} / 2                if q_{i-1} odd and 3 r_{i-1} < 2d
    r_i = 3 r_{i-1} / 2 - d            if q_{i-1} odd and 3 r_{i-1} > 2d  ("new")

(3 r = 2d is impossible: 3 never divides d.)  The flipped alignment
(q_i != c_i mod 2, the Uflip condition) forces every r_i odd and the same
three-branch recurrence drives d - r_i instead, with the roles of even and
odd q exchanged.

Between consecutive "new" indices p < q the recurrence telescopes into the
strict integer inequality 3^n(p,q) > 3 * 2^(q-p-1), where n(p,q) counts the
multiplying steps; summing the weaker faithful bound 3^n(p,q) > 2^(q-p)
around a closed aligned cycle yields 3^n > 2^l, which no candidate with
d = 2^l - 3^n > 0 can satisfy.  segment_inequality() reports both flags per
segment and both global sides; all comparisons are exact integer power
comparisons, never logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

from .cycles import CycleRecord
from .errors import PreconditionError, StructureError
from .rationals import compare_pow3_pow2


class VerdictKind(str, Enum):
    ALIGNED_CLOSED = "aligned_closed"
    MISALIGNED_AT = "misaligned_at"
    INTEGER_CYCLE = "integer_cycle"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    index: int | None = None

    def label(self) -> str:
        if self.kind is VerdictKind.MISALIGNED_AT:
            return f"misaligned_at:{self.index}"
        return self.kind.value


class Segment(NamedTuple):
    """Consecutive new indices (start, stop], stop may wrap past l."""

    start: int
    stop: int
    ones: int  # multiplying steps inside (start, stop]
    gap: int  # stop - start


@dataclass
class RemainderTrace:
    """The full ledger for one candidate: numerators, quotients, remainders."""

    d: int
    c: tuple[int, ...]  # length l+1, c[l] == c[0]
    q: tuple[int, ...]
    r: tuple[int, ...]
    branch_bits: tuple[int, ...]  # length l; bit for the step into index i+1
    flipped: bool
    aligned_prefix: int
    new_flags: tuple[bool, ...]
    segments: tuple[Segment, ...] | None
    verdict: Verdict

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "c": list(self.c),
            "q": list(self.q),
            "r": list(self.r),
            "new": [bool(b) for b in self.new_flags],
            "verdict": self.verdict.label(),
            "segments": None
            if self.segments is None
            else [list(seg) for seg in self.segments],
            "flipped": self.flipped,
            "aligned_prefix": self.aligned_prefix,
        }


def _aligned(q_i: int, c_i: int, flipped: bool) -> bool:
    same = (q_i - c_i) % 2 == 0
    return same != flipped


def _expected_next(d: int, q_prev: int, r_prev: int, flipped: bool) -> int:
    """One exact step of the remainder recurrence, given alignment at i-1."""
    if not flipped:
        if r_prev % 2 != 0:
            raise StructureError(f"aligned remainder {r_prev} must be even")
        if q_prev % 2 == 0:
            return r_prev // 2
        triple = 3 * r_prev
        assert triple != 2 * d, "3r = 2d is impossible: 3 never divides d"
        return triple // 2 if triple < 2 * d else triple // 2 - d
    w_prev = d - r_prev
    if w_prev % 2 != 0:
        raise StructureError(f"flip-aligned complement {w_prev} must be even")
    if q_prev % 2 == 1:
        return d - w_prev // 2
    triple = 3 * w_prev
    assert triple != 2 * d
    w_next = triple // 2 if triple < 2 * d else triple // 2 - d
    return d - w_next


def _new_flags(d: int, r: tuple[int, ...], l: int, flipped: bool) -> tuple[bool, ...]:
    flags = []
    for i in range(l):
        prev = r[(i - 1) % l]
        if not flipped:
            flags.append(2 * r[i] + 2 * d == 3 * prev)
        else:
            w_i, w_prev = d - r[i], d - prev
            flags.append(2 * w_i + 2 * d == 3 * w_prev)
    return tuple(flags)


def _segments(
    new_flags: tuple[bool, ...], branch_bits: tuple[int, ...]
) -> tuple[Segment, ...]:
    l = len(branch_bits)
    new_idx = [i for i, f in enumerate(new_flags) if f]
    if not new_idx:
        raise StructureError("closed aligned ledger without any new remainder")

    def ones_between(p: int, stop: int) -> int:
        return sum(branch_bits[(t - 1) % l] for t in range(p + 1, stop + 1))

    segs = []
    for k, p in enumerate(new_idx):
        stop = new_idx[k + 1] if k + 1 < len(new_idx) else new_idx[0] + l
        segs.append(Segment(p, stop, ones_between(p, stop), stop - p))
    return tuple(segs)


def trace(rec: CycleRecord, flipped: bool = False) -> RemainderTrace:
    """Replay rec's cycle as a remainder ledger; d must be positive.

    Integer-valued candidates (d divides every c_i) report IntegerCycle: all
    remainders vanish and the ledger is empty of content.  Fractional ones
    report either the first misaligned index or a fully aligned closure; on
    every step that departs from an aligned index, the directly computed
    remainder is checked against the recurrence above, exactly.
    """
    if rec.d < 0:
        raise PreconditionError(f"remainder ledger undefined for d = {rec.d} < 0")
    d = rec.d
    l = rec.s.l
    c = rec.numerators
    q = tuple(ci // d for ci in c)
    r = tuple(ci % d for ci in c)
    branch_bits = rec.s.bits
    new_flags = _new_flags(d, r, l, flipped)

    if all(ri == 0 for ri in r):
        prefix = next(
            (i for i in range(l) if not _aligned(q[i], c[i], flipped)), l
        )
        return RemainderTrace(
            d, c, q, r, branch_bits, flipped, prefix, new_flags, None,
            Verdict(VerdictKind.INTEGER_CYCLE),
        )

    prefix = l
    for i in range(l):
        if not _aligned(q[i], c[i], flipped):
            prefix = i
            break

    for i in range(1, l + 1):
        if _aligned(q[i - 1], c[i - 1], flipped):
            expected = _expected_next(d, q[i - 1], r[i - 1], flipped)
            if expected != r[i]:
                raise StructureError(
                    f"recurrence break at step {i}: expected {expected}, got {r[i]}"
                )

    if prefix < l:
        return RemainderTrace(
            d, c, q, r, branch_bits, flipped, prefix, new_flags, None,
            Verdict(VerdictKind.MISALIGNED_AT, prefix),
        )
    segs = _segments(new_flags, branch_bits)
    return RemainderTrace(
        d, c, q, r, branch_bits, flipped, prefix, new_flags, segs,
        Verdict(VerdictKind.ALIGNED_CLOSED),
    )


def synthetic_trace(d: int, r_cycle: Iterable[int]) -> RemainderTrace:
    """A formally aligned closed ledger from a remainder cycle alone.

    Each consecutive pair must match exactly one recurrence branch (with its
    side condition); quotients are synthesized with the matching parity.  This
    is the honest way to exercise segment_inequality, since no genuine
    candidate ever closes aligned.
    """
    _check_modulus(d)
    states = tuple(r_cycle)
    if not states:
        raise ValueError("empty remainder cycle")
    l = len(states)
    bits = []
    for i in range(l):
        cur, nxt = states[i], states[(i + 1) % l]
        if not (0 < cur < d and cur % 2 == 0):
            raise ValueError(f"state {cur} not an even residue in (0, {d})")
        if cur % 4 == 0 and nxt == cur // 2:
            bits.append(0)
        elif cur % 4 == 0 and 3 * cur < 2 * d and nxt == 3 * cur // 2:
            bits.append(1)
        elif cur % 4 == 2 and 3 * cur > 2 * d and nxt == 3 * cur // 2 - d:
            bits.append(1)
        else:
            raise ValueError(f"no recurrence branch sends {cur} to {nxt} (d={d})")
    q = tuple(bits) + (bits[0],)  # parity is all that matters downstream
    r = states + (states[0],)
    c = tuple(qi * d + ri for qi, ri in zip(q, r))
    for i in range(1, l + 1):
        assert _expected_next(d, q[i - 1], r[i - 1], False) == r[i]
    new_flags = _new_flags(d, r, l, False)
    segs = _segments(new_flags, tuple(bits))
    return RemainderTrace(
        d, c, q, r, tuple(bits), False, l, new_flags, segs,
        Verdict(VerdictKind.ALIGNED_CLOSED),
    )


# ------------------------------------------------------- inequality ledger


class SegmentBound(NamedTuple):
    start: int
    stop: int
    ones: int
    gap: int
    bound_holds: bool  # faithful encoding: 3^ones > 2^gap
    strict_holds: bool  # derived per-segment form: 3^ones > 3 * 2^(gap-1)


@dataclass
class InequalityLedger:
    entries: tuple[SegmentBound, ...]
    n_total: int
    l_total: int
    sum_side_holds: bool  # 3^n > 2^l, what the summed segment bounds force
    positive_d_side_holds: bool  # 3^n < 2^l, what d = 2^l - 3^n > 0 forces

    def to_json_dict(self) -> dict:
        return {
            "segments": [list(e) for e in self.entries],
            "n_total": self.n_total,
            "l_total": self.l_total,
            "sum_side_holds": self.sum_side_holds,
            "positive_d_side_holds": self.positive_d_side_holds,
        }


def segment_inequality(tr: RemainderTrace) -> InequalityLedger:
    """Exact per-segment and global power comparisons for an aligned ledger.

    The two global sides are mutually exclusive by construction; a ledger
    whose per-segment bounds all hold therefore cannot belong to any
    candidate with positive d.  That exclusion is the whole point, and the
    caller reads it straight off the two flags.
    """
    if tr.verdict.kind is not VerdictKind.ALIGNED_CLOSED:
        raise PreconditionError(
            f"segment inequalities need an aligned closed ledger, got {tr.verdict.label()}"
        )
    if not tr.segments:
        raise StructureError("aligned closed ledger without segments")
    l = len(tr.branch_bits)
    entries = []
    for seg in tr.segments:
        bound = compare_pow3_pow2(seg.ones, seg.gap) > 0
        strict = 3**seg.ones > 3 * 2 ** (seg.gap - 1) if seg.gap >= 1 else False
        entries.append(SegmentBound(seg.start, seg.stop, seg.ones, seg.gap, bound, strict))
    n_total = sum(e.ones for e in entries)
    l_total = sum(e.gap for e in entries)
    if l_total != l or n_total != sum(tr.branch_bits):
        raise StructureError("segments do not tile the cycle")
    return InequalityLedger(
        tuple(entries),
        n_total,
        l_total,
        sum_side_holds=compare_pow3_pow2(n_total, l_total) > 0,
        positive_d_side_holds=compare_pow3_pow2(n_total, l_total) < 0,
    )


# ------------------------------------------------------------- orbit scan


@dataclass(frozen=True)
class Orbit:
    """A closed orbit of the remainder recurrence over even residues."""

    states: tuple[int, ...]
    length: int
    odd_steps: int  # multiplying steps, the n of this orbit
    exceeds_pow_bound: bool  # 3^n > 2^l, forced for every closed orbit


def _check_modulus(d: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool):
        raise ValueError(f"d must be an integer, got {d!r}")
    if d < 5 or d % 2 == 0 or d % 3 == 0:
        raise ValueError(f"d must be odd, >= 5, and coprime to 3, got {d}")


def _successors(d: int) -> dict[int, list[tuple[int, int]]]:
    """Adjacency of the recurrence restricted to even integer states.

    From r = 0 mod 4 both r/2 and 3r/2 stay even; from r = 2 mod 4 only the
    subtracting branch 3r/2 - d does (d odd), and only when 3r > 2d.  Every
    other move produces an odd value and can belong to no aligned cycle.
    """
    adj: dict[int, list[tuple[int, int]]] = {}
    for r in range(2, d, 2):
        succs = []
        if r % 4 == 0:
            succs.append((r // 2, 0))
            if 3 * r < 2 * d:
                succs.append((3 * r // 2, 1))
        else:
            if 3 * r > 2 * d:
                succs.append((3 * r // 2 - d, 1))
        adj[r] = [(t, b) for t, b in succs if 0 < t < d and t % 2 == 0]
    return adj


def rmap_orbit_scan(d: int, max_len: int | None = None) -> list[Orbit]:
    """All elementary closed orbits of the remainder recurrence modulo d.

    Deterministic order: orbits are rooted at their minimal state, discovered
    in ascending root order.  Every orbit found is verified to satisfy
    3^n > 2^l exactly (closure forces r0 * (3^n - 2^l) = d * K with K > 0),
    so none can coexist with a positive d = 2^l - 3^n.
    """
    _check_modulus(d)
    cap = 4 * d if max_len is None else max_len
    adj = _successors(d)
    orbits: list[Orbit] = []
    for root in sorted(adj):
        # Iterative DFS over paths root -> ... -> root using states > root.
        path = [root]
        bits: list[int] = []
        on_path = {root}
        stack = [iter(adj[root])]
        while stack:
            advanced = False
            for nxt, bit in stack[-1]:
                if nxt == root:
                    n = sum(bits) + bit
                    l = len(bits) + 1
                    exceeds = compare_pow3_pow2(n, l) > 0
                    if not exceeds:
                        raise StructureError(
                            f"closed orbit {tuple(path)} with 3^{n} <= 2^{l}"
                        )
                    orbits.append(Orbit(tuple(path), l, n, exceeds))
                    continue
                if nxt > root and nxt not in on_path and len(path) < cap:
                    path.append(nxt)
                    bits.append(bit)
                    on_path.add(nxt)
                    stack.append(iter(adj[nxt]))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                dropped = path.pop()
                on_path.discard(dropped)
                if bits:
                    bits.pop()
    return orbits
