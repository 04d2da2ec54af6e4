"""Exact orbit iteration with certified fates.

An orbit resolves in one of a few ways, all decided without floating point:

  * entered_cycle: an iterate repeated exactly (the only way a cycle is ever
    claimed);
  * tends_to_trivial / tends_from_below: the orbit landed in a certified
    sub-basin of an integer cycle, and the landing was confirmed by the exact
    contraction identity of the composed affine block;
  * entered_region: the orbit hit a caller-supplied half-open target region
    (the region-visit conjectures terminate through this);
  * escaped_bound / cap_reached: the honest fallbacks, the latter also raised
    when reduced denominators outgrow the configured bit budget.

The certified sub-basins are exact trapping sets.  For the floor-parity map U,
[1, 5/3) u (2, 3) maps into itself two-step with U^2(x) - a = (3/4)(x - a);
for Uflip the mirror interval (1/2, 1) contracts onto 1 from below; for F the
three windows (1, 4/3), (2, 8/3), (4, 5) chase the integer cycle (1, 4, 2).
Exact hits of cycle members are excluded from the windows so that on-cycle
starts resolve as entered_cycle via exact repetition.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError, PreconditionError
from .maps import MAPS, MapSpec, branch_of, step
from .rationals import floor_of, format_rational


class FateKind(str, Enum):
    TENDS_TO_TRIVIAL = "tends_to_trivial"
    TENDS_FROM_ABOVE = "tends_from_above"
    TENDS_FROM_BELOW = "tends_from_below"
    ESCAPED_BOUND = "escaped_bound"
    CAP_REACHED = "cap_reached"
    ENTERED_CYCLE = "entered_cycle"
    ENTERED_REGION = "entered_region"


@dataclass(frozen=True)
class Fate:
    kind: FateKind
    period: int | None = None
    value: Fraction | None = None  # the exactly repeated iterate
    bound: Fraction | None = None
    region: tuple[Fraction, Fraction] | None = None
    anchor: tuple[int, ...] | None = None
    size_capped: bool = False
    confirmed: bool = False

    @property
    def resolved(self) -> bool:
        return self.kind is not FateKind.CAP_REACHED

    def label(self) -> str:
        if self.kind is FateKind.ENTERED_CYCLE:
            return f"entered_cycle:{self.period}"
        if self.kind is FateKind.CAP_REACHED and self.size_capped:
            return "cap_reached:size"
        return self.kind.value

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "period": self.period,
            "value": None if self.value is None else format_rational(self.value),
            "bound": None if self.bound is None else format_rational(self.bound),
            "region": None
            if self.region is None
            else [format_rational(self.region[0]), format_rational(self.region[1])],
            "anchor": None if self.anchor is None else list(self.anchor),
            "size_capped": self.size_capped,
            "confirmed": self.confirmed,
        }


@dataclass
class TrajectoryReport:
    start: Fraction
    iterates: list[Fraction]  # head of the orbit; full when not truncated
    parity_bits: list[int]  # floor(x_i) mod 2 for every step taken
    fate: Fate
    steps_used: int
    truncated: bool = False

    def to_json_dict(self) -> dict:
        return {
            "start": format_rational(self.start),
            "iterates": [format_rational(x) for x in self.iterates],
            "parity_bits": list(self.parity_bits),
            "fate": self.fate.to_json_dict(),
            "steps_used": self.steps_used,
            "truncated": self.truncated,
        }


# ------------------------------------------------- certified cycle sub-basins

_FIVE_THIRDS = Fraction(5, 3)
_FOUR_THIRDS = Fraction(4, 3)
_EIGHT_THIRDS = Fraction(8, 3)
_HALF = Fraction(1, 2)


def _basin_U(x: Fraction):
    if 1 <= x < _FIVE_THIRDS and x != 1:
        return (1, 2), FateKind.TENDS_TO_TRIVIAL
    if 2 < x < 3:
        return (2, 1), FateKind.TENDS_TO_TRIVIAL
    return None


def _basin_Uflip(x: Fraction):
    if _HALF < x < 1:
        return (1, 2), FateKind.TENDS_FROM_BELOW
    return None


def _basin_F(x: Fraction):
    # Each window keeps a constant floor, so the three-step branch pattern is
    # forced and the block identity F^3(y) - a = (3/4)(y - a) can be checked.
    if 1 < x < _FOUR_THIRDS:
        return (1, 4, 2), FateKind.TENDS_TO_TRIVIAL
    if 2 < x < _EIGHT_THIRDS:
        return (2, 1, 4), FateKind.TENDS_TO_TRIVIAL
    if 4 < x < 5:
        return (4, 2, 1), FateKind.TENDS_TO_TRIVIAL
    return None


_BASINS = {"U": _basin_U, "T": _basin_U, "Uflip": _basin_Uflip, "F": _basin_F, "f": _basin_F}


def _block_ratio(m: MapSpec, bits) -> Fraction:
    ratio = Fraction(1)
    for b in bits:
        ratio *= m.params.gamma if b else m.params.alpha
    return ratio


def _confirm_contraction(m: MapSpec, y: Fraction, anchor: tuple[int, ...]) -> bool:
    """One composed block from y must contract exactly onto anchor[0]."""
    pattern = tuple(a % 2 for a in anchor)
    x = y
    bits = []
    for _ in anchor:
        x, b = step(m, x)
        bits.append(b)
    if tuple(bits) != pattern:
        return False
    return x - anchor[0] == _block_ratio(m, pattern) * (y - anchor[0])


# ---------------------------------------------------------------- iteration


def iterate(
    m: MapSpec,
    x0: Fraction,
    cap: int = 10**4,
    escape_bound: Fraction | None = None,
    *,
    trap_region: tuple[Fraction, Fraction] | None = None,
    den_bit_cap: int = 1 << 16,
    keep: int = 1024,
    tail_pad: int = 8,
) -> TrajectoryReport:
    """Iterate m from x0 until a fate resolves or cap steps have run.

    trap_region is a half-open interval [lo, hi); entering it resolves the
    orbit as entered_region.  escape_bound triggers on |x| > bound.  Reduced
    denominators beyond den_bit_cap bits resolve as a size-capped cap fate.
    A resolved tendency appends tail_pad extra steps of parity bits so that
    the periodic tail is visible in the report itself.
    """
    x0 = Fraction(x0)
    branch_of(m, x0)  # surface domain errors on the start value immediately
    basin = _BASINS.get(m.name)
    lo, hi = (None, None) if trap_region is None else trap_region

    iterates = [x0]
    bits = [floor_of(x0) % 2]
    seen = {x0: 0}
    truncated = False

    def record(x: Fraction) -> None:
        nonlocal truncated
        bits.append(floor_of(x) % 2)
        if len(iterates) < keep:
            iterates.append(x)
        else:
            truncated = True

    def pad(x: Fraction) -> None:
        for _ in range(tail_pad):
            x, _b = step(m, x)
            record(x)

    def settle(x: Fraction, k: int) -> Fate | None:
        if trap_region is not None and lo <= x < hi:
            return Fate(FateKind.ENTERED_REGION, region=(lo, hi))
        if basin is not None:
            hit = basin(x)
            if hit is not None:
                anchor, kind = hit
                confirmed = _confirm_contraction(m, x, anchor)
                assert confirmed, f"certified basin landing failed to confirm at {x}"
                return Fate(kind, anchor=anchor, confirmed=True)
        if escape_bound is not None and abs(x) > escape_bound:
            return Fate(FateKind.ESCAPED_BOUND, bound=Fraction(escape_bound))
        return None

    fate = settle(x0, 0)
    steps_used = 0
    if fate is None:
        x = x0
        for k in range(1, cap + 1):
            x, _b = step(m, x)
            record(x)
            steps_used = k
            prev = seen.get(x)
            if prev is not None:
                fate = Fate(FateKind.ENTERED_CYCLE, period=k - prev, value=x)
                break
            seen[x] = k
            fate = settle(x, k)
            if fate is not None:
                break
            if x.denominator.bit_length() > den_bit_cap:
                fate = Fate(FateKind.CAP_REACHED, size_capped=True)
                break
        else:
            fate = Fate(FateKind.CAP_REACHED)
        if fate.kind in (
            FateKind.TENDS_TO_TRIVIAL,
            FateKind.TENDS_FROM_ABOVE,
            FateKind.TENDS_FROM_BELOW,
            FateKind.ENTERED_CYCLE,
        ):
            pad(x)
    else:
        if fate.kind in (
            FateKind.TENDS_TO_TRIVIAL,
            FateKind.TENDS_FROM_ABOVE,
            FateKind.TENDS_FROM_BELOW,
        ):
            pad(x0)

    return TrajectoryReport(x0, iterates, bits, fate, steps_used, truncated)


# ------------------------------------------------------------- diagnostics


def detect_period01(bits, window: int = 4) -> int | None:
    """Smallest j from which the observed bits alternate 0,1,0,1,... to the end.

    A candidate j counts only when at least window bits were observed from j
    on; returns None when no such j exists in the observed prefix.
    """
    bits = list(bits)
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    for j in range(0, len(bits) - window + 1):
        if all(bits[j + t] == t % 2 for t in range(len(bits) - j)):
            return j
    return None


def _check_anchor(anchor) -> tuple[int, ...]:
    anchor = tuple(anchor)
    if not anchor or any(not isinstance(a, int) or isinstance(a, bool) for a in anchor):
        raise PreconditionError(f"anchor must be a nonempty integer cycle: {anchor!r}")
    U = MAPS["U"]
    for i, a in enumerate(anchor):
        if a < 1:
            raise PreconditionError(f"anchor values must be >= 1, got {a}")
        image, _ = step(U, Fraction(a))
        expected = anchor[(i + 1) % len(anchor)]
        if image != expected:
            raise PreconditionError(
                f"anchor is not a U-cycle: U({a}) = {image} != {expected}"
            )
    return anchor


def detect_tendency(m: MapSpec, x0: Fraction, anchor, cap: int = 256) -> str:
    """'from_above', 'from_below', or 'none' relative to an integer U-cycle.

    A hit means some iterate landed in the one-sided window of width
    theta = (2/3)^l at some anchor point, on the side this map approaches
    from, and the composed-block contraction from the landing point checked
    out exactly.
    """
    anchor = _check_anchor(anchor)
    if m.name not in ("U", "T", "Uflip"):
        raise ValueError(f"tendency detection supports U, T, Uflip; got {m.name}")
    below = m.name == "Uflip"
    l = len(anchor)
    theta = Fraction(2, 3) ** l
    x = Fraction(x0)
    for _ in range(cap + 1):
        for j, a in enumerate(anchor):
            if below:
                hit = a - theta < x <= a
            else:
                hit = a <= x < a + theta
            if hit:
                rotated = anchor[j:] + anchor[:j]
                if _confirm_contraction(m, x, rotated):
                    return "from_below" if below else "from_above"
        x, _b = step(m, x)
    return "none"


def contraction_check(
    x0: Fraction,
    a: Fraction | int,
    s,
    m_steps: int,
    m: MapSpec = MAPS["U"],
) -> bool:
    """Exact identity x_{k*l} - a == ratio^k (x0 - a) for k = 1..m_steps.

    The orbit's branch bits must follow s cyclically for the whole window;
    a divergence raises PreconditionError since the composed affine block is
    then simply not the one being claimed.
    """
    s = tuple(s)
    if not s or any(b not in (0, 1) for b in s):
        raise ValueError(f"s must be a nonempty 0/1 sequence: {s!r}")
    if m_steps < 1:
        raise ValueError(f"m_steps must be >= 1, got {m_steps}")
    a = Fraction(a)
    x0 = Fraction(x0)
    l = len(s)
    ratio = _block_ratio(m, s)

    x = x0
    ok = True
    for t in range(m_steps * l):
        x, b = step(m, x)
        if b != s[t % l]:
            raise PreconditionError(
                f"branch bits diverge from the claimed pattern at step {t}"
            )
        if (t + 1) % l == 0:
            k = (t + 1) // l
            ok = ok and (x - a == ratio**k * (x0 - a))
    return ok
