"""Piecewise-affine parity maps: the 3x+1 family on integers, rationals, reals.

Every map here is one instance of the same shape: two affine pieces
alpha*x + beta and gamma*x + delta, a rule deciding which piece runs, and a
domain.  The deciding rule is either the parity of floor(x + tau) for a shift
tau in [0, 2), or the parity of the numerator for rationals with odd reduced
denominator.  The named instances:

    T      n/2 if n even else (3n+1)/2         integers n >= 1, numerator parity
    f      n/2 if n even else 3n+1             integers n >= 1, numerator parity
    g      r/2 if r even else (3r+1)/2         odd-denominator rationals
    U      x/2 if floor(x) even else (3x+1)/2  x >= 1
    Uflip  same pieces as U, branch flipped    x >= 0   (tau = 1)
    F      x/2 if floor(x) even else 3x+1      x >= 1
    V      x/2 if floor(x) even else (3/2)x    x >= 1

The returned branch bit is 1 exactly when the second piece (the multiplying
one, gamma*x + delta) ran.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError
from .rationals import floor_of, parse_rational


class BranchRule(Enum):
    FLOOR_PARITY = "floor_parity"
    NUMERATOR_PARITY = "numerator_parity"


@dataclass(frozen=True)
class PhiParams:
    """Slopes and offsets of the two pieces, plus the floor shift tau."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    tau: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "tau"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (0 <= self.tau < 2):
            raise ValueError(f"tau must lie in [0, 2), got {self.tau}")


@dataclass(frozen=True)
class MapSpec:
    name: str
    params: PhiParams
    branch_rule: BranchRule
    domain_min: Fraction | None = None
    integral: bool = False  # domain restricted to integers


def _check_domain(m: MapSpec, x: Fraction) -> None:
    if m.integral and x.denominator != 1:
        raise DomainError(f"{m.name} is defined on integers only, got {x}")
    if m.branch_rule is BranchRule.NUMERATOR_PARITY and x.denominator % 2 == 0:
        raise DomainError(f"{m.name} needs an odd reduced denominator, got {x}")
    if m.domain_min is not None and x < m.domain_min:
        raise DomainError(f"{m.name} is defined for x >= {m.domain_min}, got {x}")


def branch_of(m: MapSpec, x: Fraction) -> int:
    """Branch bit at x: 1 iff the gamma*x + delta piece applies."""
    x = Fraction(x)
    _check_domain(m, x)
    if m.branch_rule is BranchRule.FLOOR_PARITY:
        return floor_of(x + m.params.tau) % 2
    return x.numerator % 2


def step(m: MapSpec, x: Fraction) -> tuple[Fraction, int]:
    """One application of m; returns (image, branch bit).

    Domain membership is checked here, lazily per step: an orbit that leaves
    the domain surfaces as a DomainError on its next step.
    """
    x = Fraction(x)
    bit = branch_of(m, x)
    p = m.params
    y = p.gamma * x + p.delta if bit else p.alpha * x + p.beta
    return y, bit


# ---------------------------------------------------------------- named maps

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)

MAPS: dict[str, MapSpec] = {
    "T": MapSpec(
        "T",
        PhiParams(HALF, 0, THREE_HALVES, HALF, 0),
        BranchRule.NUMERATOR_PARITY,
        domain_min=Fraction(1),
        integral=True,
    ),
    "f": MapSpec(
        "f",
        PhiParams(HALF, 0, Fraction(3), Fraction(1), 0),
        BranchRule.NUMERATOR_PARITY,
        domain_min=Fraction(1),
        integral=True,
    ),
    "g": MapSpec(
        "g",
        PhiParams(HALF, 0, THREE_HALVES, HALF, 0),
        BranchRule.NUMERATOR_PARITY,
    ),
    "U": MapSpec(
        "U",
        PhiParams(HALF, 0, THREE_HALVES, HALF, 0),
        BranchRule.FLOOR_PARITY,
        domain_min=Fraction(1),
    ),
    "Uflip": MapSpec(
        # tau = 1 swaps the branches: the multiplying piece runs on even floors.
        "Uflip",
        PhiParams(HALF, 0, THREE_HALVES, HALF, 1),
        BranchRule.FLOOR_PARITY,
        domain_min=Fraction(0),
    ),
    "F": MapSpec(
        "F",
        PhiParams(HALF, 0, Fraction(3), Fraction(1), 0),
        BranchRule.FLOOR_PARITY,
        domain_min=Fraction(1),
    ),
    "V": MapSpec(
        "V",
        PhiParams(HALF, 0, THREE_HALVES, 0, 0),
        BranchRule.FLOOR_PARITY,
        domain_min=Fraction(1),
    ),
}


def map_from_name(text: str) -> MapSpec:
    """Resolve a map name: one of T,f,g,U,Uflip,F,V or 'Phi:a,b,c,d,tau[,min]'.

    A bare Phi instance dispatches on floor parity and is unbounded below
    unless the optional sixth field pins a domain minimum.
    """
    name = text.strip()
    if name in MAPS:
        return MAPS[name]
    if name.startswith("Phi:"):
        fields = name[len("Phi:") :].split(",")
        if len(fields) not in (5, 6):
            raise ValueError(f"Phi wants 5 or 6 comma-separated rationals: {text!r}")
        vals = [parse_rational(f) for f in fields]
        dom = vals[5] if len(vals) == 6 else None
        return MapSpec("Phi", PhiParams(*vals[:5]), BranchRule.FLOOR_PARITY, dom)
    raise ValueError(f"unknown map name: {text!r}")


# ----------------------------------------------------- forced-branch algebra


def affine_offset(bits) -> int:
    """Offset accumulated by the multiplying branches of T along bits.

    For bits s_1..s_l this is sum over j of s_j * 2^(j-1) * 3^(ones after j);
    the composed walk is then x -> (3^n x + offset) / 2^l.
    """
    bits = tuple(bits)
    if not bits or any(b not in (0, 1) for b in bits):
        raise ValueError(f"bits must be a nonempty 0/1 sequence, got {bits!r}")
    total = 0
    ones_after = 0
    for j in range(len(bits) - 1, -1, -1):
        if bits[j]:
            total += (1 << j) * 3**ones_after
            ones_after += 1
    return total


def compose_affine(bits) -> tuple[int, int, int]:
    """Compose the branch chain given by bits into (3^n, 2^l, offset)."""
    bits = tuple(bits)
    offset = affine_offset(bits)
    return 3 ** sum(bits), 1 << len(bits), offset


def apply_affine(triple: tuple[int, int, int], x: Fraction) -> Fraction:
    """Evaluate (3^n x + offset) / 2^l exactly."""
    num, den, off = triple
    return (num * Fraction(x) + off) / den
