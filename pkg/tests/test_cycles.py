"""Pseudo-cycle candidates: closure, classification, and realization checks."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from real3x1.cycles import (
    BitSeq,
    CycleClass,
    candidate,
    check_U_realization,
    check_Uflip_realization,
    evaluate,
    sweep,
    sweep_range,
)
from real3x1.maps import apply_affine, compose_affine

F2 = Fraction


def test_bitseq_basics():
    s = BitSeq.from_string("11100")
    assert (s.l, s.n, str(s)) == (5, 3, "11100")
    assert s.rank == 28
    assert BitSeq.from_rank(5, 28) == s
    assert str(s.rotated(1)) == "11001"
    assert str(s.rotated(-1)) == "01110"
    for bad in ("", "10a", "2"):
        with pytest.raises(ValueError):
            BitSeq.from_string(bad)
    with pytest.raises(ValueError):
        BitSeq.from_rank(3, 8)
    with pytest.raises(ValueError):
        BitSeq.from_rank(0, 0)


@given(st.integers(min_value=1, max_value=16))
def test_bitseq_rank_roundtrip(l):
    for rank in (0, 1, (1 << l) - 1, (1 << l) // 2):
        assert BitSeq.from_rank(l, rank).rank == rank


def test_known_candidates():
    rec = candidate(BitSeq.from_string("10"))
    assert (rec.d, rec.phi, rec.x0) == (1, 1, F2(1))
    assert rec.cls is CycleClass.INTEGER_POSITIVE

    rec = candidate(BitSeq.from_string("1"))
    assert (rec.d, rec.phi, rec.x0) == (-1, 1, F2(-1))
    assert rec.cls is CycleClass.INTEGER_NEGATIVE

    rec = candidate(BitSeq.from_string("110"))
    assert (rec.d, rec.phi, rec.x0) == (-1, 5, F2(-5))
    assert rec.g_cycle[:3] == (F2(-5), F2(-7), F2(-10))

    rec = candidate(BitSeq.from_string("100"))
    assert (rec.d, rec.phi, rec.x0) == (5, 1, F2(1, 5))
    assert rec.g_cycle == (F2(1, 5), F2(4, 5), F2(2, 5), F2(1, 5))
    assert rec.cls is CycleClass.FRACTIONAL_POSITIVE

    rec = candidate(BitSeq.from_string("11100"))
    assert (rec.d, rec.phi, rec.x0) == (5, 19, F2(19, 5))
    assert rec.floors() == (3, 6, 9, 15, 7, 3)

    rec = candidate(BitSeq.from_string("0"))
    assert rec.x0 == 0 and rec.cls is CycleClass.ZERO


def test_realization_frozen():
    assert evaluate(BitSeq.from_string("10")).realized_U is True
    assert evaluate(BitSeq.from_string("01")).realized_U is True
    rec = evaluate(BitSeq.from_string("100"))
    assert rec.realized_U is False and rec.misalign_U is None  # x0 = 1/5 < 1
    assert rec.realized_Uflip is False and rec.misalign_Uflip == 1
    rec = evaluate(BitSeq.from_string("11100"))
    assert rec.realized_U is False and rec.misalign_U == 1
    # the trivial cycle is not a flipped cycle: the parities are exactly wrong
    rec = evaluate(BitSeq.from_string("10"))
    assert rec.realized_Uflip is False and rec.misalign_Uflip == 0


bit_lists = st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=12)


@given(bit_lists)
def test_candidate_closure_and_shape(bits):
    """x0 is an exact fixed point of the composed chain, and d, phi match it."""
    s = BitSeq(tuple(bits))
    rec = candidate(s)
    assert rec.d == 2**s.l - 3**s.n
    assert rec.x0 * rec.d == rec.phi
    assert apply_affine(compose_affine(bits), rec.x0) == rec.x0
    assert len(rec.numerators) == s.l + 1
    assert rec.numerators[0] == rec.numerators[-1]


@given(bit_lists)
def test_rotation_moves_the_closure_point(bits):
    s = BitSeq(tuple(bits))
    rec = candidate(s)
    rot = candidate(s.rotated(1))
    # the rotated pattern closes at the next point of the same g-walk
    assert rot.x0 == rec.g_cycle[1]


def test_sweep_small_frozen():
    recs = list(sweep(3))
    assert len(recs) == 14
    by_class = {}
    for rec in recs:
        by_class[rec.cls.value] = by_class.get(rec.cls.value, 0) + 1
    assert by_class == {
        "zero": 3,
        "integer_positive": 2,
        "integer_negative": 6,
        "fractional_positive": 3,
    }
    realized = [str(rec.s) for rec in recs if rec.realized_U]
    assert realized == ["01", "10"], f"only the trivial rotations realize below l=4: {realized}"
    assert not any(rec.realized_Uflip for rec in recs)


def test_sweep_range_partitions_cleanly():
    whole = [str(r.s) for r in sweep(6)]
    parts = []
    for l in range(1, 7):
        for lo in range(0, 1 << l, 5):
            parts.extend(str(r.s) for r in sweep_range(l, lo, min(lo + 5, 1 << l)))
    assert parts == whole
    with pytest.raises(ValueError):
        list(sweep(0))


@settings(deadline=None)
@given(st.integers(min_value=1, max_value=255))
def test_sign_coherence_l8(rank_seed):
    """Nonzero candidates keep one strict sign along the whole g-cycle."""
    s = BitSeq.from_rank(8, rank_seed)
    rec = candidate(s)
    if rec.x0 == 0:
        assert all(a == 0 for a in rec.numerators)
    elif rec.x0 > 0:
        assert all(a > 0 for a in rec.numerators), f"sign flip in {s}"
    else:
        assert all(a < 0 for a in rec.numerators), f"sign flip in {s}"


def test_fractional_denominators_are_at_least_five():
    # d is odd and never divisible by 3, so a non-integer cycle forces |d| >= 5
    for rec in sweep(10):
        if rec.cls in (CycleClass.FRACTIONAL_POSITIVE, CycleClass.FRACTIONAL_NEGATIVE):
            assert abs(rec.d) >= 5
            assert rec.x0.denominator > 1


def test_realization_checks_match_direct_walk():
    """The recorded misalignment index is the first floor-parity mismatch."""
    for rec in sweep(9):
        ok_U, idx_U = check_U_realization(rec)
        if rec.x0 >= 1:
            floors = rec.floors()
            mismatches = [i for i, b in enumerate(rec.s.bits) if floors[i] % 2 != b]
            assert ok_U == (not mismatches)
            assert idx_U == (mismatches[0] if mismatches else None)
        else:
            assert (ok_U, idx_U) == (False, None)
        ok_f, idx_f = check_Uflip_realization(rec)
        if rec.x0 >= 0:
            floors = rec.floors()
            mismatches = [i for i, b in enumerate(rec.s.bits) if floors[i] % 2 != 1 - b]
            assert ok_f == (not mismatches)
            assert idx_f == (mismatches[0] if mismatches else None)
        else:
            assert (ok_f, idx_f) == (False, None)
