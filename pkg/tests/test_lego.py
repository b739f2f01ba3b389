import pytest

from sstlego.lego import LegoKind, cap_legs, make_lego, parse_kind
from sstlego.symplectic import ContractViolation, ParityCheckMatrix, rank, row_space_equal

FIXED = [k for k in LegoKind if k not in (LegoKind.BITFLIP_REP, LegoKind.PHASEFLIP_REP, LegoKind.PCM)]


@pytest.mark.parametrize("kind", FIXED)
def test_fixed_legos_commute_and_are_independent(kind):
    block = make_lego(kind)
    assert block.pcm.is_commuting()
    assert rank(block.pcm) == len(block.pcm.rows)


@pytest.mark.parametrize("m", [2, 3, 5, 8])
@pytest.mark.parametrize("kind", [LegoKind.BITFLIP_REP, LegoKind.PHASEFLIP_REP])
def test_repetition_blocks_are_states(kind, m):
    block = make_lego(kind, m)
    assert block.pcm.is_commuting()
    assert rank(block.pcm) == m
    assert block.leg_roles[-1].value == "logical"


def test_repetition_needs_arity():
    with pytest.raises(ContractViolation):
        make_lego(LegoKind.BITFLIP_REP)
    with pytest.raises(ContractViolation):
        make_lego(LegoKind.BELL, 3)


@pytest.mark.parametrize(
    "parent, child",
    [(LegoKind.ENC_603, LegoKind.SUB_512), (LegoKind.ENC_602_PERFECT, LegoKind.SUB_513)],
)
def test_identity_cap_on_logical_leg_gives_subspace(parent, child):
    capped = cap_legs(make_lego(parent).pcm, {5: LegoKind.ID_STOPPER})
    assert row_space_equal(capped, make_lego(child).pcm)


def test_x_stopper_on_bell_leaves_x():
    out = cap_legs(make_lego(LegoKind.BELL).pcm, {1: LegoKind.X_STOPPER})
    assert row_space_equal(out, ParityCheckMatrix.from_strings(["X"]))


def test_parse_kind():
    assert parse_kind("bitflip_rep:3") == (LegoKind.BITFLIP_REP, 3)
    assert parse_kind("Bell") == (LegoKind.BELL, None)
    with pytest.raises(ValueError):
        parse_kind("teleporter")
