"""Quantum LEGO building blocks and their stabilizer PCMs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .symplectic import ContractViolation, ParityCheckMatrix, reduced, self_trace, tensor_product


class LegRole(str, Enum):
    PHYSICAL = "physical"
    LOGICAL = "logical"
    ANCILLA = "ancilla"


class LegoKind(str, Enum):
    X_STOPPER = "x_stopper"
    Z_STOPPER = "z_stopper"
    ID_STOPPER = "id_stopper"
    HADAMARD = "hadamard"
    BELL = "bell"
    BITFLIP_REP = "bitflip_rep"
    PHASEFLIP_REP = "phaseflip_rep"
    ENC_602_PERFECT = "enc_602_perfect"
    SUB_513 = "sub_513"
    ENC_603 = "enc_603"
    SUB_512 = "sub_512"
    PCM = "pcm"  # explicit rows, used for coarse-grained nodes


STOPPERS = (LegoKind.X_STOPPER, LegoKind.Z_STOPPER, LegoKind.ID_STOPPER)

_SUB_513 = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
_SUB_512 = ["XXXXI", "ZZZZI", "XXIIX", "ZIZIZ"]

_FIXED_ROWS = {
    LegoKind.X_STOPPER: ["X"],
    LegoKind.Z_STOPPER: ["Z"],
    LegoKind.HADAMARD: ["XZ", "ZX"],
    LegoKind.BELL: ["XX", "ZZ"],
    LegoKind.SUB_513: _SUB_513,
    LegoKind.ENC_602_PERFECT: [r + "I" for r in _SUB_513] + ["XXXXXX", "ZZZZZZ"],
    LegoKind.SUB_512: _SUB_512,
    LegoKind.ENC_603: [r + "I" for r in _SUB_512] + ["XIXIIX", "ZZIIIZ"],
}


@dataclass(frozen=True)
class LegoBlock:
    kind: LegoKind
    pcm: ParityCheckMatrix
    leg_roles: tuple[LegRole, ...]
    m: int | None = None
    rows: tuple[str, ...] | None = field(default=None, compare=False)

    @property
    def n_legs(self) -> int:
        return self.pcm.n

    @property
    def label(self) -> str:
        if self.m is not None:
            return f"{self.kind.value}:{self.m}"
        return self.kind.value


def _repetition(m: int, pair: str, full: str) -> list[str]:
    other = "I"
    rows = []
    for i in range(m - 1):
        row = [other] * m
        row[i] = row[i + 1] = pair
        rows.append("".join(row))
    rows.append(full * m)
    return rows


def make_lego(kind: LegoKind | str, m: int | None = None, rows=None) -> LegoBlock:
    """Build a LEGO block; ``m`` is the arity of repetition blocks.

    Repetition blocks treat their last leg as the logical leg.  ``rows`` is
    only used by ``LegoKind.PCM``.
    """
    kind = LegoKind(kind)
    if kind in (LegoKind.BITFLIP_REP, LegoKind.PHASEFLIP_REP):
        if m is None or m < 2:
            raise ContractViolation(f"{kind.value} needs arity m >= 2, got {m}")
        if kind is LegoKind.BITFLIP_REP:
            strings = _repetition(m, "Z", "X")
        else:
            strings = _repetition(m, "X", "Z")
        roles = (LegRole.PHYSICAL,) * (m - 1) + (LegRole.LOGICAL,)
        return LegoBlock(kind, ParityCheckMatrix.from_strings(strings), roles, m=m)
    if m is not None:
        raise ContractViolation(f"{kind.value} has fixed arity")
    if kind is LegoKind.ID_STOPPER:
        return LegoBlock(kind, ParityCheckMatrix(1, ()), (LegRole.PHYSICAL,))
    if kind is LegoKind.PCM:
        if rows is None:
            raise ContractViolation("pcm block needs rows")
        rows = tuple(rows)
        pcm = ParityCheckMatrix.from_strings(rows, None if rows else 0)
        return LegoBlock(kind, pcm, (LegRole.PHYSICAL,) * pcm.n, rows=rows)
    strings = _FIXED_ROWS[kind]
    pcm = ParityCheckMatrix.from_strings(strings)
    if kind is LegoKind.ENC_602_PERFECT or kind is LegoKind.ENC_603:
        roles = (LegRole.PHYSICAL,) * 5 + (LegRole.LOGICAL,)
    elif kind is LegoKind.SUB_512:
        roles = (LegRole.PHYSICAL,) * 4 + (LegRole.LOGICAL,)
    else:
        roles = (LegRole.PHYSICAL,) * pcm.n
    return LegoBlock(kind, pcm, roles)


def pcm_block(rows: list[str], n: int | None = None) -> LegoBlock:
    if not rows:
        pcm = ParityCheckMatrix(n or 0, ())
        return LegoBlock(LegoKind.PCM, pcm, (LegRole.PHYSICAL,) * pcm.n, rows=())
    return make_lego(LegoKind.PCM, rows=rows)


def parse_kind(label: str) -> tuple[LegoKind, int | None]:
    """Parse CLI identifiers such as ``bitflip_rep:3`` or ``bell``."""
    name, _, arity = label.strip().lower().partition(":")
    return LegoKind(name), (int(arity) if arity else None)


def cap_legs(pcm: ParityCheckMatrix, caps: dict[int, LegoKind]) -> ParityCheckMatrix:
    """Trace stopper states onto the given legs and drop those legs."""
    out = pcm
    # highest leg first so lower leg indices stay valid
    for leg in sorted(caps, reverse=True):
        stopper = make_lego(caps[leg]).pcm
        joined = tensor_product(out, stopper)
        out = self_trace(joined, leg, out.n)
    return reduced(out)
