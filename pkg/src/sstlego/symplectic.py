"""GF(2) symplectic linear algebra on bit-packed Pauli rows.

Rows are Python ints with an interleaved layout: leg ``i`` owns bit ``2*i``
(X part) and bit ``2*i + 1`` (Z part).  Phases are never tracked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

X, Z = "X", "Z"

_PAULI_CODE = {"I": 0, "X": 1, "Z": 2, "Y": 3}
_PAULI_CHAR = "IXZY"

DEFAULT_ENUMERATION_CAP = 28


class ContractViolation(ValueError):
    """An operation was called with arguments outside its contract."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size cap."""


def _even_mask(n: int) -> int:
    return int("01" * n, 2) if n else 0


def _swap_xz(v: int, n: int) -> int:
    even = _even_mask(n)
    return ((v & even) << 1) | ((v >> 1) & even)


_EVEN_4096 = _even_mask(2048)


def packed_weight(v: int) -> int:
    """Number of legs carrying a non-identity Pauli."""
    if v.bit_length() <= 4096:
        return ((v | (v >> 1)) & _EVEN_4096).bit_count()
    return ((v | (v >> 1)) & _even_mask((v.bit_length() + 1) // 2)).bit_count()


def packed_commutes(u: int, v: int, n: int) -> bool:
    return (u & _swap_xz(v, n)).bit_count() % 2 == 0


def leg_value(v: int, leg: int) -> int:
    """Two-bit Pauli code (0=I, 1=X, 2=Z, 3=Y) on one leg."""
    return (v >> (2 * leg)) & 3


def extract_legs(v: int, legs: Sequence[int]) -> int:
    out = 0
    for j, leg in enumerate(legs):
        out |= ((v >> (2 * leg)) & 3) << (2 * j)
    return out


@dataclass(frozen=True)
class PauliOp:
    n: int
    x_bits: int
    z_bits: int

    def __post_init__(self):
        if self.x_bits >> self.n or self.z_bits >> self.n:
            raise ContractViolation(f"bits exceed {self.n} legs")

    @classmethod
    def from_string(cls, s: str) -> "PauliOp":
        x = z = 0
        for i, ch in enumerate(s.strip().upper()):
            code = _PAULI_CODE[ch]
            x |= (code & 1) << i
            z |= (code >> 1) << i
        return cls(len(s.strip()), x, z)

    @classmethod
    def from_packed(cls, v: int, n: int) -> "PauliOp":
        x = z = 0
        for i in range(n):
            c = (v >> (2 * i)) & 3
            x |= (c & 1) << i
            z |= (c >> 1) << i
        return cls(n, x, z)

    def packed(self) -> int:
        v = 0
        for i in range(self.n):
            v |= (((self.x_bits >> i) & 1) | (((self.z_bits >> i) & 1) << 1)) << (2 * i)
        return v

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    def __str__(self) -> str:
        return "".join(
            _PAULI_CHAR[((self.x_bits >> i) & 1) | (((self.z_bits >> i) & 1) << 1)]
            for i in range(self.n)
        )


def pauli_string(v: int, n: int) -> str:
    return "".join(_PAULI_CHAR[(v >> (2 * i)) & 3] for i in range(n))


def symplectic_commutes(p: PauliOp, q: PauliOp) -> bool:
    if p.n != q.n:
        raise ContractViolation(f"leg count mismatch: {p.n} != {q.n}")
    return ((p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()) % 2 == 0


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Ordered Pauli rows over ``n`` legs, stored bit-packed."""

    n: int
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        limit = 1 << (2 * self.n)
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ContractViolation(f"row {r:#x} does not fit {self.n} legs")

    @classmethod
    def from_strings(cls, rows: Sequence[str], n: int | None = None) -> "ParityCheckMatrix":
        rows = [r.strip() for r in rows]
        if n is None:
            n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise ContractViolation("ragged Pauli rows")
        return cls(n, tuple(PauliOp.from_string(r).packed() for r in rows))

    @classmethod
    def from_paulis(cls, ops: Sequence[PauliOp], n: int | None = None) -> "ParityCheckMatrix":
        if n is None:
            n = ops[0].n if ops else 0
        if any(p.n != n for p in ops):
            raise ContractViolation("ragged Pauli rows")
        return cls(n, tuple(p.packed() for p in ops))

    @property
    def paulis(self) -> list[PauliOp]:
        return [PauliOp.from_packed(r, self.n) for r in self.rows]

    def to_strings(self) -> list[str]:
        return [pauli_string(r, self.n) for r in self.rows]

    def is_commuting(self) -> bool:
        rows = self.rows
        return all(
            packed_commutes(rows[i], rows[j], self.n)
            for i in range(len(rows))
            for j in range(i + 1, len(rows))
        )

    def __len__(self) -> int:
        return len(self.rows)

    def __str__(self) -> str:
        return "\n".join(self.to_strings()) if self.rows else f"<{self.n}-leg trivial group>"


def column_bit(leg: int, kind: str) -> int:
    return 2 * leg + (kind == Z)


def _eliminate(rows: list[int], bits: Sequence[int], start: int = 0) -> tuple[int, dict[int, int | None]]:
    """In-place Gauss-Jordan on the given bit columns; returns (next free row, pivots)."""
    pivots: dict[int, int | None] = {}
    r = start
    for b in bits:
        mask = 1 << b
        p = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if p is None:
            pivots[b] = None
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot_row = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= pivot_row
        pivots[b] = r
        r += 1
    return r, pivots


def gauss_eliminate(
    H: ParityCheckMatrix, columns: Sequence[tuple[int, str]]
) -> tuple[ParityCheckMatrix, dict[tuple[int, str], int | None]]:
    """Reduced row echelon form restricted to ``columns``, processed in order.

    Returns the new matrix and a map from each column to its pivot row
    (``None`` when the column has no pivot).  Row space is unchanged.
    """
    for leg, _ in columns:
        if not 0 <= leg < H.n:
            raise ContractViolation(f"leg {leg} out of range for {H.n} legs")
    rows = list(H.rows)
    _, piv = _eliminate(rows, [column_bit(leg, kind) for leg, kind in columns])
    return (
        ParityCheckMatrix(H.n, tuple(rows)),
        {col: piv[column_bit(*col)] for col in columns},
    )


def _reduce_rows(rows: Sequence[int], nbits: int) -> list[int]:
    """Full RREF over all columns, zero rows dropped."""
    work = [r for r in rows if r]
    rank = 0
    for b in range(nbits):
        if rank == len(work):
            break
        mask = 1 << b
        p = next((i for i in range(rank, len(work)) if work[i] & mask), None)
        if p is None:
            continue
        work[rank], work[p] = work[p], work[rank]
        pr = work[rank]
        for i in range(len(work)):
            if i != rank and work[i] & mask:
                work[i] ^= pr
        rank += 1
    return work[:rank]


def rank_of_rows(rows: Sequence[int]) -> int:
    """GF(2) rank of packed rows via an xor basis keyed by leading bit."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
    return len(basis)


def rank(H: ParityCheckMatrix) -> int:
    return rank_of_rows(H.rows)


def reduced(H: ParityCheckMatrix) -> ParityCheckMatrix:
    return ParityCheckMatrix(H.n, tuple(_reduce_rows(H.rows, 2 * H.n)))


def tensor_product(H1: ParityCheckMatrix, H2: ParityCheckMatrix) -> ParityCheckMatrix:
    shift = 2 * H1.n
    return ParityCheckMatrix(H1.n + H2.n, H1.rows + tuple(r << shift for r in H2.rows))


def restrict(H: ParityCheckMatrix, J: Sequence[int]) -> ParityCheckMatrix:
    if len(set(J)) != len(J):
        raise ContractViolation(f"duplicate legs in {list(J)}")
    for leg in J:
        if not 0 <= leg < H.n:
            raise ContractViolation(f"leg {leg} out of range for {H.n} legs")
    return ParityCheckMatrix(len(J), tuple(extract_legs(r, J) for r in H.rows))


def _drop_legs(v: int, n: int, drop: set[int]) -> int:
    out = 0
    j = 0
    for i in range(n):
        if i in drop:
            continue
        out |= ((v >> (2 * i)) & 3) << (2 * j)
        j += 1
    return out


def _first_nonzero(rows: Sequence[int], b: int) -> int | None:
    return next((i for i, v in enumerate(rows) if (v >> b) & 1), None)


def _match_pair(rows: list[int], bit_a: int, bit_b: int) -> list[int]:
    """Keep the subspace of rows agreeing on two bit columns."""
    _eliminate(rows, [bit_a, bit_b])
    p1, p2 = _first_nonzero(rows, bit_a), _first_nonzero(rows, bit_b)
    if p1 == p2:
        return rows
    if p1 is None:
        del rows[p2]
    elif p2 is None:
        del rows[p1]
    else:
        rows[p2] ^= rows[p1]
        del rows[p1]
    return rows


def self_trace_rows(rows: Sequence[int], n: int, a: int, b: int) -> list[int]:
    """Row-level self trace; works for any row set, commuting or not."""
    work = list(rows)
    work = _match_pair(work, 2 * a, 2 * b)
    work = _match_pair(work, 2 * a + 1, 2 * b + 1)
    drop = {a, b}
    return _reduce_rows([_drop_legs(v, n, drop) for v in work], 2 * (n - 2))


def self_trace(H: ParityCheckMatrix, a: int, b: int) -> ParityCheckMatrix:
    """Project onto the Bell pair on legs ``a``/``b`` and remove both legs.

    The X columns are matched first (pivot rule: equal pivots keep, a lone
    pivot row is deleted, otherwise the first pivot row is folded into the
    second), then the Z columns, then the result is fully reduced.  The
    remaining legs keep their relative order.
    """
    if a == b:
        raise ContractViolation("cannot self-trace a leg with itself")
    for leg in (a, b):
        if not 0 <= leg < H.n:
            raise ContractViolation(f"leg {leg} out of range for {H.n} legs")
    return ParityCheckMatrix(H.n - 2, tuple(self_trace_rows(H.rows, H.n, a, b)))


def trace_rows(
    rows1: Sequence[int], n1: int, rows2: Sequence[int], n2: int, pairs: Sequence[tuple[int, int]]
) -> list[int]:
    """Tensor two row sets and trace ``pairs``; legs of side 1 then side 2 remain."""
    shift = 2 * n1
    work = list(rows1) + [r << shift for r in rows2]
    n = n1 + n2
    for a, b in pairs:
        work = _match_pair(work, 2 * a, 2 * (n1 + b))
        work = _match_pair(work, 2 * a + 1, 2 * (n1 + b) + 1)
    drop = {a for a, _ in pairs} | {n1 + b for _, b in pairs}
    return _reduce_rows([_drop_legs(v, n, drop) for v in work], 2 * (n - len(drop)))


def trace(
    H1: ParityCheckMatrix, H2: ParityCheckMatrix, pairs: Sequence[tuple[int, int]]
) -> ParityCheckMatrix:
    """Join legs of ``H1`` to legs of ``H2`` pairwise and return the traced PCM."""
    if not pairs:
        raise ContractViolation("trace needs at least one leg pair")
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise ContractViolation(f"repeated legs in pairs {list(pairs)}")
    if any(not 0 <= a < H1.n for a in left) or any(not 0 <= b < H2.n for b in right):
        raise ContractViolation(f"pair leg out of range: {list(pairs)}")
    rows = trace_rows(H1.rows, H1.n, H2.rows, H2.n, pairs)
    return ParityCheckMatrix(H1.n + H2.n - 2 * len(pairs), tuple(rows))


def row_space_equal(H1: ParityCheckMatrix, H2: ParityCheckMatrix) -> bool:
    if H1.n != H2.n:
        raise ContractViolation(f"leg count mismatch: {H1.n} != {H2.n}")
    return _reduce_rows(H1.rows, 2 * H1.n) == _reduce_rows(H2.rows, 2 * H2.n)


def enumerate_group(H: ParityCheckMatrix, cap_log2: int = DEFAULT_ENUMERATION_CAP) -> Iterator[PauliOp]:
    """All ``2**rank`` group elements, binary counter order over reduced rows."""
    gens = _reduce_rows(H.rows, 2 * H.n)
    if len(gens) > cap_log2:
        raise ResourceLimitError(f"group of order 2^{len(gens)} exceeds cap 2^{cap_log2}")
    for i in range(1 << len(gens)):
        v = 0
        for j, g in enumerate(gens):
            if (i >> j) & 1:
                v ^= g
        yield PauliOp.from_packed(v, H.n)


def _iter_span(gens: Sequence[int]) -> Iterator[int]:
    # Gray code walk: same set as the binary counter, one xor per step
    v = 0
    yield v
    for i in range(1, 1 << len(gens)):
        v ^= gens[(i & -i).bit_length() - 1]
        yield v


def span_elements(H: ParityCheckMatrix, cap_log2: int = DEFAULT_ENUMERATION_CAP) -> list[int]:
    gens = _reduce_rows(H.rows, 2 * H.n)
    if len(gens) > cap_log2:
        raise ResourceLimitError(f"group of order 2^{len(gens)} exceeds cap 2^{cap_log2}")
    return list(_iter_span(gens))


def normalizer(H: ParityCheckMatrix) -> ParityCheckMatrix:
    """Generators of all Paulis commuting with every row of ``H``."""
    n = H.n
    # kernel of v -> (<v, h_i>)_i: solve with the swapped rows as linear functionals
    funcs = [_swap_xz(r, n) for r in _reduce_rows(H.rows, 2 * n)]
    m = len(funcs)
    # columns of the system = the 2n bits; build row-echelon on the functional matrix
    work = list(funcs)
    pivot_cols = []
    r = 0
    for b in range(2 * n):
        mask = 1 << b
        p = next((i for i in range(r, m) if work[i] & mask), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        for i in range(m):
            if i != r and work[i] & mask:
                work[i] ^= work[r]
        pivot_cols.append(b)
        r += 1
    free = [b for b in range(2 * n) if b not in set(pivot_cols)]
    basis = []
    for f in free:
        v = 1 << f
        for i, pc in enumerate(pivot_cols):
            if (work[i] >> f) & 1:
                v |= 1 << pc
        basis.append(v)
    return ParityCheckMatrix(n, tuple(_reduce_rows(basis, 2 * n)))
