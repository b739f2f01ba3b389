"""Scalar and tensor weight enumerators, sparse contraction and MacWilliams.

Tensor entries store their polynomial Kronecker-packed into one Python int:
coefficient ``w`` sits in bits ``[w*slot, (w+1)*slot)``.  Products and sums
then become single big-int operations.  ``slot`` is kept wider than the
log2 of the total coefficient mass, so no slot can ever overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .network import TensorNetwork
from .schedule import ContractionTree
from .symplectic import (
    DEFAULT_ENUMERATION_CAP,
    ContractViolation,
    ParityCheckMatrix,
    ResourceLimitError,
    _even_mask,
    _iter_span,
    _reduce_rows,
    extract_legs,
    packed_weight,
    rank,
    restrict,
    self_trace_rows,
    trace_rows,
)


class NotACodeEnumerator(ContractViolation):
    """Input polynomial cannot be the A-enumerator of a stabilizer code."""


class StateHasNoDistance(ContractViolation):
    """A == B: the code encodes no logical qubit."""


# -- polynomials --------------------------------------------------------------


class WeightPolynomial:
    """Sparse integer polynomial in z; immutable."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        for w, a in (coeffs or {}).items():
            w, a = int(w), int(a)
            if w < 0:
                raise ContractViolation(f"negative degree {w}")
            if a:
                c[w] = a
        self._c = dict(sorted(c.items()))

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "WeightPolynomial":
        return cls({w: a for w, a in enumerate(values)})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def __getitem__(self, w: int) -> int:
        return self._c.get(w, 0)

    @property
    def degree(self) -> int:
        return max(self._c, default=0)

    def to_list(self, length: int | None = None) -> list[int]:
        size = self.degree + 1 if length is None else length
        out = [0] * size
        for w, a in self._c.items():
            out[w] = a
        return out

    def total(self) -> int:
        return sum(self._c.values())

    def __add__(self, other: "WeightPolynomial") -> "WeightPolynomial":
        c = dict(self._c)
        for w, a in other._c.items():
            c[w] = c.get(w, 0) + a
        return WeightPolynomial(c)

    def __mul__(self, other: "WeightPolynomial") -> "WeightPolynomial":
        c: dict[int, int] = {}
        for w1, a1 in self._c.items():
            for w2, a2 in other._c.items():
                c[w1 + w2] = c.get(w1 + w2, 0) + a1 * a2
        return WeightPolynomial(c)

    def __eq__(self, other) -> bool:
        if isinstance(other, WeightPolynomial):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def __repr__(self) -> str:
        return f"WeightPolynomial({self._c})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for w, a in self._c.items():
            if w == 0:
                terms.append(str(a))
            else:
                mono = "z" if w == 1 else f"z^{w}"
                terms.append(mono if a == 1 else f"{a}{mono}")
        return " + ".join(terms)

    def to_json(self, n: int | None = None, k: int | None = None) -> dict:
        out: dict = {"coeffs": {str(w): a for w, a in self._c.items()}}
        if n is not None:
            out["n"] = n
        if k is not None:
            out["k"] = k
        return out

    @classmethod
    def from_json(cls, data: dict) -> "WeightPolynomial":
        return cls({int(w): a for w, a in data["coeffs"].items()})


def _pack(values: Sequence[int], slot: int) -> int:
    p = 0
    for w in range(len(values) - 1, -1, -1):
        p = (p << slot) | values[w]
    return p


def _unpack(p: int, slot: int) -> list[int]:
    mask = (1 << slot) - 1
    out = []
    while p:
        out.append(p & mask)
        p >>= slot
    return out


def _slot_for(bound_bits: int) -> int:
    # one spare bit, rounded up so repacking is rare
    return ((bound_bits + 1) // 16 + 1) * 16


# -- tensor enumerators ---------------------------------------------------------


@dataclass(frozen=True)
class TensorWEP:
    """Sparse tensor enumerator over ``open_legs``.

    ``entries`` maps a packed Pauli on the open legs (leg order of
    ``open_legs``) to a Kronecker-packed polynomial.  ``pcm`` has the open
    legs as its first columns followed by ``closed_leg_count`` closed legs.
    ``bound_bits`` bounds log2 of the total coefficient mass.
    """

    open_legs: tuple[Hashable, ...]
    entries: dict[int, int]
    pcm: ParityCheckMatrix
    closed_leg_count: int
    slot: int
    bound_bits: int

    def __post_init__(self):
        if len(set(self.open_legs)) != len(self.open_legs):
            raise ContractViolation("duplicate open leg identities")
        if self.pcm.n != len(self.open_legs) + self.closed_leg_count:
            raise ContractViolation("pcm width does not match open + closed legs")

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def polynomial(self, key: int) -> WeightPolynomial:
        return WeightPolynomial.from_list(_unpack(self.entries.get(key, 0), self.slot))

    def items(self) -> list[tuple[int, WeightPolynomial]]:
        return [(k, self.polynomial(k)) for k in sorted(self.entries)]

    def scalar(self) -> WeightPolynomial:
        if self.open_legs:
            raise ContractViolation(f"tensor still has {len(self.open_legs)} open legs")
        return self.polynomial(0)

    def total(self) -> int:
        return sum(sum(_unpack(p, self.slot)) for p in self.entries.values())

    def repacked(self, slot: int) -> "TensorWEP":
        if slot == self.slot:
            return self
        entries = {k: _pack(_unpack(p, self.slot), slot) for k, p in self.entries.items()}
        return TensorWEP(self.open_legs, entries, self.pcm, self.closed_leg_count, slot, self.bound_bits)


def brute_force_tensor_wep(
    H: ParityCheckMatrix,
    open_legs: Sequence[int] = (),
    identities: Sequence[Hashable] | None = None,
    slot: int | None = None,
    cap_log2: int = DEFAULT_ENUMERATION_CAP,
) -> TensorWEP:
    """Enumerate row(H); key on ``open_legs``, z-weight on the other legs."""
    open_legs = list(open_legs)
    if len(set(open_legs)) != len(open_legs) or any(not 0 <= j < H.n for j in open_legs):
        raise ContractViolation(f"bad open legs {open_legs} for {H.n} legs")
    if identities is None:
        identities = tuple(open_legs)
    if len(identities) != len(open_legs):
        raise ContractViolation("one identity per open leg required")
    gens = _reduce_rows(H.rows, 2 * H.n)
    if len(gens) > cap_log2:
        raise ResourceLimitError(f"group of order 2^{len(gens)} exceeds cap 2^{cap_log2}")
    r = len(gens)
    if slot is None:
        slot = _slot_for(r)
    elif slot <= r:
        raise ContractViolation(f"slot {slot} too narrow for 2^{r} elements")
    open_mask = 0
    for j in open_legs:
        open_mask |= 3 << (2 * j)
    closed_mask = ((1 << (2 * H.n)) - 1) & ~open_mask
    entries: dict[int, int] = {}
    for v in _iter_span(gens):
        key = extract_legs(v, open_legs)
        entries[key] = entries.get(key, 0) + (1 << (slot * packed_weight(v & closed_mask)))
    closed = [j for j in range(H.n) if j not in set(open_legs)]
    order = open_legs + closed
    pcm = ParityCheckMatrix(H.n, tuple(extract_legs(g, order) for g in gens))
    return TensorWEP(tuple(identities), dict(sorted(entries.items())), pcm, len(closed), slot, r)


def _align(T1: TensorWEP, T2: TensorWEP) -> tuple[TensorWEP, TensorWEP]:
    need = _slot_for(T1.bound_bits + T2.bound_bits)
    if T1.slot > T1.bound_bits + T2.bound_bits and T1.slot == T2.slot:
        return T1, T2
    slot = max(need, T1.slot, T2.slot)
    return T1.repacked(slot), T2.repacked(slot)


def _reorder_pcm(rows: list[int], n: int, order: list[int]) -> ParityCheckMatrix:
    return ParityCheckMatrix(n, tuple(extract_legs(r, order) for r in rows))


def wep_trace(
    T1: TensorWEP, T2: TensorWEP, pairs: Iterable[tuple[Hashable, Hashable]]
) -> tuple[TensorWEP, int]:
    """Contract open legs of ``T1`` with open legs of ``T2``.

    Only key pairs agreeing on every joined leg meet; each such meeting is
    one polynomial multiplication and is counted.  The larger tensor is
    indexed by its joined-leg key and the smaller one probes it.
    """
    pairs = list(pairs)
    overlap = set(T1.open_legs) & set(T2.open_legs)
    pos1 = {leg: i for i, leg in enumerate(T1.open_legs)}
    pos2 = {leg: i for i, leg in enumerate(T2.open_legs)}
    try:
        j1 = [pos1[a] for a, _ in pairs]
        j2 = [pos2[b] for _, b in pairs]
    except KeyError as exc:
        raise ContractViolation(f"trace pair names a leg that is not open: {exc}") from None
    if len(set(j1)) != len(j1) or len(set(j2)) != len(j2):
        raise ContractViolation("a leg appears in two trace pairs")
    if overlap - {a for a, _ in pairs} - {b for _, b in pairs}:
        raise ContractViolation(f"overlapping leg identities {sorted(overlap, key=str)}")
    T1, T2 = _align(T1, T2)
    slot = T1.slot
    s1, s2 = set(j1), set(j2)
    rest1 = [i for i in range(len(T1.open_legs)) if i not in s1]
    rest2 = [i for i in range(len(T2.open_legs)) if i not in s2]
    shift = 2 * len(rest1)

    small, big = (T1, T2) if T1.nnz <= T2.nnz else (T2, T1)
    js, jb = (j1, j2) if small is T1 else (j2, j1)
    rs, rb = (rest1, rest2) if small is T1 else (rest2, rest1)
    index: dict[int, list[tuple[int, int]]] = {}
    for k, p in big.entries.items():
        index.setdefault(extract_legs(k, jb), []).append((extract_legs(k, rb), p))
    acc: dict[int, int] = {}
    mults = 0
    for k, p in small.entries.items():
        matches = index.get(extract_legs(k, js))
        if not matches:
            continue
        rk = extract_legs(k, rs)
        for rk2, p2 in matches:
            key = (rk | (rk2 << shift)) if small is T1 else (rk2 | (rk << shift))
            acc[key] = acc.get(key, 0) + p * p2
            mults += 1

    n1, n2 = T1.pcm.n, T2.pcm.n
    rows = trace_rows(T1.pcm.rows, n1, T2.pcm.rows, n2, list(zip(j1, j2)))
    # trace output columns: T1 rest open, T1 closed, T2 rest open, T2 closed
    o1, c1, o2, c2 = len(rest1), T1.closed_leg_count, len(rest2), T2.closed_leg_count
    order = (
        list(range(o1))
        + list(range(o1 + c1, o1 + c1 + o2))
        + list(range(o1, o1 + c1))
        + list(range(o1 + c1 + o2, o1 + c1 + o2 + c2))
    )
    n = o1 + c1 + o2 + c2
    pcm = _reorder_pcm(rows, n, order)
    legs = tuple(T1.open_legs[i] for i in rest1) + tuple(T2.open_legs[i] for i in rest2)
    out = TensorWEP(legs, dict(sorted(acc.items())), pcm, c1 + c2, slot, T1.bound_bits + T2.bound_bits)
    return out, mults


def wep_product(T1: TensorWEP, T2: TensorWEP) -> TensorWEP:
    """Outer product: keys concatenate and polynomials multiply."""
    if set(T1.open_legs) & set(T2.open_legs):
        raise ContractViolation("tensor product of tensors sharing leg identities")
    return wep_trace(T1, T2, [])[0]


def wep_self_trace(T: TensorWEP, a: Hashable, b: Hashable) -> tuple[TensorWEP, int]:
    """Join two open legs of one tensor; returns (tensor, accumulations)."""
    pos = {leg: i for i, leg in enumerate(T.open_legs)}
    if a == b or a not in pos or b not in pos:
        raise ContractViolation(f"self-trace needs two distinct open legs, got {a!r}, {b!r}")
    ia, ib = pos[a], pos[b]
    rest = [i for i in range(len(T.open_legs)) if i not in (ia, ib)]
    acc: dict[int, int] = {}
    adds = 0
    for k, p in T.entries.items():
        if (k >> (2 * ia)) & 3 != (k >> (2 * ib)) & 3:
            continue
        key = extract_legs(k, rest)
        acc[key] = acc.get(key, 0) + p
        adds += 1
    rows = self_trace_rows(T.pcm.rows, T.pcm.n, ia, ib)
    pcm = ParityCheckMatrix(T.pcm.n - 2, tuple(rows))
    legs = tuple(T.open_legs[i] for i in rest)
    return TensorWEP(legs, dict(sorted(acc.items())), pcm, T.closed_leg_count, T.slot, T.bound_bits), adds


# -- network contraction ------------------------------------------------------


@dataclass(frozen=True)
class DensityRecord:
    open_leg_count: int
    nnz: int

    def __post_init__(self):
        if not 0 < self.nnz <= 4**self.open_leg_count:
            raise ContractViolation(f"nnz {self.nnz} outside (0, 4^{self.open_leg_count}]")

    @property
    def density(self) -> Fraction:
        return Fraction(self.nnz, 4**self.open_leg_count)

    @property
    def decimal(self) -> float:
        return self.nnz / 4**self.open_leg_count


def leaf_tensor(net: TensorNetwork, node_id: int, slot: int | None = None) -> TensorWEP:
    node = net.nodes[node_id]
    legs = net.edge_legs[node_id]
    return brute_force_tensor_wep(
        node.pcm, [node.column(leg) for leg in legs], [(node_id, leg) for leg in legs], slot
    )


def contract_network(
    net: TensorNetwork, tree: ContractionTree
) -> tuple[WeightPolynomial, int, list[DensityRecord]]:
    """Fold ``tree`` over the network; returns (A, multiplications, densities)."""
    net.require_connected()
    tree.validate(net)
    bound = sum(rank(node.pcm) for node in net.nodes)
    slot = _slot_for(bound)
    records: list[DensityRecord] = []
    total = 0

    def fold(t) -> TensorWEP:
        nonlocal total
        if isinstance(t, int):
            return leaf_tensor(net, t, slot)
        left, right = fold(t[0]), fold(t[1])
        pairs = [(ep, net.partner[ep]) for ep in left.open_legs if net.partner[ep] in set(right.open_legs)]
        if not pairs:
            raise ContractViolation("merge with no crossing edges")
        out, mults = wep_trace(left, right, pairs)
        total += mults
        records.append(DensityRecord(len(out.open_legs), out.nnz))
        return out

    root = fold(tree.root)
    if not records:
        records.append(DensityRecord(len(root.open_legs), root.nnz))
    values = _unpack(root.entries.get(0, 0), root.slot)
    if not values or values[0] == 0:
        raise ContractViolation("contraction produced no identity term; network is inconsistent")
    excess = values[0]
    if excess > 1:
        if any(v % excess for v in values):
            raise ContractViolation(f"coefficients not divisible by loop excess {excess}")
        values = [v // excess for v in values]
    return WeightPolynomial.from_list(values), total, records


# -- brute force and MacWilliams --------------------------------------------------


def _weights_numpy(gens: list[int], n: int) -> list[int]:
    counts = np.zeros(n + 1, dtype=np.int64)
    low_n = min(len(gens), 16)
    low, high = gens[:low_n], gens[low_n:]
    table = np.zeros(1, dtype=np.uint64)
    for g in low:
        table = np.concatenate([table, table ^ np.uint64(g)])
    even = np.uint64(_even_mask(n))
    one = np.uint64(1)
    for h in _iter_span(high):
        v = table ^ np.uint64(h)
        w = np.bitwise_count((v | (v >> one)) & even)
        counts += np.bincount(w, minlength=n + 1)
    return [int(c) for c in counts]


def brute_force_wep(H: ParityCheckMatrix, cap_log2: int = DEFAULT_ENUMERATION_CAP) -> WeightPolynomial:
    """Count the elements of row(H) by Pauli weight."""
    gens = _reduce_rows(H.rows, 2 * H.n)
    if len(gens) > cap_log2:
        raise ResourceLimitError(
            f"brute force needs 2^{len(gens)} elements, above cap 2^{cap_log2}"
        )
    if H.n <= 32 and hasattr(np, "bitwise_count"):
        return WeightPolynomial.from_list(_weights_numpy(gens, H.n))
    counts = [0] * (H.n + 1)
    for v in _iter_span(gens):
        counts[packed_weight(v)] += 1
    return WeightPolynomial.from_list(counts)


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_pow(base: list[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, base)
    return out


def _transform(P: WeightPolynomial, n: int) -> list[int]:
    """sum_w P_w (1 - z)^w (1 + 3z)^(n - w), exact integers."""
    if P.degree > n:
        raise NotACodeEnumerator(f"degree {P.degree} exceeds n = {n}")
    out = [0] * (n + 1)
    for w, a in P.coeffs.items():
        term = _poly_mul(_poly_pow([1, -1], w), _poly_pow([1, 3], n - w))
        for i, c in enumerate(term):
            out[i] += a * c
    return out


def _exact_scale(values: list[int], log2_div: int) -> WeightPolynomial:
    d = 1 << log2_div
    if any(v % d for v in values):
        raise NotACodeEnumerator(f"MacWilliams sum not divisible by 2^{log2_div}")
    scaled = [v // d for v in values]
    if any(v < 0 for v in scaled):
        raise NotACodeEnumerator("MacWilliams transform has a negative coefficient")
    return WeightPolynomial.from_list(scaled)


def macwilliams_B(A: WeightPolynomial, n: int, k: int) -> WeightPolynomial:
    """Normalizer enumerator from the stabilizer enumerator."""
    if not 0 <= k <= n:
        raise ContractViolation(f"need 0 <= k <= n, got n={n}, k={k}")
    if A[0] != 1 or A.total() != 1 << (n - k):
        raise NotACodeEnumerator(f"A is not an [[{n},{k}]] stabilizer enumerator: {A}")
    return _exact_scale(_transform(A, n), n - k)


def macwilliams_A(B: WeightPolynomial, n: int, k: int) -> WeightPolynomial:
    """Inverse transform; recovers A from B."""
    if B.total() != 1 << (n + k):
        raise NotACodeEnumerator(f"B does not sum to 2^(n+k) for [[{n},{k}]]")
    return _exact_scale(_transform(B, n), n + k)


def distance(A: WeightPolynomial, B: WeightPolynomial) -> int:
    """Smallest degree where B exceeds A."""
    top = max(A.degree, B.degree)
    for w in range(top + 1):
        if B[w] < A[w]:
            raise NotACodeEnumerator(f"B_{w} = {B[w]} < A_{w} = {A[w]}")
    for w in range(top + 1):
        if B[w] > A[w]:
            return w
    raise StateHasNoDistance("A == B: stabilizer state, no logical distance")


def nnz_count(H: ParityCheckMatrix, J: Sequence[int]) -> int:
    return 1 << rank(restrict(H, J))
