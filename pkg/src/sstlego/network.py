"""Tensor-network graph model, whole-network PCM and code ingestion."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .lego import STOPPERS, LegoBlock, LegoKind, cap_legs, make_lego, pcm_block
from .symplectic import (
    ContractViolation,
    ParityCheckMatrix,
    extract_legs,
    packed_commutes,
    pauli_string,
    rank,
    row_space_equal,
    tensor_product,
    trace,
)

Endpoint = tuple[int, int]  # (node id, original leg index)
Edge = tuple[Endpoint, Endpoint]


class CodeFormatError(ValueError):
    """Malformed or invalid PCM text."""


@dataclass(frozen=True)
class Node:
    """A LEGO instance, optionally with some legs capped by stoppers.

    Capped legs are traced away at construction; ``legs`` lists the
    remaining original leg indices, which is also the column order of
    ``pcm``.
    """

    id: int
    lego: LegoBlock
    caps: tuple[tuple[int, LegoKind], ...] = ()

    @cached_property
    def legs(self) -> tuple[int, ...]:
        capped = {leg for leg, _ in self.caps}
        return tuple(i for i in range(self.lego.n_legs) if i not in capped)

    @cached_property
    def pcm(self) -> ParityCheckMatrix:
        if not self.caps:
            return self.lego.pcm
        return cap_legs(self.lego.pcm, dict(self.caps))

    def column(self, leg: int) -> int:
        try:
            return self.legs.index(leg)
        except ValueError:
            raise ContractViolation(f"node {self.id} has no open leg {leg}") from None


def make_node(node_id: int, kind, m: int | None = None, caps: dict | None = None, rows=None) -> Node:
    if kind == LegoKind.PCM or kind == "pcm":
        lego = pcm_block(list(rows or []), None)
    else:
        lego = make_lego(kind, m)
    cap_items = tuple(sorted((int(k), LegoKind(v)) for k, v in (caps or {}).items()))
    for leg, stopper in cap_items:
        if stopper not in STOPPERS:
            raise ContractViolation(f"cap on leg {leg} must be a stopper, got {stopper}")
        if not 0 <= leg < lego.n_legs:
            raise ContractViolation(f"cap leg {leg} out of range for {lego.label}")
    return Node(node_id, lego, cap_items)


@dataclass(frozen=True)
class TensorNetwork:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for i, node in enumerate(self.nodes):
            if node.id != i:
                raise ContractViolation(f"node ids must be 0..N-1 in order, got {node.id} at {i}")
        seen: set[Endpoint] = set()
        for a, b in self.edges:
            if a[0] == b[0]:
                raise ContractViolation(f"self-loop on node {a[0]}")
            for node_id, leg in (a, b):
                if not 0 <= node_id < len(self.nodes):
                    raise ContractViolation(f"edge endpoint on unknown node {node_id}")
                self.nodes[node_id].column(leg)
                if (node_id, leg) in seen:
                    raise ContractViolation(f"leg {(node_id, leg)} used by two edges")
                seen.add((node_id, leg))

    @classmethod
    def build(cls, nodes: Sequence[Node], edges: Iterable[Edge], name: str = "") -> "TensorNetwork":
        norm = sorted(tuple(sorted(e)) for e in edges)
        return cls(tuple(nodes), tuple(norm), name)

    def __len__(self) -> int:
        return len(self.nodes)

    @cached_property
    def edge_legs(self) -> tuple[tuple[int, ...], ...]:
        """Per node, its edge-connected legs in leg order."""
        per = [set() for _ in self.nodes]
        for a, b in self.edges:
            per[a[0]].add(a[1])
            per[b[0]].add(b[1])
        return tuple(tuple(leg for leg in n.legs if leg in per[n.id]) for n in self.nodes)

    @cached_property
    def dangling(self) -> tuple[Endpoint, ...]:
        """Legs in no edge, canonical order: node order, then leg index."""
        out = []
        for node, used in zip(self.nodes, self.edge_legs):
            out.extend((node.id, leg) for leg in node.legs if leg not in used)
        return tuple(out)

    @cached_property
    def partner(self) -> dict[Endpoint, Endpoint]:
        out = {}
        for a, b in self.edges:
            out[a] = b
            out[b] = a
        return out

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj = [set() for _ in self.nodes]
        for a, b in self.edges:
            adj[a[0]].add(b[0])
            adj[b[0]].add(a[0])
        return tuple(frozenset(s) for s in adj)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for start in range(len(self.nodes)):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adjacency[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def require_connected(self) -> None:
        comps = self.components()
        if len(comps) > 1:
            raise ContractViolation(f"network is disconnected; components: {comps}")

    def crossing_pairs(self, left: Iterable[int], right: Iterable[int]) -> list[Edge]:
        """Edges from the ``left`` node set to the ``right`` node set, left endpoint first."""
        lset, rset = set(left), set(right)
        out = []
        for a, b in self.edges:
            if a[0] in lset and b[0] in rset:
                out.append((a, b))
            elif b[0] in lset and a[0] in rset:
                out.append((b, a))
        return sorted(out)


def network_pcm(net: TensorNetwork) -> ParityCheckMatrix:
    """Fold every node in node order; columns follow ``net.dangling``."""
    net.require_connected()
    legs: list[Endpoint] = []
    current = ParityCheckMatrix(0, ())
    for node in net.nodes:
        node_legs = [(node.id, leg) for leg in node.legs]
        pos = {ep: i for i, ep in enumerate(legs)}
        pairs = []
        for j, ep in enumerate(node_legs):
            other = net.partner.get(ep)
            if other is not None and other in pos:
                pairs.append((pos[other], j))
        if pairs:
            current = trace(current, node.pcm, pairs)
        else:
            current = tensor_product(current, node.pcm)
        joined_left = {p[0] for p in pairs}
        joined_right = {p[1] for p in pairs}
        legs = [ep for i, ep in enumerate(legs) if i not in joined_left] + [
            ep for j, ep in enumerate(node_legs) if j not in joined_right
        ]
    assert tuple(legs) == net.dangling
    return current


def absorb_stoppers(net: TensorNetwork) -> TensorNetwork:
    """Fold single-leg stopper nodes into the neighbour they are traced to."""
    stopper_of: dict[int, tuple[Endpoint, LegoKind]] = {}
    for node in net.nodes:
        if node.lego.kind in STOPPERS and not node.caps:
            other = net.partner.get((node.id, 0))
            if other is not None and net.nodes[other[0]].lego.kind not in STOPPERS:
                stopper_of[node.id] = (other, node.lego.kind)
    if not stopper_of:
        return net
    extra_caps: dict[int, dict[int, LegoKind]] = {}
    for endpoint, kind in stopper_of.values():
        extra_caps.setdefault(endpoint[0], {})[endpoint[1]] = kind
    remap: dict[int, int] = {}
    nodes = []
    for node in net.nodes:
        if node.id in stopper_of:
            continue
        remap[node.id] = len(nodes)
        caps = dict(node.caps)
        caps.update(extra_caps.get(node.id, {}))
        nodes.append(Node(len(nodes), node.lego, tuple(sorted(caps.items()))))
    edges = [
        ((remap[a[0]], a[1]), (remap[b[0]], b[1]))
        for a, b in net.edges
        if a[0] not in stopper_of and b[0] not in stopper_of
    ]
    return TensorNetwork.build(nodes, edges, net.name)


# -- serialization ---------------------------------------------------------


def _node_to_dict(node: Node) -> dict:
    params: dict = {}
    if node.lego.m is not None:
        params["m"] = node.lego.m
    if node.lego.kind is LegoKind.PCM:
        params["rows"] = list(node.lego.rows or ())
        params["n"] = node.lego.n_legs
    if node.caps:
        params["caps"] = {str(leg): kind.value for leg, kind in node.caps}
    return {"id": node.id, "kind": node.lego.kind.value, "params": params}


def network_to_dict(net: TensorNetwork) -> dict:
    return {
        "name": net.name,
        "nodes": [_node_to_dict(n) for n in net.nodes],
        "edges": [[{"node": a[0], "leg": a[1]}, {"node": b[0], "leg": b[1]}] for a, b in net.edges],
    }


def network_from_dict(data: dict) -> TensorNetwork:
    nodes = []
    for entry in data["nodes"]:
        params = entry.get("params", {}) or {}
        kind = LegoKind(entry["kind"])
        if kind is LegoKind.PCM:
            rows = params.get("rows", [])
            lego = pcm_block(rows, params.get("n"))
            caps = tuple(sorted((int(k), LegoKind(v)) for k, v in params.get("caps", {}).items()))
            nodes.append(Node(int(entry["id"]), lego, caps))
        else:
            nodes.append(make_node(int(entry["id"]), kind, params.get("m"), params.get("caps")))
    edges = [((e[0]["node"], e[0]["leg"]), (e[1]["node"], e[1]["leg"])) for e in data["edges"]]
    return TensorNetwork.build(nodes, edges, data.get("name", ""))


def dump_network(net: TensorNetwork, path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(net), indent=1) + "\n")


def load_network(path) -> TensorNetwork:
    return network_from_dict(json.loads(Path(path).read_text()))


# -- codes ---------------------------------------------------------------


@dataclass(frozen=True)
class CodeSpec:
    n: int
    k: int
    pcm: ParityCheckMatrix
    name: str = ""

    def __post_init__(self):
        if self.pcm.n != self.n:
            raise ContractViolation(f"pcm has {self.pcm.n} legs, code says n={self.n}")
        if rank(self.pcm) != self.n - self.k:
            raise ContractViolation(f"rank {rank(self.pcm)} != n-k = {self.n - self.k}")

    @classmethod
    def from_pcm(cls, pcm: ParityCheckMatrix, name: str = "") -> "CodeSpec":
        return cls(pcm.n, pcm.n - rank(pcm), pcm, name)


def parse_pcm_text(text: str) -> ParityCheckMatrix:
    """Parse Pauli-string (``XZZXI``) or symplectic (``10010|01100``) rows."""
    rows: list[int] = []
    n: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "|" in line:
            xs, _, zs = (part.strip() for part in line.partition("|"))
            if len(xs) != len(zs) or set(xs + zs) - {"0", "1"}:
                raise CodeFormatError(f"line {lineno}: bad symplectic row {line!r}")
            width = len(xs)
            v = 0
            for i in range(width):
                v |= (int(xs[i]) | (int(zs[i]) << 1)) << (2 * i)
        else:
            word = line.replace(" ", "").upper()
            if set(word) - set("IXYZ"):
                raise CodeFormatError(f"line {lineno}: bad Pauli row {line!r}")
            width = len(word)
            v = 0
            for i, ch in enumerate(word):
                v |= "IXZY".index(ch) << (2 * i)
        if n is None:
            n = width
        elif width != n:
            raise CodeFormatError(f"line {lineno}: row has {width} legs, expected {n}")
        rows.append(v)
    if n is None:
        raise CodeFormatError("no rows found")
    return ParityCheckMatrix(n, tuple(rows))


def ingest_code(source, name: str | None = None) -> CodeSpec:
    """Read a code from a path or from PCM text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        path = Path(source)
        text = path.read_text()
        name = name or path.stem
    else:
        text = source
    pcm = parse_pcm_text(text)
    rows = pcm.rows
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if not packed_commutes(rows[i], rows[j], pcm.n):
                raise CodeFormatError(
                    f"rows {i} ({pauli_string(rows[i], pcm.n)}) and {j} "
                    f"({pauli_string(rows[j], pcm.n)}) anticommute"
                )
    return CodeSpec.from_pcm(pcm, name or "")


DATA_DIR = Path(__file__).parent / "data"


def builtin_code(name: str) -> CodeSpec:
    path = DATA_DIR / f"{name}.pcm"
    if not path.is_file():
        known = sorted(p.stem for p in DATA_DIR.glob("*.pcm"))
        raise KeyError(f"unknown built-in code {name!r}; known: {known}")
    return ingest_code(path, name)


def verify_network_code(net: TensorNetwork, code: CodeSpec) -> bool:
    """True iff the dangling legs carry exactly the code's stabilizer group."""
    try:
        H = network_pcm(net)
    except ContractViolation:
        return False
    if H.n != code.n:
        return False
    return row_space_equal(H, code.pcm)


def permute_legs(H: ParityCheckMatrix, order: Sequence[int]) -> ParityCheckMatrix:
    """Reorder columns: new leg ``i`` is old leg ``order[i]``."""
    return ParityCheckMatrix(len(order), tuple(extract_legs(r, order) for r in H.rows))
