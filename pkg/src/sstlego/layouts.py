"""Layout generators: concatenated repetition trees, rotated surface grids,
HaPPY pentagon tilings, and the MSP / Tanner universal layouts."""

from __future__ import annotations

import cmath
import math

from .lego import LegoKind
from .network import CodeSpec, Node, TensorNetwork, make_node, network_pcm, permute_legs
from .symplectic import ContractViolation, ParityCheckMatrix, leg_value, pauli_string

ID, XS, ZS = LegoKind.ID_STOPPER, LegoKind.X_STOPPER, LegoKind.Z_STOPPER


def layout_concat_rep(distance: int, layers: int) -> TensorNetwork:
    """Alternating phase-flip / bit-flip repetition encoders in a tree.

    The root is a phase-flip encoder with its logical leg capped by an
    identity stopper.  Nodes are numbered breadth first, so the dangling
    physical legs come out in the usual left-to-right order.
    """
    if distance < 2 or layers < 1:
        raise ContractViolation(f"need distance >= 2 and layers >= 1, got {distance}, {layers}")
    d = distance
    nodes: list[Node] = [make_node(0, LegoKind.PHASEFLIP_REP, d + 1, {d: ID})]
    edges = []
    frontier = [0]
    for level in range(1, layers):
        kind = LegoKind.BITFLIP_REP if level % 2 == 1 else LegoKind.PHASEFLIP_REP
        nxt = []
        for parent in frontier:
            for leg in range(d):
                child = len(nodes)
                nodes.append(make_node(child, kind, d + 1))
                edges.append(((parent, leg), (child, d)))
                nxt.append(child)
        frontier = nxt
    return TensorNetwork.build(nodes, edges, f"concat_rep_d{d}_l{layers}")


# -- rotated surface code --------------------------------------------------

# Leg directions of each [[6,0,3]] block.  X-logical pairs are legs {0,1}
# and {2,3}, Z-logical pairs {0,2} and {1,3}; the orientation alternates in
# a checkerboard so that every plaquette sees matching pairs.
_DIRS_EVEN = {"N": 0, "W": 1, "E": 2, "S": 3}
_DIRS_ODD = {"N": 0, "E": 1, "W": 2, "S": 3}
_PHYS_LEG = 4
_LOGICAL_LEG = 5


def _face_is_x(i: int, j: int) -> bool:
    return (i + j) % 2 == 0


def rsc_pcm(rows: int, cols: int) -> ParityCheckMatrix:
    """Rotated surface code stabilizers, qubits row-major.

    Face ``(i, j)`` covers qubits ``(i..i+1, j..j+1)``; X faces on the
    checkerboard where ``i + j`` is even.  Top/bottom boundaries are X type,
    left/right boundaries Z type.
    """
    n = rows * cols
    out = []
    for i in range(-1, rows):
        for j in range(-1, cols):
            qubits = [
                r * cols + c
                for r in (i, i + 1)
                for c in (j, j + 1)
                if 0 <= r < rows and 0 <= c < cols
            ]
            is_x = _face_is_x(i, j)
            if len(qubits) == 4:
                pass
            elif len(qubits) == 2:
                top_or_bottom = i in (-1, rows - 1)
                if top_or_bottom != is_x:
                    continue
            else:
                continue
            word = ["I"] * n
            for q in qubits:
                word[q] = "X" if is_x else "Z"
            out.append("".join(word))
    return ParityCheckMatrix.from_strings(out, n)


def layout_rsc(rows: int, cols: int) -> TensorNetwork:
    if rows < 2 or cols < 2:
        raise ContractViolation(f"grid must be at least 2x2, got {rows}x{cols}")
    nodes = []
    edges = []

    def dirs(r, c):
        return _DIRS_EVEN if (r + c) % 2 == 0 else _DIRS_ODD

    for r in range(rows):
        for c in range(cols):
            d = dirs(r, c)
            caps = {_LOGICAL_LEG: ID}
            if r == 0:
                caps[d["N"]] = XS
            if r == rows - 1:
                caps[d["S"]] = XS
            if c == 0:
                caps[d["W"]] = ZS
            if c == cols - 1:
                caps[d["E"]] = ZS
            nodes.append(make_node(r * cols + c, LegoKind.ENC_603, caps=caps))
            if c + 1 < cols:
                edges.append(((r * cols + c, d["E"]), (r * cols + c + 1, dirs(r, c + 1)["W"])))
            if r + 1 < rows:
                edges.append(((r * cols + c, d["S"]), ((r + 1) * cols + c, dirs(r + 1, c)["N"])))
    return TensorNetwork.build(nodes, edges, f"rsc_{rows}x{cols}")


# -- HaPPY {5,4} tiling -------------------------------------------------------

_P, _Q = 5, 4
_KEY_DIGITS = 7


def _key(z: complex) -> tuple[float, float]:
    return (round(z.real, _KEY_DIGITS) + 0.0, round(z.imag, _KEY_DIGITS) + 0.0)


def _reflect(z: complex, a: complex, b: complex) -> complex:
    """Reflect ``z`` in the hyperbolic geodesic through ``a`` and ``b``."""
    if abs((a.conjugate() * b).imag) < 1e-12:
        # diameter: Euclidean reflection in the line through the origin
        u = a / abs(a) if abs(a) > 1e-12 else b / abs(b)
        return u * u * z.conjugate()
    a_inv = a / abs(a) ** 2
    # circumcentre of a, b, a_inv
    ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, a_inv.real, a_inv.imag
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    centre = complex(ux, uy)
    r2 = abs(a - centre) ** 2
    return centre + r2 / (z - centre).conjugate()


def _happy_tiles(layers: int) -> list[tuple[int, complex, list[complex]]]:
    """Tiles as (ring, centre, ccw vertices), rings by vertex adjacency."""
    radius = math.tanh(math.acosh(1 / (math.tan(math.pi / _P) * math.tan(math.pi / _Q))) / 2)
    centre_tile = [radius * cmath.exp(2j * math.pi * (k + 0.5) / _P) for k in range(_P)]
    tiles = {_key(0j): (0j, centre_tile)}
    frontier = [(0j, centre_tile)]
    for _ in range(2 * layers):
        nxt = []
        for centre, verts in frontier:
            for k in range(_P):
                a, b = verts[k], verts[(k + 1) % _P]
                c2 = _reflect(centre, a, b)
                if _key(c2) in tiles:
                    continue
                v2 = [_reflect(v, a, b) for v in verts]
                tiles[_key(c2)] = (c2, v2)
                nxt.append((c2, v2))
        frontier = nxt
    ring = {_key(0j): 0}
    vert_sets = {k: {_key(v) for v in t[1]} for k, t in tiles.items()}
    for level in range(1, layers + 1):
        touched = set().union(*(vert_sets[k] for k, lv in ring.items() if lv == level - 1))
        for k, vs in vert_sets.items():
            if k not in ring and vs & touched:
                ring[k] = level
    out = []
    for k, level in ring.items():
        centre, verts = tiles[k]
        mid = sum(verts) / _P
        verts = sorted(verts, key=lambda v: cmath.phase(v - mid))
        # start at the vertex closest to the origin direction for a stable leg order
        start = min(range(_P), key=lambda i: (round(cmath.phase(verts[i] - mid) % (2 * math.pi), 6)))
        verts = verts[start:] + verts[:start]
        out.append((level, centre, verts))
    out.sort(key=lambda t: (t[0], round(cmath.phase(t[1]) % (2 * math.pi), 6), round(abs(t[1]), 6)))
    return out


def layout_happy(layers: int) -> TensorNetwork:
    """[[5,1,3]] subspace LEGOs on a {5,4} tiling grown by ``layers`` vertex rings.

    layers=0 is one tile (n=5), layers=1 has 11 tiles (n=25), layers=2 has
    51 tiles (n=95).
    """
    if layers not in (0, 1, 2):
        raise ContractViolation(f"unsupported layer count {layers}; use 0, 1 or 2")
    tiles = _happy_tiles(layers)
    nodes = [make_node(i, LegoKind.SUB_513) for i in range(len(tiles))]
    owner: dict[tuple, tuple[int, int]] = {}
    edges = []
    for t, (_, _, verts) in enumerate(tiles):
        for leg in range(_P):
            key = frozenset((_key(verts[leg]), _key(verts[(leg + 1) % _P])))
            if key in owner:
                edges.append((owner[key], (t, leg)))
            else:
                owner[key] = (t, leg)
    return TensorNetwork.build(nodes, edges, f"happy_l{layers}")


# -- MSP and Tanner ---------------------------------------------------------


def _check_css_like(code: CodeSpec) -> list[list[tuple[int, str]]]:
    """Per generator, its (qubit, 'X'|'Z') actions; Y entries are rejected."""
    actions = []
    for g_index, row in enumerate(code.pcm.rows):
        acts = []
        for q in range(code.n):
            v = leg_value(row, q)
            if v == 3:
                raise ContractViolation(
                    f"generator {g_index} ({pauli_string(row, code.n)}) has a Y on qubit {q}; "
                    "MSP/Tanner layouts need I/X/Z generators"
                )
            if v:
                acts.append((q, "X" if v == 1 else "Z"))
        if acts:
            actions.append(acts)
    return actions


def layout_msp(code: CodeSpec) -> TensorNetwork:
    """Measurement-state-preparation network.

    Node order: qubit-line spiders (qubit by qubit, generators in order),
    then per generator its ancilla spider followed by its Hadamards.  Only
    the last spider of each qubit line has a dangling (physical) leg.
    Spider legs: 0 = line input, 1 = line output, 2 = ancilla coupling.
    """
    gens = _check_css_like(code)
    per_qubit: list[list[tuple[int, str]]] = [[] for _ in range(code.n)]
    for g, acts in enumerate(gens):
        for q, p in acts:
            per_qubit[q].append((g, p))
    nodes: list[Node] = []
    edges = []
    spider_of: dict[tuple[int, int], int] = {}
    for q in range(code.n):
        line = per_qubit[q]
        if not line:
            nodes.append(make_node(len(nodes), ID))
            continue
        prev = None
        for i, (g, p) in enumerate(line):
            kind = LegoKind.PHASEFLIP_REP if p == "X" else LegoKind.BITFLIP_REP
            caps = {0: ID} if i == 0 else None
            nid = len(nodes)
            nodes.append(make_node(nid, kind, 3, caps))
            spider_of[(g, q)] = nid
            if prev is not None:
                edges.append(((prev, 1), (nid, 0)))
            prev = nid
    for g, acts in enumerate(gens):
        w = len(acts)
        anc = len(nodes)
        nodes.append(make_node(anc, LegoKind.BITFLIP_REP, w + 2, {w: XS, w + 1: XS}))
        for leg, (q, p) in enumerate(acts):
            spider = spider_of[(g, q)]
            if p == "X":
                edges.append(((anc, leg), (spider, 2)))
            else:
                h = len(nodes)
                nodes.append(make_node(h, LegoKind.HADAMARD))
                edges.append(((anc, leg), (h, 0)))
                edges.append(((h, 1), (spider, 2)))
    return TensorNetwork.build(nodes, edges, f"msp_{code.name}" if code.name else "msp")


def _qubit_line_rows(actions: list[str]) -> list[str]:
    """Stabilizers of a fused qubit line on legs (couplings..., physical, input)."""
    deg = len(actions)
    nodes = []
    edges = []
    for i, p in enumerate(actions):
        kind = LegoKind.PHASEFLIP_REP if p == "X" else LegoKind.BITFLIP_REP
        nodes.append(make_node(i, kind, 3))
        if i:
            edges.append(((i - 1, 1), (i, 0)))
    line = TensorNetwork.build(nodes, edges)
    H = network_pcm(line)
    # dangling order: (0,0) input, (0,2), (1,2), ..., (deg-1,1) output, (deg-1,2)
    pos = {ep: i for i, ep in enumerate(line.dangling)}
    order = [pos[(i, 2)] for i in range(deg)] + [pos[(deg - 1, 1)], pos[(0, 0)]]
    return permute_legs(H, order).to_strings()


def layout_tanner(code: CodeSpec) -> TensorNetwork:
    """MSP network with each qubit line and each ancilla fused into one node.

    Qubit nodes come first (legs: one per incident check in generator order,
    then the physical leg, then an identity-capped input leg); check nodes
    follow, one leg per supported qubit.  Hadamards of Z couplings are
    absorbed into the check node, so a pure Z check is a phase-flip block.
    """
    gens = _check_css_like(code)
    per_qubit: list[list[tuple[int, str]]] = [[] for _ in range(code.n)]
    for g, acts in enumerate(gens):
        for q, p in acts:
            per_qubit[q].append((g, p))
    nodes: list[Node] = []
    qubit_leg: dict[tuple[int, int], tuple[int, int]] = {}
    for q in range(code.n):
        line = per_qubit[q]
        deg = len(line)
        nid = len(nodes)
        if not line:
            nodes.append(make_node(nid, ID))
            continue
        kinds = {p for _, p in line}
        caps = {deg + 1: ID}
        if kinds == {"X"}:
            nodes.append(make_node(nid, LegoKind.PHASEFLIP_REP, deg + 2, caps))
        elif kinds == {"Z"}:
            nodes.append(make_node(nid, LegoKind.BITFLIP_REP, deg + 2, caps))
        else:
            rows = _qubit_line_rows([p for _, p in line])
            nodes.append(make_node(nid, LegoKind.PCM, caps=caps, rows=rows))
        for leg, (g, _) in enumerate(line):
            qubit_leg[(g, q)] = (nid, leg)
    edges = []
    for g, acts in enumerate(gens):
        w = len(acts)
        cid = len(nodes)
        kinds = {p for _, p in acts}
        if w == 1:
            nodes.append(make_node(cid, XS if kinds == {"X"} else LegoKind.Z_STOPPER))
        elif kinds == {"X"}:
            nodes.append(make_node(cid, LegoKind.BITFLIP_REP, w))
        elif kinds == {"Z"}:
            nodes.append(make_node(cid, LegoKind.PHASEFLIP_REP, w))
        else:
            nodes.append(make_node(cid, LegoKind.PCM, rows=_check_rows([p for _, p in acts])))
        for leg, (q, _) in enumerate(acts):
            edges.append(((cid, leg), qubit_leg[(g, q)]))
    return TensorNetwork.build(nodes, edges, f"tanner_{code.name}" if code.name else "tanner")


def _check_rows(actions: list[str]) -> list[str]:
    """Z spider with a Hadamard on every Z-coupled leg."""
    w = len(actions)
    swap = {"X": "Z", "Z": "X", "I": "I"}
    rows = []
    for i in range(w - 1):
        word = ["I"] * w
        word[i] = word[i + 1] = "Z"
        rows.append(word)
    rows.append(["X"] * w)
    out = []
    for word in rows:
        out.append("".join(swap[ch] if actions[i] == "Z" else ch for i, ch in enumerate(word)))
    return out
