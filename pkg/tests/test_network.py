import json
import random

import pytest

from sstlego import layouts
from sstlego.lego import LegoKind
from sstlego.network import (
    CodeFormatError,
    TensorNetwork,
    absorb_stoppers,
    builtin_code,
    ingest_code,
    load_network,
    make_node,
    network_from_dict,
    network_pcm,
    network_to_dict,
    parse_pcm_text,
    verify_network_code,
)
from sstlego.symplectic import ContractViolation, ParityCheckMatrix, rank, row_space_equal

from conftest import desk_network

BUILTINS = ["code422", "code513", "steane7", "shor9", "rsc3", "rsc5", "hamming15_7_3"]
EXPECTED_NK = {
    "code422": (4, 2),
    "code513": (5, 1),
    "steane7": (7, 1),
    "shor9": (9, 1),
    "rsc3": (9, 1),
    "rsc5": (25, 1),
    "hamming15_7_3": (15, 7),
}


def bell_pair() -> TensorNetwork:
    nodes = [make_node(0, LegoKind.BELL), make_node(1, LegoKind.BELL)]
    return TensorNetwork.build(nodes, [((0, 1), (1, 0))])


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_codes(name):
    code = builtin_code(name)
    assert (code.n, code.k) == EXPECTED_NK[name]


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("layout", [layouts.layout_msp, layouts.layout_tanner])
def test_universal_layouts_realise_code(name, layout):
    code = builtin_code(name)
    assert verify_network_code(layout(code), code)


def test_tanner_422_shape():
    net = layouts.layout_tanner(builtin_code("code422"))
    assert (len(net.nodes), len(net.edges)) == (6, 8)


def test_concat_rep_3_2_is_shor():
    net = layouts.layout_concat_rep(3, 2)
    assert len(net.nodes) == 4
    assert verify_network_code(net, builtin_code("shor9"))


@pytest.mark.parametrize("size", [(2, 2), (3, 3), (3, 4), (5, 5)])
def test_rsc_grid_matches_reference(size):
    net = layouts.layout_rsc(*size)
    H = network_pcm(net)
    assert row_space_equal(H, layouts.rsc_pcm(*size))
    assert rank(H) == size[0] * size[1] - 1


@pytest.mark.parametrize("layers, n, r, tiles", [(0, 5, 4, 1), (1, 25, 14, 11), (2, 95, 44, 51)])
def test_happy_sizes(layers, n, r, tiles):
    net = layouts.layout_happy(layers)
    H = network_pcm(net)
    assert (H.n, rank(H), len(net.nodes)) == (n, r, tiles)


def test_network_json_roundtrip(desk_net, tmp_path):
    data = network_to_dict(desk_net)
    again = network_from_dict(json.loads(json.dumps(data)))
    assert network_to_dict(again) == data
    path = tmp_path / "net.json"
    path.write_text(json.dumps(data))
    assert load_network(path) == desk_net


def test_network_validation():
    with pytest.raises(ContractViolation):
        TensorNetwork.build([make_node(0, LegoKind.BELL)], [((0, 0), (0, 1))])
    with pytest.raises(ContractViolation):
        TensorNetwork.build(
            [make_node(i, LegoKind.BELL) for i in range(3)], [((0, 1), (1, 0)), ((0, 1), (2, 0))]
        )
    with pytest.raises(ContractViolation):
        TensorNetwork.build([make_node(0, LegoKind.BELL), make_node(1, LegoKind.BELL)], [((0, 2), (1, 0))])


def test_disconnected_network_rejected():
    net = TensorNetwork.build([make_node(0, LegoKind.BELL), make_node(1, LegoKind.BELL)], [])
    with pytest.raises(ContractViolation):
        network_pcm(net)


def test_bell_chain_pcm():
    assert row_space_equal(network_pcm(bell_pair()), ParityCheckMatrix.from_strings(["XX", "ZZ"]))


def test_absorb_stoppers_keeps_pcm():
    nodes = [make_node(0, LegoKind.BITFLIP_REP, 3), make_node(1, LegoKind.Z_STOPPER)]
    net = TensorNetwork.build(nodes, [((0, 2), (1, 0))])
    slim = absorb_stoppers(net)
    assert len(slim.nodes) == 1
    assert row_space_equal(network_pcm(slim), network_pcm(net))


def test_pcm_text_forms_agree():
    a = parse_pcm_text("# 422\nXXXX\n\nZZZZ  # z check\n")
    b = parse_pcm_text("1111|0000\n0000|1111\n")
    assert a == b


@pytest.mark.parametrize(
    "text, fragment",
    [("XXXX\nZZZ\n", "line 2"), ("XQ\n", "line 1"), ("", "no rows"), ("101|01\n", "line 1")],
)
def test_pcm_text_errors(text, fragment):
    with pytest.raises(CodeFormatError, match=fragment):
        parse_pcm_text(text)


def test_anticommuting_rows_named():
    with pytest.raises(CodeFormatError, match="XI.*ZI|rows 0"):
        ingest_code("XI\nZI\n")


def _permuted(net: TensorNetwork, rng: random.Random) -> TensorNetwork:
    perm = list(range(len(net.nodes)))
    rng.shuffle(perm)
    inv = {old: new for new, old in enumerate(perm)}
    nodes = [make_node(new, net.nodes[old].lego.kind, net.nodes[old].lego.m, dict(net.nodes[old].caps),
                       net.nodes[old].lego.rows) for new, old in enumerate(perm)]
    edges = [((inv[a[0]], a[1]), (inv[b[0]], b[1])) for a, b in net.edges]
    rng.shuffle(edges)
    return TensorNetwork.build(nodes, edges, net.name)


def test_node_order_does_not_change_code():
    rng = random.Random(3)
    net = desk_network("tanner_steane")
    code = builtin_code("steane7")
    for _ in range(5):
        H = network_pcm(_permuted(net, rng))
        assert rank(H) == rank(code.pcm) and H.n == code.n
