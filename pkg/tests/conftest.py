import random

import pytest

from sstlego import layouts
from sstlego.network import builtin_code
from sstlego.symplectic import ParityCheckMatrix, packed_commutes

DESK_BUILDERS = {
    "concat_rep_3_2": lambda: layouts.layout_concat_rep(3, 2),
    "concat_rep_3_3": lambda: layouts.layout_concat_rep(3, 3),
    "rsc_3_3": lambda: layouts.layout_rsc(3, 3),
    "rsc_5_5": lambda: layouts.layout_rsc(5, 5),
    "happy_0": lambda: layouts.layout_happy(0),
    "happy_1": lambda: layouts.layout_happy(1),
    "msp_steane": lambda: layouts.layout_msp(builtin_code("steane7")),
    "tanner_steane": lambda: layouts.layout_tanner(builtin_code("steane7")),
    "msp_422": lambda: layouts.layout_msp(builtin_code("code422")),
    "tanner_422": lambda: layouts.layout_tanner(builtin_code("code422")),
}

_cache = {}


def desk_network(name):
    if name not in _cache:
        _cache[name] = DESK_BUILDERS[name]()
    return _cache[name]


@pytest.fixture(params=sorted(DESK_BUILDERS))
def desk_net(request):
    return desk_network(request.param)


def random_commuting_pcm(rng: random.Random, n: int, max_rows: int) -> ParityCheckMatrix:
    """Random set of mutually commuting Pauli rows (possibly dependent)."""
    rows = []
    for _ in range(4 * max_rows):
        if len(rows) >= max_rows:
            break
        v = rng.getrandbits(2 * n)
        if v and all(packed_commutes(v, r, n) for r in rows):
            rows.append(v)
    return ParityCheckMatrix(n, tuple(rows))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
