"""Named desk-scale networks shared by the experiment scripts."""

from sstlego import layouts
from sstlego.network import builtin_code

BUILDERS = {
    "concat_rep_3_2": lambda: layouts.layout_concat_rep(3, 2),
    "concat_rep_3_3": lambda: layouts.layout_concat_rep(3, 3),
    "rsc_3_3": lambda: layouts.layout_rsc(3, 3),
    "rsc_5_5": lambda: layouts.layout_rsc(5, 5),
    "rsc_7_7": lambda: layouts.layout_rsc(7, 7),
    "happy_1": lambda: layouts.layout_happy(1),
    "msp_steane": lambda: layouts.layout_msp(builtin_code("steane7")),
    "tanner_steane": lambda: layouts.layout_tanner(builtin_code("steane7")),
    "msp_rsc3": lambda: layouts.layout_msp(builtin_code("rsc3")),
    "tanner_rsc3": lambda: layouts.layout_tanner(builtin_code("rsc3")),
    "tanner_rsc5": lambda: layouts.layout_tanner(builtin_code("rsc5")),
    "tanner_hamming15": lambda: layouts.layout_tanner(builtin_code("hamming15_7_3")),
}


def build(name):
    return BUILDERS[name]()
