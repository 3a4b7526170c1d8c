import jax

jax.config.update("jax_enable_x64", True)

__version__ = "0.1"

from .cusp import (  # noqa: E402
    make_double_watt,
    solve_cusp_flexes,
    trace_cusp_branches,
    verify_watt_relations)
from .estimate import classify, elongation_profile, fit_order  # noqa: E402
from .examples import (  # noqa: E402
    make_collinear_chain,
    make_fourbar,
    make_triangle)
from .flex import (  # noqa: E402
    FlexSequence,
    constraint_coefficient,
    extend_flex,
    verify_flex)
from .framework import (  # noqa: E402
    Configuration,
    Framework,
    build_framework,
    rigidity_matrix,
    squared_elongation)
from .io import read_framework, write_framework, write_path  # noqa: E402
from .order_test import classic_order_test  # noqa: E402
from .path import project_to_manifold, trace_mechanism  # noqa: E402
