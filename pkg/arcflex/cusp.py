from .errors import ComputationError, InfeasibleCuspError, PreconditionError
from .flex import FlexSequence, constraint_coefficient, verify_flex
from .framework import build_framework
from .path import differentiate_along_path, trace_mechanism
import logging
import math
import numpy as np

logger = logging.getLogger(__name__)

MIRROR = "_bar"
FLEX_ORDER = 6
RELATION_TOLERANCE = 1e-8

# vertices of one Watt's mechanism: two pinned centers, the coupler ends
# p1, p2, a brace r and the coupler midpoint q
WATT_VERTICES = [
    ("o1", (-1.0, 0.0), True),
    ("p1", (0.0, 0.0), False),
    ("o2", (2.0, 1.0), True),
    ("p2", (1.0, 1.0), False),
    ("r", (0.0, 1.0), False),
    ("q", (0.5, 0.5), False)
]
WATT_BARS = [
    ("o1", "p1"),
    ("o2", "p2"),
    ("p1", "p2"),
    ("p1", "r"),
    ("p2", "r"),
    ("q", "p1"),
    ("q", "p2"),
    ("q", "r")
]
SIDE_KEYS = ("a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2", "e1", "e2")


class DegenerateFlexSolution():
    """An order-6 flex of the double-Watt framework with vanishing first
    derivative.

    The flex is determined by the vertical components of orders 2 to 6 of
    the coupler ends of both Watt's mechanisms; everything else follows from
    the circle constraints and the rigid couplers.

    Args:

        framework (:class:`Framework`):
            A framework made by :func:`make_double_watt`.

        left (dict):
            ``a1, a2, b1, ..., e2``: the vertical components of orders 2..6
            of ``p1`` (index 1) and ``p2`` (index 2).

        right (dict):
            The same for the mirrored mechanism.

        branch (int):
            The sign of ``bbar - b``.
    """

    def __init__(self, framework, left, right, branch):

        assert set(left) == set(SIDE_KEYS) and set(right) == set(SIDE_KEYS)

        self.framework = framework
        self.left = {key: float(left[key]) for key in SIDE_KEYS}
        self.right = {key: float(right[key]) for key in SIDE_KEYS}
        self.branch = branch
        self.length = connecting_bar_length(framework)
        self.flex = _assemble_flex(framework, self.left, self.right)

    @property
    def a(self):
        return self.left["a1"]

    @property
    def b(self):
        return self.left["b1"]

    @property
    def a_bar(self):
        return self.right["a1"]

    @property
    def b_bar(self):
        return self.right["b1"]

    def replaced(self, left=None, right=None):
        """A copy with some components of either side replaced, e.g.
        ``solution.replaced(right={"b1": ..., "b2": ...})``."""

        return DegenerateFlexSolution(
            self.framework,
            {**self.left, **(left or {})},
            {**self.right, **(right or {})},
            self.branch)


class WattRelationReport():
    """Residuals of the relations between the components of a degenerate
    flex of the double-Watt framework.

    Args:

        relations (dict):
            Relation name to absolute residual, in a fixed order.

        levels (list of float):
            ``max_e |constraint coefficient|`` of every level 1..6.

        connecting_bar (list of float):
            The constraint coefficients of the connecting bar, levels 1..6.

        autodiff_mismatch (float):
            Largest difference between the constraint coefficients and the
            derivatives of ``D_e(t)`` obtained by automatic differentiation.
    """

    def __init__(self, relations, levels, connecting_bar, autodiff_mismatch):

        self.relations = relations
        self.levels = levels
        self.connecting_bar = connecting_bar
        self.autodiff_mismatch = autodiff_mismatch

    @property
    def max_residual(self):
        return max(
            max(self.relations.values()),
            max(self.levels),
            self.autodiff_mismatch)

    def holds(self, tolerance=RELATION_TOLERANCE):
        return self.max_residual <= tolerance

    def describe(self):

        return {
            "relations": dict(self.relations),
            "levels": list(self.levels),
            "connecting_bar": list(self.connecting_bar),
            "autodiff_mismatch": self.autodiff_mismatch,
            "max_residual": self.max_residual
        }


def make_double_watt(unit_bar=False):
    """Two Watt's mechanisms joined by a horizontal bar between their coupler
    midpoints, a framework that is third-order rigid in the classic sense
    but finitely flexible.

    The second mechanism is the mirror image of the first in a vertical
    line; its vertex ids carry the suffix ``_bar``.

    Args:

        unit_bar (bool):
            Mirror in ``x = 1`` instead of ``x = 2.5``, which makes the
            connecting bar of unit length. Some vertices of the two
            mechanisms then coincide geometrically.

    Returns:

        The :class:`Framework`.
    """

    mirror = 1.0 if unit_bar else 2.5

    vertices = []
    for suffix, reflect in (("", False), (MIRROR, True)):
        for vertex_id, (x, y), pinned in WATT_VERTICES:
            if reflect:
                x = 2 * mirror - x
            vertices.append({
                "id": vertex_id + suffix,
                "coords": [x, y],
                "pinned": pinned
            })

    edges = [
        {"u": u + suffix, "v": v + suffix}
        for suffix in ("", MIRROR)
        for u, v in WATT_BARS
    ]
    edges.append({"u": "q", "v": "q" + MIRROR})

    return build_framework({
        "dimension": 2,
        "vertices": vertices,
        "edges": edges
    })


def connecting_bar_length(framework):

    q = framework.rest_coords[framework.vertex_index("q")]
    q_bar = framework.rest_coords[framework.vertex_index("q" + MIRROR)]
    return float(np.linalg.norm(q_bar - q))


def circle_flex_components(radius, y_components, orientation):
    """Derivatives of orders 1..6 of a point moving on a circle with zero
    velocity.

    The point starts at radius direction ``orientation * (1, 0)`` from the
    center. Its vertical components of orders 2..6 are given; the radial
    components follow from the circle constraint.

    Args:

        radius (float):
            The circle radius.

        y_components (tuple):
            ``(a, b, c, d, e)``, the vertical components of orders 2..6.

        orientation (int):
            ``+1`` or ``-1``.

    Returns:

        List of six arrays of shape `(2,)`.
    """

    if not radius > 0:
        raise PreconditionError(f"radius has to be positive, got {radius}")
    assert orientation in (1, -1), "Orientation has to be +1 or -1"

    a, b, c, d, e = y_components
    radial = [
        0.0,
        0.0,
        0.0,
        -3 * a**2,
        -10 * a * b,
        -(15 * a * c + 10 * b**2)
    ]
    vertical = [0.0, a, b, c, d, e]

    return [
        np.array([orientation * x / radius, y])
        for x, y in zip(radial, vertical)
    ]


def solve_cusp_flexes(framework, a, branch, b=0.0):
    """Construct an order-6 degenerate flex of the double-Watt framework.

    Both mechanisms get the same second-order component `a`. The third-order
    components `b` (left) and ``bbar`` (right) have to satisfy ``9 L a^3 +
    (bbar - b)^2 = 0`` with `L` the length of the connecting bar, which has a
    real solution only for ``a < 0``: the connecting bar has to drop.

    Args:

        framework (:class:`Framework`):
            A framework made by :func:`make_double_watt`.

        a (float):
            The second-order vertical component, negative.

        branch (int):
            ``+1`` or ``-1``, the sign of ``bbar - b``; the two branches are
            tilted in opposite directions.

        b (float):
            The third-order vertical component of the left mechanism.

    Returns:

        A verified :class:`DegenerateFlexSolution`.
    """

    assert branch in (1, -1), "Branch has to be +1 or -1"

    if not a < 0:
        raise InfeasibleCuspError(
            f"connecting bar requires a < 0, got a = {a}")

    L = connecting_bar_length(framework)
    b_bar = b + branch * math.sqrt(-9 * L * a**3)

    solution = DegenerateFlexSolution(
        framework,
        _side_components(a, b),
        _side_components(a, b_bar),
        branch)

    X0 = framework.rest_configuration()
    _, residuals = verify_flex(framework, X0, solution.flex, FLEX_ORDER)
    if max(residuals) > RELATION_TOLERANCE:
        raise ComputationError(
            f"degenerate flex violates level "
            f"{int(np.argmax(residuals)) + 1} by {max(residuals):.3e}")

    logger.debug(
        "cusp flex for a=%g, branch %+d: b=%g, bbar=%g, L=%g",
        a, branch, b, b_bar, L)

    return solution


def verify_watt_relations(solution):
    """Evaluate every relation between the flex components of `solution`,
    and re-evaluate the flex equations directly and by automatic
    differentiation.

    Returns:

        A :class:`WattRelationReport`.
    """

    framework = solution.framework
    X0 = framework.rest_configuration()
    flex = solution.flex
    L = solution.length

    relations = {}
    for name, side in (("", solution.left), ("bar", solution.right)):
        relations.update(_side_relations(side, name))

    a, b = solution.a, solution.b
    relations["a = abar"] = abs(a - solution.a_bar)
    relations["9La^3 + (bbar - b)^2 = 0"] = abs(
        9 * L * a**3 + (solution.b_bar - b)**2)

    q6 = flex.derivative(6)[framework.coordinate_slice("q")]
    q6_bar = flex.derivative(6)[framework.coordinate_slice("q" + MIRROR)]
    relations["q6_x = -45a^3"] = abs(q6[0] + 45 * a**3)
    relations["qbar6_x = 45abar^3"] = abs(
        q6_bar[0] - 45 * solution.a_bar**3)

    bar = framework.num_edges - 1
    levels = []
    connecting_bar = []
    autodiff_mismatch = 0.0
    for k in range(1, FLEX_ORDER + 1):
        coefficients = constraint_coefficient(framework, X0, flex, k)
        levels.append(float(np.max(np.abs(coefficients))))
        connecting_bar.append(float(coefficients[bar]))
        autodiff = differentiate_along_path(framework, X0, flex, k)
        autodiff_mismatch = max(
            autodiff_mismatch,
            float(np.max(np.abs(autodiff - coefficients))))

    return WattRelationReport(
        {name: float(value) for name, value in relations.items()},
        levels,
        connecting_bar,
        autodiff_mismatch)


def trace_cusp_branches(
        framework,
        a=-1.0,
        b=0.0,
        parameters=None,
        tolerances=None):
    """Trace both branches of the motion leaving the cusp configuration.

    Each branch is entered along the polynomial path of the degenerate flex
    of that branch.

    Returns:

        Dictionary from branch (``+1``, ``-1``) to :class:`PathSamples`.
    """

    X0 = framework.rest_configuration()
    branches = {}
    for branch in (1, -1):
        solution = solve_cusp_flexes(framework, a, branch, b)
        branches[branch] = trace_mechanism(
            framework,
            X0,
            parameters=parameters,
            tolerances=tolerances,
            seed_flex=solution.flex)
        logger.info(
            "branch %+d: %d samples, s=%.4f%s",
            branch,
            len(branches[branch]),
            branches[branch].arclengths[-1],
            " (truncated)" if branches[branch].truncated else "")

    return branches


def horizontal_bar_motion(framework, samples):
    """Height and tilt of the connecting bar along a path.

    Returns:

        Arrays of the mean height of the bar's endpoints and of the height
        difference ``q_bar.y - q.y``, one entry per sample.
    """

    q = framework.vertex_index("q")
    q_bar = framework.vertex_index("q" + MIRROR)

    heights = []
    tilts = []
    for X in samples.configurations:
        full = framework.embed(X)
        heights.append(0.5 * (full[q, 1] + full[q_bar, 1]))
        tilts.append(full[q_bar, 1] - full[q, 1])

    return np.array(heights), np.array(tilts)


def _side_components(a, b):
    """Components of one mechanism with ``a1 = a2 = a``, ``b1 = b2 = b`` and
    the remaining components split symmetrically around the relations."""

    return {
        "a1": a,
        "a2": a,
        "b1": b,
        "b2": b,
        "c1": 3 * a**2,
        "c2": -3 * a**2,
        "d1": 10 * a * b,
        "d2": -10 * a * b,
        "e1": 10 * b**2,
        "e2": -10 * b**2
    }


def _side_relations(side, name):

    a, b = side["a1"], side["b1"]
    c1, c2 = side["c1"], side["c2"]
    suffix = f" ({name})" if name else ""

    return {
        f"a1 = a2{suffix}": abs(side["a1"] - side["a2"]),
        f"b1 = b2{suffix}": abs(side["b1"] - side["b2"]),
        f"c1 - c2 = 6a^2{suffix}": abs(c1 - c2 - 6 * a**2),
        f"d1 - d2 = 20ab{suffix}": abs(
            side["d1"] - side["d2"] - 20 * a * b),
        f"e1 - e2 = 15a(c1 + c2) + 20b^2{suffix}": abs(
            side["e1"] - side["e2"] - 15 * a * (c1 + c2) - 20 * b**2)
    }


def _assemble_flex(framework, left, right):

    X0 = framework.rest_configuration()
    derivatives = np.zeros((FLEX_ORDER, framework.num_coordinates))

    for suffix, side in (("", left), (MIRROR, right)):

        ends = {
            end: _circle_point(
                framework, end + suffix, center + suffix, side, i)
            for end, center, i in (("p1", "o1", 1), ("p2", "o2", 2))
        }
        points = dict(ends)
        for vertex_id in ("r", "q"):
            points[vertex_id] = _body_point(
                framework,
                vertex_id + suffix,
                "p1" + suffix,
                "p2" + suffix,
                ends["p1"],
                ends["p2"])

        for vertex_id, point in points.items():
            coordinates = framework.coordinate_slice(vertex_id + suffix)
            for k in range(FLEX_ORDER):
                derivatives[k, coordinates] = point[k]

    return FlexSequence(X0, derivatives)


def _circle_point(framework, vertex_id, center_id, side, i):

    offset = (
        framework.rest_coords[framework.vertex_index(vertex_id)] -
        framework.rest_coords[framework.vertex_index(center_id)])
    assert abs(offset[1]) < 1e-12, "Radius bars have to be horizontal"

    return circle_flex_components(
        abs(offset[0]),
        tuple(side[f"{letter}{i}"] for letter in "abcde"),
        1 if offset[0] > 0 else -1)


def _body_point(framework, vertex_id, p1_id, p2_id, p1, p2):
    """Derivatives of a point rigidly attached to the coupler ``p1 p2``,
    i.e. ``w = p1 + z (p2 - p1)`` with `z` a fixed complex ratio."""

    rest = {
        key: complex(*framework.rest_coords[framework.vertex_index(key)])
        for key in (vertex_id, p1_id, p2_id)
    }
    z = (rest[vertex_id] - rest[p1_id]) / (rest[p2_id] - rest[p1_id])

    derivatives = []
    for x1, x2 in zip(p1, p2):
        w = complex(*x1) + z * (complex(*x2) - complex(*x1))
        derivatives.append(np.array([w.real, w.imag]))

    return derivatives
