from .errors import (
    DimensionMismatchError,
    DuplicateEdgeError,
    InsufficientPinsError,
    NonPositiveLengthError,
    SchemaError,
    UnknownVertexError)
from .linalg import nullspace
from .parameters import Tolerances
import jax.numpy as jnp
import logging
import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

FRAMEWORK_KEYS = {"dimension", "vertices", "edges"}
VERTEX_KEYS = {"id", "coords", "pinned"}
EDGE_KEYS = {"u", "v", "length"}


class Framework():
    """A pinned bar-and-joint framework.

    Coordinates of free vertices are stacked in vertex declaration order and,
    within a vertex, by axis. This layout is used by :class:`Configuration`,
    by flex vectors and by the columns of the rigidity matrix.

    Args:

        dimension (int):
            The ambient dimension, 2 or 3.

        vertex_ids (list of string):
            Unique vertex names, in declaration order.

        rest_coords (array-like, shape `(V, d)`):
            Coordinates of the vertices in the rest configuration.

        pinned (array-like of bool, shape `(V,)`):
            Which vertices are fixed in space.

        edges (array-like of int, shape `(E, 2)`):
            Vertex indices of each bar.

        lengths (array-like, shape `(E,)`):
            Prescribed bar lengths.

        explicit_lengths (bool):
            Whether the lengths were given explicitly rather than measured
            from the rest coordinates.
    """

    def __init__(
            self,
            dimension,
            vertex_ids,
            rest_coords,
            pinned,
            edges,
            lengths,
            explicit_lengths=False):

        self.dimension = int(dimension)
        self.vertex_ids = list(vertex_ids)
        self.rest_coords = _frozen(np.array(rest_coords, dtype=np.float64))
        self.pinned = _frozen(np.array(pinned, dtype=bool))
        self.edges = _frozen(
            np.array(edges, dtype=np.int64).reshape(-1, 2))
        self.lengths = _frozen(np.array(lengths, dtype=np.float64))
        self.explicit_lengths = explicit_lengths

        assert self.rest_coords.shape == \
            (len(self.vertex_ids), self.dimension), \
            "Rest coordinates and vertices disagree"
        assert self.lengths.shape == (len(self.edges),), \
            "Lengths and edges disagree"

        self.free = _frozen(~self.pinned)
        self.free_vertex_indices = np.flatnonzero(self.free)

    @property
    def num_vertices(self):
        return len(self.vertex_ids)

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def num_pinned(self):
        return int(self.pinned.sum())

    @property
    def num_free_vertices(self):
        return len(self.free_vertex_indices)

    @property
    def num_coordinates(self):
        return self.dimension * self.num_free_vertices

    def vertex_index(self, vertex_id):
        return self.vertex_ids.index(vertex_id)

    def coordinate_slice(self, vertex_id):
        """The slice of a free vertex's coordinates in a stacked vector."""

        index = self.vertex_index(vertex_id)
        assert self.free[index], f"Vertex {vertex_id} is pinned"
        k = int(np.searchsorted(self.free_vertex_indices, index))
        return slice(k * self.dimension, (k + 1) * self.dimension)

    def coordinate_labels(self):
        """Labels ``<vertex_id>.<axis>`` of the stacked free coordinates."""

        axes = "xyz"[:self.dimension]
        return [
            f"{self.vertex_ids[i]}.{axis}"
            for i in self.free_vertex_indices
            for axis in axes
        ]

    def rest_configuration(self):
        return Configuration(self.rest_coords[self.free].reshape(-1))

    def embed(self, values):
        """Full per-vertex coordinates of a stacked free-coordinate vector,
        with pinned vertices held at rest."""

        values = self._check(values)
        full = np.array(self.rest_coords)
        full[self.free] = values.reshape(-1, self.dimension)
        return full

    def embed_derivative(self, values):
        """Full per-vertex form of a derivative vector; pinned vertices do
        not move, so their rows are zero."""

        values = self._check(values)
        full = np.zeros_like(self.rest_coords)
        full[self.free] = values.reshape(-1, self.dimension)
        return full

    def restrict(self, full):
        """Inverse of :meth:`embed`: the stacked free coordinates."""

        full = np.asarray(full, dtype=np.float64)
        assert full.shape == self.rest_coords.shape
        return full[self.free].reshape(-1)

    def edge_differences(self, full):
        """``x_u - x_v`` for every edge, shape `(E, d)`."""

        return full[self.edges[:, 0]] - full[self.edges[:, 1]]

    def graph(self):
        """The bar graph as a :class:`networkx.Graph` on vertex indices."""

        G = nx.Graph()
        G.add_nodes_from(range(self.num_vertices))
        G.add_edges_from(map(tuple, self.edges))
        return G

    def describe(self):
        """The framework as a JSON-compatible description."""

        vertices = [
            {
                "id": vertex_id,
                "coords": [float(c) for c in coords],
                "pinned": bool(pinned)
            }
            for vertex_id, coords, pinned in zip(
                self.vertex_ids, self.rest_coords, self.pinned)
        ]
        edges = []
        for (u, v), length in zip(self.edges, self.lengths):
            edge = {"u": self.vertex_ids[u], "v": self.vertex_ids[v]}
            if self.explicit_lengths:
                edge["length"] = float(length)
            edges.append(edge)

        return {
            "dimension": self.dimension,
            "vertices": vertices,
            "edges": edges
        }

    def _check(self, values):

        if isinstance(values, Configuration):
            values = values.values
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.num_coordinates,):
            raise DimensionMismatchError(
                f"expected {self.num_coordinates} free coordinates, got "
                f"shape {values.shape}")
        return values


class Configuration():
    """Stacked coordinates of the free vertices of a framework.

    The values are read-only; derive new configurations instead of
    modifying one.
    """

    def __init__(self, values):

        self.values = _frozen(np.array(values, dtype=np.float64).reshape(-1))

    def __len__(self):
        return len(self.values)

    def __add__(self, delta):
        return Configuration(self.values + np.asarray(delta))

    def norm_squared(self):
        return float(self.values @ self.values)


class ElongationVector():
    """Per-edge elongations of a configuration.

    Args:

        squared (array-like, shape `(E,)`):
            The squared-length defects ``D_e = |x_u - x_v|^2 - l^2``.

        linear (array-like, shape `(E,)`):
            The length defects ``d_e = |x_u - x_v| - l``.
    """

    def __init__(self, squared, linear):

        self.squared = _frozen(np.asarray(squared, dtype=np.float64))
        self.linear = _frozen(np.asarray(linear, dtype=np.float64))

    def max_abs(self, measure="squared"):

        values = self.squared if measure == "squared" else self.linear
        if len(values) == 0:
            return 0.0
        return float(np.max(np.abs(values)))


def build_framework(description, tolerances=None):
    """Build and validate a framework from its JSON-compatible description.

    Args:

        description (dict):
            ``{"dimension": 2|3, "vertices": [{"id", "coords", "pinned"}],
            "edges": [{"u", "v", "length"}]}``; ``pinned`` defaults to false
            and ``length`` to the distance of the rest coordinates.

        tolerances (:class:`Tolerances`, optional):
            Tolerances of the pin sufficiency test.

    Returns:

        A validated :class:`Framework`.

    Raises:

        :class:`ValidationError` (or one of its subclasses) for the first
        violation found; all violations are listed in its ``violations``.
    """

    if tolerances is None:
        tolerances = Tolerances()

    dimension, vertices, edges = _parse_schema(description)

    violations = []

    vertex_ids = [vertex["id"] for vertex in vertices]
    seen = set()
    for vertex_id in vertex_ids:
        if vertex_id in seen:
            violations.append(
                SchemaError(f"duplicate vertex id '{vertex_id}'"))
        seen.add(vertex_id)
    index = {vertex_id: i for i, vertex_id in enumerate(vertex_ids)}

    rest_coords = np.array(
        [vertex["coords"] for vertex in vertices],
        dtype=np.float64).reshape(-1, dimension)
    pinned = np.array(
        [bool(vertex.get("pinned", False)) for vertex in vertices], dtype=bool)

    edge_indices = []
    lengths = []
    explicit = False
    bars = nx.Graph()
    for number, edge in enumerate(edges):
        u, v = edge["u"], edge["v"]
        name = f"edge {number} ({u}-{v})"
        missing = [w for w in (u, v) if w not in index]
        if missing:
            violations.append(UnknownVertexError(
                f"{name} refers to unknown vertex "
                f"{', '.join(repr(w) for w in missing)}"))
            continue
        if u == v:
            violations.append(SchemaError(f"{name} is a loop"))
            continue
        if bars.has_edge(u, v):
            violations.append(DuplicateEdgeError(f"duplicate {name}"))
            continue
        bars.add_edge(u, v)

        i, j = index[u], index[v]
        distance = float(np.linalg.norm(rest_coords[i] - rest_coords[j]))
        if "length" in edge:
            explicit = True
            length = float(edge["length"])
        else:
            length = distance
        if not length > 0:
            violations.append(NonPositiveLengthError(
                f"{name} has nonpositive length {length}"))
            continue

        edge_indices.append((i, j))
        lengths.append(length)

    if violations:
        _raise_all(violations)

    framework = Framework(
        dimension,
        vertex_ids,
        rest_coords,
        pinned,
        np.array(edge_indices, dtype=np.int64).reshape(-1, 2),
        lengths,
        explicit_lengths=explicit)

    check_pins(framework, tolerances)

    if explicit and framework.num_edges > 0:
        D = squared_elongation(framework, framework.rest_configuration())
        prestress = D.max_abs()
        if prestress > tolerances.prestress_warn:
            logger.warning(
                "rest configuration is prestressed: max |D_e| = %.3e",
                prestress)

    return framework


def check_pins(framework, tolerances=None):
    """Reject frameworks whose pins leave a rigid-body motion free.

    A rigid motion that fixes every pinned vertex moves the free vertices
    without stretching any bar. Such a motion exists if nothing is pinned, if
    a connected part of the framework holds no pin, or if the pins are too
    few or degenerate (e.g. a single pin in the plane).
    """

    if tolerances is None:
        tolerances = Tolerances()

    if framework.num_pinned == 0:
        raise InsufficientPinsError("insufficient pins: no vertex is pinned")

    G = framework.graph()
    for component in nx.connected_components(G):
        if not any(framework.pinned[i] for i in component):
            names = sorted(framework.vertex_ids[i] for i in component)
            raise InsufficientPinsError(
                "insufficient pins: no pin among vertices " + ", ".join(names))

    motions = rigid_motion_basis(framework.rest_coords)
    d = framework.dimension
    pinned_rows = motions.reshape(framework.num_vertices, d, -1)[
        framework.pinned].reshape(-1, motions.shape[1])
    fixing = nullspace(pinned_rows, tolerances.rank_rtol)

    if fixing.shape[1] == 0:
        return

    R = rigidity_matrix(framework, framework.rest_configuration())
    for combination in fixing.T:
        motion = motions @ combination
        norm = np.linalg.norm(motion)
        if norm < tolerances.pin_residual * np.linalg.norm(combination):
            # e.g. rotation about a line through every vertex
            continue
        free_part = framework.restrict(motion.reshape(-1, d))
        residual = np.linalg.norm(R @ free_part)
        if residual < tolerances.pin_residual * norm:
            raise InsufficientPinsError(
                "insufficient pins: a rigid-body motion fixing all pins "
                "moves the free vertices")


def rigid_motion_basis(coords):
    """Translations and infinitesimal rotations about the centroid.

    Args:

        coords (array-like, shape `(V, d)`):
            Vertex coordinates.

    Returns:

        Array of shape `(V*d, d*(d+1)/2)` whose columns are the motions.
    """

    coords = np.asarray(coords, dtype=np.float64)
    V, d = coords.shape
    centered = coords - coords.mean(axis=0)

    motions = []
    for axis in range(d):
        translation = np.zeros((V, d))
        translation[:, axis] = 1.0
        motions.append(translation.reshape(-1))

    if d == 2:
        rotation = np.stack([-centered[:, 1], centered[:, 0]], axis=1)
        motions.append(rotation.reshape(-1))
    else:
        for axis in np.eye(3):
            motions.append(np.cross(axis, centered).reshape(-1))

    return np.stack(motions, axis=1)


def squared_elongation(framework, X):
    """Elongations ``D_e = |x_u - x_v|^2 - l_e^2`` (and ``d_e``) of every
    edge at configuration `X`.

    Args:

        framework (:class:`Framework`):
            The framework.

        X (:class:`Configuration` or array-like):
            Stacked free coordinates.

    Returns:

        An :class:`ElongationVector`.
    """

    full = framework.embed(X)
    delta = framework.edge_differences(full)
    lengths = framework.lengths

    squared = np.einsum('ij,ij->i', delta, delta) - lengths**2
    linear = np.linalg.norm(delta, axis=1) - lengths

    return ElongationVector(squared, linear)


def rigidity_matrix(framework, X):
    """The Jacobian of the constraint map ``X -> D(X)``.

    Row `e` holds ``2 (x_u - x_v)^T`` in the columns of `u` and ``-2 (x_u -
    x_v)^T`` in the columns of `v`; pinned vertices have no columns.

    Returns:

        Array of shape `(E, d * free vertices)`.
    """

    full = framework.embed(X)
    delta = framework.edge_differences(full)
    E = framework.num_edges
    rows = np.arange(E)

    R = np.zeros((E, framework.num_vertices, framework.dimension))
    R[rows, framework.edges[:, 0]] = 2 * delta
    R[rows, framework.edges[:, 1]] = -2 * delta

    return R[:, framework.free, :].reshape(E, framework.num_coordinates)


def constraint_function(framework):
    """The constraint map ``X -> D(X)`` as a pure `jax` function, for
    automatic differentiation."""

    rest = jnp.asarray(framework.rest_coords)
    free = np.asarray(framework.free_vertex_indices)
    u = np.asarray(framework.edges[:, 0])
    v = np.asarray(framework.edges[:, 1])
    lengths = jnp.asarray(framework.lengths)
    d = framework.dimension

    def D(X):
        full = rest.at[free].set(X.reshape(-1, d))
        delta = full[u] - full[v]
        return jnp.sum(delta * delta, axis=1) - lengths**2

    return D


def _parse_schema(description):

    if not isinstance(description, dict):
        raise SchemaError("framework description must be a JSON object")

    violations = []

    unknown = set(description) - FRAMEWORK_KEYS
    if unknown:
        violations.append(SchemaError(
            f"unknown top-level keys: {', '.join(sorted(unknown))}"))
    missing = FRAMEWORK_KEYS - set(description)
    if missing:
        violations.append(SchemaError(
            f"missing top-level keys: {', '.join(sorted(missing))}"))
    if violations:
        _raise_all(violations)

    dimension = description["dimension"]
    if isinstance(dimension, bool) or dimension not in (2, 3):
        raise SchemaError(f"dimension must be 2 or 3, got {dimension!r}")

    vertices = description["vertices"]
    edges = description["edges"]
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise SchemaError("'vertices' and 'edges' must be lists")

    for number, vertex in enumerate(vertices):
        name = f"vertex {number}"
        if not isinstance(vertex, dict):
            violations.append(SchemaError(f"{name} must be an object"))
            continue
        unknown = set(vertex) - VERTEX_KEYS
        if unknown:
            violations.append(SchemaError(
                f"{name} has unknown keys: {', '.join(sorted(unknown))}"))
        if not isinstance(vertex.get("id"), str):
            violations.append(SchemaError(f"{name} needs a string 'id'"))
        coords = vertex.get("coords")
        if not isinstance(coords, list) or len(coords) != dimension or \
                not all(_is_number(c) for c in coords):
            violations.append(SchemaError(
                f"{name} needs {dimension} numeric 'coords'"))
        if not isinstance(vertex.get("pinned", False), bool):
            violations.append(SchemaError(f"{name} 'pinned' must be boolean"))

    for number, edge in enumerate(edges):
        name = f"edge {number}"
        if not isinstance(edge, dict):
            violations.append(SchemaError(f"{name} must be an object"))
            continue
        unknown = set(edge) - EDGE_KEYS
        if unknown:
            violations.append(SchemaError(
                f"{name} has unknown keys: {', '.join(sorted(unknown))}"))
        if not isinstance(edge.get("u"), str) or \
                not isinstance(edge.get("v"), str):
            violations.append(SchemaError(f"{name} needs string 'u' and 'v'"))
        if "length" in edge and not _is_number(edge["length"]):
            violations.append(SchemaError(f"{name} 'length' must be a number"))

    if violations:
        _raise_all(violations)

    return dimension, vertices, edges


def _raise_all(violations):

    first = violations[0]
    first.violations = list(violations)
    raise first


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _frozen(array):
    array.flags.writeable = False
    return array
