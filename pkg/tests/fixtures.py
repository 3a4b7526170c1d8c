from arcflex.estimate import ElongationProfile
from arcflex.framework import build_framework
import numpy as np


class Parameters():

    def __init__(
            self,
            dimension,
            num_vertices,
            extra_edges=0,
            random_seed=None):

        assert num_vertices > dimension, "Need at least one free vertex"

        self.dimension = dimension
        self.num_vertices = num_vertices
        self.extra_edges = extra_edges
        self.random_seed = random_seed


def create_random_framework(parameters):
    """A random connected framework whose first `dimension` vertices are
    pinned."""

    rng = np.random.default_rng(parameters.random_seed)
    d = parameters.dimension
    V = parameters.num_vertices

    coords = rng.uniform(-1.0, 1.0, size=(V, d))

    edges = set()
    for v in range(1, V):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    candidates = [
        (u, v)
        for u in range(V)
        for v in range(u + 1, V)
        if (u, v) not in edges
    ]
    rng.shuffle(candidates)
    edges.update(candidates[:parameters.extra_edges])

    return build_framework({
        "dimension": d,
        "vertices": [
            {
                "id": f"v{i}",
                "coords": coords[i].tolist(),
                "pinned": i < d
            }
            for i in range(V)
        ],
        "edges": [
            {"u": f"v{u}", "v": f"v{v}"}
            for u, v in sorted(edges)
        ]
    })


def create_random_configuration(framework, random_seed=None):

    rng = np.random.default_rng(random_seed)
    X0 = framework.rest_configuration().values
    return X0 + rng.uniform(-0.1, 0.1, size=X0.shape)


def create_power_law_profile(exponent, lengths=None, num_edges=1):
    """An exact profile ``D = s^exponent`` on every edge."""

    if lengths is None:
        lengths = np.geomspace(1e-3, 1e-1, 41)
    values = np.repeat((lengths**exponent)[:, None], num_edges, axis=1)
    return ElongationProfile(lengths, values)


def create_square_with_diagonals():
    """Unit square braced by both diagonals, two corners pinned. Carries a
    self-stress."""

    return build_framework({
        "dimension": 2,
        "vertices": [
            {"id": "A", "coords": [0.0, 0.0], "pinned": True},
            {"id": "B", "coords": [1.0, 0.0], "pinned": True},
            {"id": "C", "coords": [1.0, 1.0]},
            {"id": "D", "coords": [0.0, 1.0]}
        ],
        "edges": [
            {"u": "B", "v": "C"},
            {"u": "C", "v": "D"},
            {"u": "D", "v": "A"},
            {"u": "A", "v": "C"},
            {"u": "B", "v": "D"}
        ]
    })
