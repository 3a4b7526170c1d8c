from .framework import build_framework
import math


def make_triangle():
    """Unit equilateral triangle with its base pinned. First-order rigid."""

    return build_framework({
        "dimension": 2,
        "vertices": [
            {"id": "A", "coords": [0.0, 0.0], "pinned": True},
            {"id": "B", "coords": [1.0, 0.0], "pinned": True},
            {"id": "C", "coords": [0.5, math.sqrt(3) / 2]}
        ],
        "edges": [
            {"u": "A", "v": "B"},
            {"u": "B", "v": "C"},
            {"u": "C", "v": "A"}
        ]
    })


def make_collinear_chain():
    """Two collinear unit bars between pinned ends. First-order flexible,
    second-order rigid."""

    return build_framework({
        "dimension": 2,
        "vertices": [
            {"id": "A", "coords": [0.0, 0.0], "pinned": True},
            {"id": "B", "coords": [1.0, 0.0]},
            {"id": "C", "coords": [2.0, 0.0], "pinned": True}
        ],
        "edges": [
            {"u": "A", "v": "B"},
            {"u": "B", "v": "C"}
        ]
    })


def make_fourbar():
    """Unit square four-bar linkage on a pinned base, a finite mechanism."""

    return build_framework({
        "dimension": 2,
        "vertices": [
            {"id": "A", "coords": [0.0, 0.0], "pinned": True},
            {"id": "B", "coords": [0.0, 1.0]},
            {"id": "C", "coords": [1.0, 1.0]},
            {"id": "D", "coords": [1.0, 0.0], "pinned": True}
        ],
        "edges": [
            {"u": "A", "v": "B"},
            {"u": "B", "v": "C"},
            {"u": "C", "v": "D"}
        ]
    })

