"""Lazy graphs, tree amalgamations and quasi-isometry checks."""

from ._core import (
    AmalgoError,
    Graph,
    ball,
    build,
    decide,
    distance,
    end_estimate,
    graph,
    normal_form,
    verify,
)

__all__ = [
    "AmalgoError",
    "Graph",
    "ball",
    "build",
    "decide",
    "distance",
    "end_estimate",
    "graph",
    "normal_form",
    "verify",
]
