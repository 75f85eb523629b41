"""The bundled test corpus of small graphs."""

from __future__ import annotations

from importlib import resources

from ..graph import Graph, parse_graph

NAMES = ("k3", "c4", "c5", "c7", "k4", "k5", "paw", "two_triangles", "petersen")


def load(name: str) -> Graph:
    text = resources.files(__name__).joinpath(f"{name}.txt").read_text(encoding="utf-8")
    return parse_graph(text)


def bundled_corpus() -> dict[str, Graph]:
    return {name: load(name) for name in NAMES}


def corpus_dir():
    """Filesystem path of the bundled graph files."""
    return resources.files(__name__)
