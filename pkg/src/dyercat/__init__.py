"""Dyer groups: presentations, Coxeter embeddings, scwols, developments and the complex Sigma."""

from .budget import Budget
from .graph import INF, DyerGraph, gamma, make_graph, partition, spherical_subsets
from .words import Word, dyer_reduce, is_trivial

__all__ = [
    "Budget", "INF", "DyerGraph", "Word", "dyer_reduce", "gamma", "is_trivial",
    "make_graph", "partition", "spherical_subsets",
]
__version__ = "0.1.0"
