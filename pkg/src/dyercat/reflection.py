"""Canonical reflection representation of a Coxeter group.

Vectors are coefficient vectors over the simple roots ``alpha_s``; the
bilinear form is ``B[s, t] = -cos(pi / m(s, t))`` (with ``-1`` for
``m = inf``) and ``rho(s) x = x - 2 <alpha_s, x> alpha_s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .budget import Budget, default_budget
from .errors import NotFinite, OrderBudgetExceeded
from .graph import DyerGraph, cosine_matrix, is_positive_definite

ROUND = 6  # decimals kept when hashing matrices (entries rounded to 1e-6)


@dataclass(frozen=True, eq=False)
class ReflectionRep:
    generators: tuple[str, ...]
    B: np.ndarray
    rho: dict  # generator -> matrix acting on root coordinates

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, s: str) -> int:
        return self.generators.index(s)

    def matrix(self, letters) -> np.ndarray:
        """``rho(s1 s2 ... sk)`` for a sequence of generators."""
        out = np.eye(self.rank)
        for s in letters:
            out = out @ self.rho[s]
        return out

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.B @ np.asarray(y))

    def dual_basis(self) -> np.ndarray:
        """Columns are the ``alpha_s*`` with ``<alpha_s*, alpha_t> = delta``."""
        return np.linalg.inv(self.B)


def bilinear_form(cox: DyerGraph, gens) -> np.ndarray:
    # -cos(pi/m) = cos(pi - pi/m): the cosine matrix of the graph
    return cosine_matrix(cox, gens)


def _require_coxeter(cox: DyerGraph):
    for v in cox.vertices:
        if cox.f[v] != 2:
            raise ValueError(f"not a Coxeter graph: f({v}) = {cox.f[v]}")


def canonical_representation(cox: DyerGraph, finite_only: bool = True) -> ReflectionRep:
    _require_coxeter(cox)
    gens = tuple(cox.vertices)
    B = bilinear_form(cox, gens)
    if finite_only and not is_positive_definite(B):
        raise NotFinite(f"bilinear form on {list(gens)} is not positive definite")
    n = len(gens)
    rho = {}
    for i, s in enumerate(gens):
        r = np.eye(n)
        r[i, :] -= 2.0 * B[i, :]
        rho[s] = r
    return ReflectionRep(gens, B, rho)


def check_rep(rep: ReflectionRep, tol: float = 1e-9) -> list[str]:
    """Problems with ``rho(s)^2 = 1`` and ``rho(s)^T B rho(s) = B``; empty when fine."""
    out = []
    eye = np.eye(rep.rank)
    for s, r in rep.rho.items():
        if np.max(np.abs(r @ r - eye), initial=0.0) > tol:
            out.append(f"rho({s})^2 != 1")
        if np.max(np.abs(r.T @ rep.B @ r - rep.B), initial=0.0) > tol:
            out.append(f"rho({s}) does not preserve B")
    return out


def matrix_key(mat: np.ndarray) -> tuple:
    # +0.0 folds the negative zeros produced by rounding
    return tuple((np.round(mat, ROUND) + 0.0).ravel().tolist())


@dataclass(frozen=True, eq=False)
class CoxeterElements:
    """Elements of a finite Coxeter group in shortlex order of their least reduced words."""

    rep: ReflectionRep
    words: tuple[tuple[str, ...], ...]
    matrices: tuple[np.ndarray, ...]
    right_mult: tuple[tuple[int, ...], ...]   # right_mult[i][j]: element i times generator j

    def __len__(self):
        return len(self.words)


def enumerate_coxeter(rep: ReflectionRep, budget: Budget | None = None) -> CoxeterElements:
    """Breadth-first search from the identity, generators tried in sorted order.

    Because levels are processed in lexicographic order the first word found
    for an element is its lexicographically least reduced word.
    """
    budget = budget or default_budget()
    gens = rep.generators
    eye = np.eye(rep.rank)
    words = [()]
    mats = [eye]
    seen = {matrix_key(eye): 0}
    right: list[list[int]] = []
    i = 0
    while i < len(words):
        row = []
        for s in gens:
            m = mats[i] @ rep.rho[s]
            key = matrix_key(m)
            j = seen.get(key)
            if j is None:
                j = len(words)
                if j >= budget.max_order:
                    raise OrderBudgetExceeded(
                        f"Coxeter group on {list(gens)} exceeds {budget.max_order} elements")
                seen[key] = j
                words.append(words[i] + (s,))
                mats.append(m)
            row.append(j)
        right.append(row)
        i += 1
    return CoxeterElements(rep, tuple(words), tuple(mats), tuple(tuple(r) for r in right))


def dihedral_order(m) -> float:
    return math.inf if m == math.inf else 2 * m
