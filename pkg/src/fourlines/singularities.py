"""Black components, discrepancies, and singularity determinants.

Contracting the black curves produces cyclic quotient singularities
exactly when every connected component of the black subgraph is a
simple path (a chain).  The discrepancy coefficients b_i solve, for
every black vertex j with mark a_j,

    -a_j b_j + sum of b_i over black neighbours i of j
        = 2 - a_j - (number of boundary neighbours of j),

which decomposes into one tridiagonal system per chain and is solved
here in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .graph import VisibleGraph

__all__ = [
    "Chain",
    "NotChainError",
    "black_components",
    "check_log_terminal",
    "solve_discrepancies",
    "chain_determinant",
    "orbifold_defect",
]


class NotChainError(ValueError):
    """A black component is not a simple path."""


@dataclass(frozen=True)
class Chain:
    """A black component that is a simple path."""

    vertex_ids: tuple[str, ...]
    marks: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertex_ids) != len(self.marks):
            raise ValueError("ids and marks must have equal length")
        if any(m < 2 for m in self.marks):
            raise ValueError("chain marks must be at least 2")

    def normalized_marks(self) -> tuple[int, ...]:
        """Orientation-independent reading of the marks."""
        return min(self.marks, self.marks[::-1])

    def determinant(self) -> int:
        return chain_determinant(self.marks)


def black_components(graph: "VisibleGraph") -> list[tuple[str, ...]]:
    """Connected components of the subgraph induced on black vertices.

    Components are listed in first-vertex creation order and each
    component's vertices come out in traversal order from its lowest
    endpoint, so output is deterministic.
    """
    blacks = [v for v in graph.vertices if graph.color(v) == "black"]
    black_set = set(blacks)
    seen: set[str] = set()
    components = []
    for v in blacks:
        if v in seen:
            continue
        comp = {v}
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for w in graph.neighbors(u):
                if w in black_set and w not in comp:
                    comp.add(w)
                    frontier.append(w)
        seen |= comp
        components.append(_order_component(graph, comp))
    return components


def _order_component(graph: "VisibleGraph", comp: set[str]) -> tuple[str, ...]:
    """Path order when the component is a path, else creation order."""
    order_index = {v: i for i, v in enumerate(graph.vertices)}
    degree = {v: sum(1 for w in graph.neighbors(v) if w in comp) for v in comp}
    if any(d > 2 for d in degree.values()):
        return tuple(sorted(comp, key=order_index.__getitem__))
    ends = sorted((v for v in comp if degree[v] <= 1), key=order_index.__getitem__)
    if not ends:
        # a cycle; impossible in a subdivided K4's interior but kept safe
        return tuple(sorted(comp, key=order_index.__getitem__))
    path = [ends[0]]
    prev = None
    while True:
        nxt = [w for w in graph.neighbors(path[-1]) if w in comp and w != prev]
        if not nxt:
            break
        prev = path[-1]
        path.append(nxt[0])
    return tuple(path)


def check_log_terminal(graph: "VisibleGraph") -> str | None:
    """None when every black component is a chain, else a description."""
    for comp in black_components(graph):
        comp_set = set(comp)
        degrees = [sum(1 for w in graph.neighbors(v) if w in comp_set) for v in comp]
        if any(d > 2 for d in degrees):
            return f"black component {comp} is not a chain (branch vertex present)"
        if len(comp) > 1 and degrees.count(1) != 2:
            return f"black component {comp} is not a simple path"
    return None


def chains(graph: "VisibleGraph") -> list[Chain]:
    """Black components as Chain values; raises when one is not a path."""
    verdict = check_log_terminal(graph)
    if verdict is not None:
        raise NotChainError(verdict)
    return [
        Chain(comp, tuple(graph.mark(v) for v in comp))
        for comp in black_components(graph)
    ]


def solve_discrepancies(graph: "VisibleGraph") -> dict[str, Fraction]:
    """Exact solution of the discrepancy system, one entry per black vertex.

    Raises NotChainError when a black component is not a path.  The
    solution of each tridiagonal block is checked by substituting it
    back into the defining equations.
    """
    boundary = graph.boundary
    out: dict[str, Fraction] = {}
    for chain in chains(graph):
        ids = chain.vertex_ids
        k = len(ids)
        diag = [Fraction(-m) for m in chain.marks]
        rhs = []
        for v, m in zip(ids, chain.marks):
            bd_adj = 1 if boundary is not None and graph.adjacent(v, boundary) else 0
            rhs.append(Fraction(2 - m - bd_adj))
        sol = _solve_tridiagonal(diag, rhs)
        # residual check: the off-diagonal entries are all 1
        for i in range(k):
            res = diag[i] * sol[i] - rhs[i]
            if i > 0:
                res += sol[i - 1]
            if i + 1 < k:
                res += sol[i + 1]
            assert res == 0, "discrepancy residual must vanish exactly"
        out.update(zip(ids, sol))
    return out


def _solve_tridiagonal(diag: Sequence[Fraction], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve the system with the given diagonal and unit off-diagonals.

    Forward elimination never hits a zero pivot: the matrix is the
    negative of a chain intersection matrix with marks >= 2, whose
    leading principal minors alternate in sign and never vanish.
    """
    k = len(diag)
    d = list(diag)
    r = list(rhs)
    for i in range(1, k):
        assert d[i - 1] != 0, "zero pivot in a chain system"
        factor = Fraction(1) / d[i - 1]
        d[i] -= factor
        r[i] -= factor * r[i - 1]
    sol = [Fraction(0)] * k
    assert k == 0 or d[k - 1] != 0, "zero pivot in a chain system"
    for i in range(k - 1, -1, -1):
        acc = r[i]
        if i + 1 < k:
            acc -= sol[i + 1]
        sol[i] = acc / d[i]
    return sol


def chain_determinant(marks: Sequence[int]) -> int:
    """Determinant of the chain's intersection matrix, up to sign.

    For marks a_1..a_k this is the continuant d_k with d_0 = 1,
    d_1 = a_1, d_j = a_j d_{j-1} - d_{j-2}; it equals the order of the
    cyclic group of the quotient singularity.
    """
    prev, cur = 0, 1
    for a in marks:
        prev, cur = cur, a * cur - prev
    return cur


def orbifold_defect(determinants: Sequence[int]) -> Fraction:
    """Sum of 1 - 1/m over the determinants; compare against 3."""
    if any(m < 1 for m in determinants):
        raise ValueError("determinants must be positive")
    return sum((1 - Fraction(1, m) for m in determinants), Fraction(0))
