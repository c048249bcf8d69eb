"""Visible graphs of iterated blowups over four general lines in the plane.

The graph is a subdivided K4.  The four corner vertices stand for the
strict transforms of the lines and the interior vertices of the six
edges stand for exceptional curves over the pairwise intersection
points.  Each vertex carries a mark (minus the self-intersection of the
curve it represents) and a rational weight.  Inserting a new vertex
between two adjacent ones corresponds to blowing up the intersection
point of the two curves: the new vertex starts with mark 1, both
neighbours gain one mark, and the new weight is the sum of the two
neighbour weights.

Interior vertices are tracked together with their multiplicity pair
(m1, m2): the weight of an interior vertex on the edge between corners
a and b equals m1*w(a) + m2*w(b) and the pair is always coprime.  The
pair is the Stern-Brocot coordinate of the vertex inside its edge, and
it determines the creation parents of the vertex uniquely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Optional, Sequence, Union

__all__ = [
    "GraphError",
    "FormatError",
    "Insertion",
    "VisibleGraph",
    "EDGE_PAIRS",
    "WHITE",
    "BLACK",
    "BOUNDARY",
    "UNDEFINED",
    "new_base",
    "insert",
    "parse",
    "serialize",
    "edge_chains",
    "canonical_form",
]

#: the six corner pairs, in the fixed order used everywhere
EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

WHITE = "white"
BLACK = "black"
BOUNDARY = "boundary"
#: non-boundary vertex with mark <= 0; legal only before verification
UNDEFINED = "undefined"

Rational = Union[int, Fraction]


class GraphError(ValueError):
    """Structural misuse of a visible graph."""


class FormatError(GraphError):
    """Malformed graph file."""


@dataclass(frozen=True)
class Insertion:
    """One blowup step: ``new_id`` goes between adjacent ``left_id``, ``right_id``."""

    new_id: str
    left_id: str
    right_id: str


class VisibleGraph:
    """Immutable subdivided-K4 graph; all operations return new graphs."""

    def __init__(
        self,
        corners: Sequence[str],
        weights: Sequence[Rational],
        boundary: Optional[str] = None,
        history: Sequence[Insertion] = (),
    ):
        corners = tuple(corners)
        if len(corners) != 4 or len(set(corners)) != 4:
            raise GraphError("need four distinct corner ids")
        weights = tuple(Fraction(w) for w in weights)
        if len(weights) != 4:
            raise GraphError("need four corner weights")
        if boundary is not None and boundary not in corners:
            raise GraphError(f"boundary {boundary!r} is not a corner")
        self.corners = corners
        self.initial_weights = weights
        self.boundary = boundary
        self.history: tuple[Insertion, ...] = ()

        cindex = {c: i for i, c in enumerate(corners)}
        self._mark = {c: -1 for c in corners}
        self._weight = dict(zip(corners, weights))
        self._adj = {c: set(corners) - {c} for c in corners}
        # interior bookkeeping: edge (pair of corner indexes) and (m1, m2)
        self._edge = {}
        self._frac = {}
        self._parents = {}
        self._children = {c: [] for c in corners}
        self._cindex = cindex
        self._canon = None

        for ins in history:
            self._apply(ins)

    # -- construction ----------------------------------------------------

    def _apply(self, ins: Insertion) -> None:
        a, b, new = ins.left_id, ins.right_id, ins.new_id
        if new in self._mark:
            raise GraphError(f"duplicate vertex id {new!r}")
        if a not in self._mark or b not in self._mark:
            raise GraphError(f"unknown vertex in insertion {ins}")
        if b not in self._adj[a]:
            raise GraphError(f"{a!r} and {b!r} are not adjacent")

        ea = self._edge.get(a)
        eb = self._edge.get(b)
        if ea is None and eb is None:
            edge = tuple(sorted((self._cindex[a], self._cindex[b])))
        elif ea is not None and eb is not None:
            if ea != eb:
                raise GraphError(f"{a!r} and {b!r} lie on different edges")
            edge = ea
        else:
            edge = ea if ea is not None else eb
        fa = self._frac_on(a, edge)
        fb = self._frac_on(b, edge)
        self._edge[new] = edge
        self._frac[new] = (fa[0] + fb[0], fa[1] + fb[1])

        self._mark[a] += 1
        self._mark[b] += 1
        self._mark[new] = 1
        self._weight[new] = self._weight[a] + self._weight[b]
        self._adj[a].discard(b)
        self._adj[b].discard(a)
        self._adj[a].add(new)
        self._adj[b].add(new)
        self._adj[new] = {a, b}
        self._parents[new] = (a, b)
        self._children[a].append(new)
        self._children[b].append(new)
        self._children[new] = []
        self.history = self.history + (ins,)
        self._canon = None

    def _frac_on(self, v: str, edge: tuple[int, int]) -> tuple[int, int]:
        if v in self._frac:
            return self._frac[v]
        i = self._cindex[v]
        if i == edge[0]:
            return (1, 0)
        if i == edge[1]:
            return (0, 1)
        raise GraphError(f"corner {v!r} does not bound edge {edge}")

    def insert(self, a: str, b: str, new_id: str) -> "VisibleGraph":
        """Blow up the intersection of the adjacent curves ``a`` and ``b``."""
        g = VisibleGraph(self.corners, self.initial_weights, self.boundary, self.history)
        g._apply(Insertion(new_id, a, b))
        return g

    def reweighted(self, weights: Sequence[Rational]) -> "VisibleGraph":
        """Same insertion history, new initial corner weights."""
        return VisibleGraph(self.corners, weights, self.boundary, self.history)

    # -- queries ---------------------------------------------------------

    @property
    def blowups(self) -> int:
        return len(self.history)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.corners + tuple(ins.new_id for ins in self.history)

    def is_corner(self, v: str) -> bool:
        return v in self._cindex

    def mark(self, v: str) -> int:
        return self._mark[v]

    def weight(self, v: str) -> Fraction:
        return self._weight[v]

    def neighbors(self, v: str) -> frozenset[str]:
        return frozenset(self._adj[v])

    def adjacent(self, a: str, b: str) -> bool:
        return b in self._adj[a]

    def edge_of(self, v: str) -> Optional[tuple[int, int]]:
        """Corner-index pair of the edge an interior vertex lies on."""
        return self._edge.get(v)

    def fraction(self, v: str) -> Optional[tuple[int, int]]:
        """Stern-Brocot multiplicity pair of an interior vertex."""
        return self._frac.get(v)

    def parents(self, v: str) -> Optional[tuple[str, str]]:
        return self._parents.get(v)

    def children(self, v: str) -> tuple[str, ...]:
        return tuple(self._children[v])

    def color(self, v: str) -> str:
        if v == self.boundary:
            return BOUNDARY
        m = self._mark[v]
        if m == 1:
            return WHITE
        if m >= 2:
            return BLACK
        return UNDEFINED

    def whites(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.color(v) == WHITE)

    def blacks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.color(v) == BLACK)

    @property
    def total_weight(self) -> Fraction:
        return sum(self.initial_weights, Fraction(0))

    def edge_chains(self) -> dict[tuple[int, int], tuple[str, ...]]:
        """Interior vertices of each edge, ordered along the path.

        The order runs from the lower-index corner of the pair to the
        higher one.  A vertex with multiplicity pair (m1, m2) sits closer
        to the first corner the larger m1/m2 is.
        """
        chains: dict[tuple[int, int], list] = {pair: [] for pair in EDGE_PAIRS}
        for v, edge in self._edge.items():
            chains[edge].append(v)
        out = {}
        for pair, vs in chains.items():
            vs.sort(key=lambda v: Fraction(self._frac[v][1], self._frac[v][0])
                    if self._frac[v][0] else Fraction(10**9))
            out[pair] = tuple(vs)
        return out

    def adjacent_pairs(self) -> Iterator[tuple[str, str]]:
        """All adjacent pairs, edge by edge along each path; deterministic."""
        chains = self.edge_chains()
        for pair in EDGE_PAIRS:
            walk = (self.corners[pair[0]],) + chains[pair] + (self.corners[pair[1]],)
            for a, b in zip(walk, walk[1:]):
                yield a, b

    # -- invariant helpers -----------------------------------------------

    def check_bookkeeping(self) -> None:
        """Raise if the insertion bookkeeping identities fail."""
        n = self.blowups
        if len(self.vertices) != 4 + n:
            raise GraphError("vertex count mismatch")
        edges = sum(len(self._adj[v]) for v in self.vertices)
        if edges != 2 * (6 + n):
            raise GraphError("edge count mismatch")
        if sum(self._mark.values()) != -4 + 3 * n:
            raise GraphError("mark sum mismatch")
        for v in self.vertices:
            want = 3 if self.is_corner(v) else 2
            if len(self._adj[v]) != want:
                raise GraphError(f"degree of {v!r} is not {want}")

    # -- canonical form ----------------------------------------------------

    def _edge_content(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        content: dict[tuple[int, int], list] = {pair: [] for pair in EDGE_PAIRS}
        for v, edge in self._edge.items():
            content[edge].append(self._frac[v])
        for pair in content:
            content[pair].sort(key=lambda f: (f[0] + f[1], f[0]))
        return content

    def canonical_form(self) -> str:
        """Label-independent encoding, minimized over corner relabelings.

        Two graphs have equal encodings exactly when a corner permutation
        preserving weights and the boundary flag carries one onto the
        other; the interleaving of insertions across different edges is
        quotiented out as well.
        """
        if self._canon is not None:
            return self._canon
        content = self._edge_content()
        bflag = [self.boundary == c for c in self.corners]
        w = self.initial_weights
        best = None
        for perm in permutations(range(4)):
            corner_key = tuple(
                (w[perm[i]].numerator, w[perm[i]].denominator, bflag[perm[i]])
                for i in range(4)
            )
            edges_key = []
            for i, j in EDGE_PAIRS:
                a, b = perm[i], perm[j]
                fr = content[(a, b)] if a < b else [(m2, m1) for (m1, m2) in content[(b, a)]]
                fr = sorted(fr, key=lambda f: (f[0] + f[1], f[0]))
                edges_key.append(tuple(fr))
            key = (corner_key, tuple(edges_key))
            if best is None or key < best[0]:
                best = (key, perm)
        self._canon = repr(best[0])
        return self._canon

    def normalized(self) -> "VisibleGraph":
        """Isomorphic graph with deterministic ids and insertion order.

        Graphs with equal canonical form normalize to identical objects,
        which keeps search output independent of discovery order.
        """
        content = self._edge_content()
        bflag = [self.boundary == c for c in self.corners]
        w = self.initial_weights
        best = None
        for perm in permutations(range(4)):
            corner_key = tuple(
                (w[perm[i]].numerator, w[perm[i]].denominator, bflag[perm[i]])
                for i in range(4)
            )
            edges_key = []
            for i, j in EDGE_PAIRS:
                a, b = perm[i], perm[j]
                fr = content[(a, b)] if a < b else [(m2, m1) for (m1, m2) in content[(b, a)]]
                fr = sorted(fr, key=lambda f: (f[0] + f[1], f[0]))
                edges_key.append(tuple(fr))
            key = (corner_key, tuple(edges_key))
            if best is None or key < best[0]:
                best = (key, perm)
        (corner_key, edges_key), perm = best
        corners = tuple(f"C{i}" for i in range(4))
        weights = tuple(w[perm[i]] for i in range(4))
        boundary = None
        for i in range(4):
            if bflag[perm[i]]:
                boundary = corners[i]
        g = VisibleGraph(corners, weights, boundary)
        for (i, j), fracs in zip(EDGE_PAIRS, edges_key):
            ids = {(1, 0): corners[i], (0, 1): corners[j]}
            for m1, m2 in fracs:
                p1, p2 = _stern_brocot_parents(m1, m2)
                vid = f"E{i}{j}_{m1}_{m2}"
                g = g.insert(ids[p1], ids[p2], vid)
                ids[(m1, m2)] = vid
        return g

    # -- equality (structural, id-sensitive) ------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VisibleGraph):
            return NotImplemented
        return (
            self.corners == other.corners
            and self.initial_weights == other.initial_weights
            and self.boundary == other.boundary
            and self.history == other.history
        )

    def __hash__(self) -> int:
        return hash((self.corners, self.initial_weights, self.boundary, self.history))

    def __repr__(self) -> str:
        return (
            f"VisibleGraph(corners={self.corners}, weights={self.initial_weights}, "
            f"boundary={self.boundary!r}, blowups={self.blowups})"
        )


def _stern_brocot_parents(m1: int, m2: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Creation parents of the coprime pair (m1, m2).

    The parents are the unique pair of coordinates (p1, p2), (q1, q2)
    with p1+q1 = m1, p2+q2 = m2 and cross determinant +-1, the corners
    being (1, 0) and (0, 1).
    """
    if (m1, m2) == (1, 1):
        return (1, 0), (0, 1)
    lo, hi = (1, 0), (0, 1)
    cur = (1, 1)
    while cur != (m1, m2):
        # descend: compare m1/m2 with cur as fractions (larger = closer to lo)
        if m1 * cur[1] > m2 * cur[0]:
            hi = cur
        else:
            lo = cur
        cur = (lo[0] + hi[0], lo[1] + hi[1])
    return lo, hi


# -- module-level operations ----------------------------------------------


def new_base(
    weights: Sequence[Rational],
    boundary: Optional[int] = None,
    corners: Sequence[str] = ("L0", "L1", "L2", "L3"),
) -> VisibleGraph:
    """Fresh K4 over four lines; ``boundary`` is a corner index or None."""
    if boundary is not None and not 0 <= boundary <= 3:
        raise GraphError("boundary index out of 0..3")
    bid = None if boundary is None else tuple(corners)[boundary]
    return VisibleGraph(corners, weights, bid)


def insert(graph: VisibleGraph, a: str, b: str, new_id: str) -> VisibleGraph:
    return graph.insert(a, b, new_id)


def edge_chains(graph: VisibleGraph) -> dict[tuple[int, int], tuple[str, ...]]:
    return graph.edge_chains()


def canonical_form(graph: VisibleGraph) -> str:
    return graph.canonical_form()


# -- file format ------------------------------------------------------------
#
#   corners A B C D
#   weights 1 1/2 2 3
#   boundary A          (optional)
#   insert X A B        (zero or more; order is the blowup order)
#
# '#' starts a comment; blank lines are ignored.


def parse(text: str) -> VisibleGraph:
    corners = None
    weights = None
    boundary = None
    inserts: list[Insertion] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kw, args = fields[0], fields[1:]
        if kw == "corners":
            if corners is not None:
                raise FormatError(f"line {lineno}: duplicate corners line")
            if len(args) != 4 or len(set(args)) != 4:
                raise FormatError(f"line {lineno}: need four distinct corner ids")
            corners = tuple(args)
        elif kw == "weights":
            if weights is not None:
                raise FormatError(f"line {lineno}: duplicate weights line")
            if len(args) != 4:
                raise FormatError(f"line {lineno}: need four weights")
            try:
                weights = tuple(Fraction(a) for a in args)
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(f"line {lineno}: bad weight: {exc}") from None
        elif kw == "boundary":
            if boundary is not None:
                raise FormatError(f"line {lineno}: duplicate boundary line")
            if len(args) != 1:
                raise FormatError(f"line {lineno}: boundary takes one corner id")
            boundary = args[0]
        elif kw == "insert":
            if len(args) != 3:
                raise FormatError(f"line {lineno}: insert takes new-id and two vertex ids")
            inserts.append(Insertion(args[0], args[1], args[2]))
        else:
            raise FormatError(f"line {lineno}: unknown directive {kw!r}")
    if corners is None or weights is None:
        raise FormatError("missing corners or weights line")
    if boundary is not None and boundary not in corners:
        raise FormatError(f"boundary {boundary!r} is not a corner")
    try:
        return VisibleGraph(corners, weights, boundary, inserts)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def serialize(graph: VisibleGraph) -> str:
    lines = [
        "corners " + " ".join(graph.corners),
        "weights " + " ".join(str(w) for w in graph.initial_weights),
    ]
    if graph.boundary is not None:
        lines.append(f"boundary {graph.boundary}")
    for ins in graph.history:
        lines.append(f"insert {ins.new_id} {ins.left_id} {ins.right_id}")
    return "\n".join(lines) + "\n"
