"""Immutable bit-row graphs and the exact combinatorial primitives on them.

Adjacency is stored as one Python integer per vertex: bit ``v`` of ``rows[u]``
is set iff ``{u, v}`` is an edge. Arbitrary-precision ints give word-parallel
row operations for free and make graphs hashable values. Vertices are
``0..order-1`` internally; the edge-list text format is 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapExceeded

__all__ = [
    "Graph",
    "VertexBijection",
    "empty_graph",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "named_graph",
    "pair_count",
    "pair_index",
    "parse_edge_list",
    "format_edge_list",
    "is_isomorphic",
    "find_isomorphism",
    "aut_count",
    "is_rigid",
    "distinct_relabeling_count",
]


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(u: int, v: int, n: int) -> int:
    """Index of the unordered pair {u, v} in lexicographic (i<j) order."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 3) // 2 + v - 1


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..order-1``.

    Instances are immutable and hashable; equality is bit-exact adjacency
    equality. Construct through the classmethods, which maintain the row
    invariants (symmetry, empty diagonal, consistent ``edge_count``).
    """

    order: int
    rows: tuple[int, ...]
    edge_count: int

    @classmethod
    def from_rows(cls, rows) -> "Graph":
        rows = tuple(rows)
        edge_count = sum(r.bit_count() for r in rows) // 2
        return cls(len(rows), rows, edge_count)

    @classmethod
    def from_edges(cls, order: int, edges) -> "Graph":
        if order < 0:
            raise ValueError("order must be non-negative")
        rows = [0] * order
        count = 0
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"edge ({u}, {v}) out of range for order {order}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if rows[u] >> v & 1:
                raise ValueError(f"duplicate edge ({u}, {v})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            count += 1
        return cls(order, tuple(rows), count)

    @classmethod
    def from_code(cls, order: int, code: int) -> "Graph":
        """Inverse of :meth:`adjacency_code`."""
        if code < 0 or code >> pair_count(order):
            raise ValueError("adjacency code out of range")
        rows = [0] * order
        k = 0
        for u in range(order):
            for v in range(u + 1, order):
                if code >> k & 1:
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
                k += 1
        return cls(order, tuple(rows), code.bit_count())

    # -- queries ---------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self.rows)

    def degree_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(r.bit_count() for r in self.rows))

    def neighbors(self, u: int):
        return _bits(self.rows[u])

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.order):
            row = self.rows[u] >> (u + 1)
            for b in _bits(row):
                out.append((u, u + 1 + b))
        return out

    def adjacency_code(self) -> int:
        """Upper-triangle adjacency bits packed in lexicographic pair order."""
        code = 0
        k = 0
        for u in range(self.order):
            row = self.rows[u]
            for v in range(u + 1, self.order):
                code |= (row >> v & 1) << k
                k += 1
        return code

    def validate(self) -> None:
        """Check the row invariants; raises ValueError on corruption."""
        if len(self.rows) != self.order:
            raise ValueError("row count does not match order")
        width = (1 << self.order) - 1
        for u, row in enumerate(self.rows):
            if row & ~width:
                raise ValueError(f"row {u} has bits beyond the vertex range")
            if row >> u & 1:
                raise ValueError(f"loop bit at vertex {u}")
        for u in range(self.order):
            for v in range(u + 1, self.order):
                if (self.rows[u] >> v & 1) != (self.rows[v] >> u & 1):
                    raise ValueError(f"asymmetric adjacency at ({u}, {v})")
        if sum(r.bit_count() for r in self.rows) != 2 * self.edge_count:
            raise ValueError("edge_count does not match rows")

    # -- transforms ------------------------------------------------------

    def complement(self) -> "Graph":
        mask = (1 << self.order) - 1
        rows = tuple((~r & mask) & ~(1 << u) for u, r in enumerate(self.rows))
        return Graph(self.order, rows, pair_count(self.order) - self.edge_count)

    def induced(self, subset) -> "Graph":
        """Induced subgraph on ``subset``; vertex i of the result is the i-th
        smallest member of ``subset``."""
        vs = tuple(sorted(subset))
        if len(set(vs)) != len(vs):
            raise ValueError("subset contains repeated vertices")
        if not vs:
            raise ValueError("subset is empty")
        if vs[0] < 0 or vs[-1] >= self.order:
            raise ValueError("subset out of range")
        rows = []
        for u in vs:
            row = 0
            src = self.rows[u]
            for j, v in enumerate(vs):
                row |= (src >> v & 1) << j
            rows.append(row)
        return Graph.from_rows(rows)

    def relabel(self, bijection: "VertexBijection") -> "Graph":
        """Relabel every vertex through ``bijection`` (domain must be the full
        vertex set)."""
        if bijection.domain != tuple(range(self.order)):
            raise ValueError("bijection domain must equal the vertex set")
        img = bijection.image
        rows = [0] * self.order
        for u, v in self.edges():
            a, b = img[u], img[v]
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return Graph(self.order, tuple(rows), self.edge_count)


@dataclass(frozen=True)
class VertexBijection:
    """Bijection from a set of vertices onto labels ``0..m-1``.

    ``domain`` is strictly increasing; ``image[i]`` is the label assigned to
    ``domain[i]``. Evaluable both directions.
    """

    domain: tuple[int, ...]
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "image", tuple(self.image))
        if len(self.domain) != len(self.image):
            raise ValueError("domain and image lengths differ")
        if any(a >= b for a, b in zip(self.domain, self.domain[1:])):
            raise ValueError("domain must be strictly increasing")
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError("image must be a permutation of 0..m-1")

    @classmethod
    def identity(cls, domain) -> "VertexBijection":
        domain = tuple(sorted(domain))
        return cls(domain, tuple(range(len(domain))))

    @classmethod
    def from_dict(cls, mapping: dict) -> "VertexBijection":
        domain = tuple(sorted(mapping))
        return cls(domain, tuple(mapping[v] for v in domain))

    @property
    def size(self) -> int:
        return len(self.domain)

    def apply(self, vertex: int) -> int:
        try:
            return self.image[self.domain.index(vertex)]
        except ValueError:
            raise KeyError(f"vertex {vertex} not in domain") from None

    def invert(self, label: int) -> int:
        try:
            return self.domain[self.image.index(label)]
        except ValueError:
            raise KeyError(f"label {label} not in image") from None

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain, self.image))


# -- constructors ---------------------------------------------------------


def empty_graph(n: int) -> Graph:
    if n < 0:
        raise ValueError("order must be non-negative")
    return Graph(n, (0,) * n, 0)


def complete_graph(n: int) -> Graph:
    mask = (1 << n) - 1
    rows = tuple(mask & ~(1 << u) for u in range(n))
    return Graph(n, rows, pair_count(n))


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least three vertices")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return Graph.from_edges(n, edges)


_NAMED = {"k": complete_graph, "p": path_graph, "c": cycle_graph, "e": empty_graph}


def named_graph(name: str) -> Graph:
    """Small pattern by short name: k4 (complete), p3 (path), c5 (cycle),
    e2 (empty)."""
    name = name.strip().lower()
    kind, digits = name[:1], name[1:]
    if kind not in _NAMED or not digits.isdigit():
        raise ValueError(f"unknown graph name {name!r} (want e.g. k3, p4, c5, e2)")
    return _NAMED[kind](int(digits))


# -- edge-list text format (1-based) --------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse the text format: first line ``n e``, then one ``u v`` line per
    edge, 1-based. Rejects loops, duplicates, out-of-range ids and count
    mismatches. Blank lines and ``#`` comments are skipped."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty edge list input")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'n edge_count'")
    try:
        order, declared = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError("first line must hold two integers") from None
    if order < 0 or declared < 0:
        raise ValueError("negative counts in header")
    body = lines[1:]
    if len(body) != declared:
        raise ValueError(f"declared {declared} edges but found {len(body)} edge lines")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"malformed edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"malformed edge line {ln!r}") from None
        if not (1 <= u <= order and 1 <= v <= order):
            raise ValueError(f"edge ({u}, {v}) out of range 1..{order}")
        edges.append((u - 1, v - 1))
    return Graph.from_edges(order, edges)


def format_edge_list(g: Graph) -> str:
    out = [f"{g.order} {g.edge_count}"]
    out.extend(f"{u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(out) + "\n"


# -- isomorphism -----------------------------------------------------------


def _iso_images(g1: Graph, g2: Graph, order: tuple[int, ...]) -> list[int] | None:
    """Backtracking search for an isomorphism g1 -> g2, assigning g1 vertices
    in ``order`` and trying targets in ascending id order. Returns the target
    list aligned to ``order``, or None. Both edges and non-edges must match."""
    n = g1.order
    deg1 = g1.degrees()
    deg2 = g2.degrees()
    rows1, rows2 = g1.rows, g2.rows
    target: list[int] = []
    used = 0

    def extend(pos: int) -> bool:
        nonlocal used
        if pos == n:
            return True
        u = order[pos]
        row_u = rows1[u]
        for w in range(n):
            if used >> w & 1 or deg2[w] != deg1[u]:
                continue
            ok = True
            for i in range(pos):
                if (row_u >> order[i] & 1) != (rows2[w] >> target[i] & 1):
                    ok = False
                    break
            if ok:
                target.append(w)
                used |= 1 << w
                if extend(pos + 1):
                    return True
                target.pop()
                used &= ~(1 << w)
        return False

    return target if extend(0) else None


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.order != g2.order or g1.edge_count != g2.edge_count:
        return False
    if g1.degree_multiset() != g2.degree_multiset():
        return False
    # fail-first: most-constrained (highest-degree) vertices first
    order = tuple(sorted(range(g1.order), key=lambda u: (-g1.degree(u), u)))
    return _iso_images(g1, g2, order) is not None


def find_isomorphism(g1: Graph, g2: Graph) -> VertexBijection | None:
    """First isomorphism in lexicographic image order, i.e. the witness whose
    image sequence (target of vertex 0, of vertex 1, ...) is smallest."""
    if g1.order != g2.order or g1.edge_count != g2.edge_count:
        return None
    if g1.degree_multiset() != g2.degree_multiset():
        return None
    images = _iso_images(g1, g2, tuple(range(g1.order)))
    if images is None:
        return None
    return VertexBijection(tuple(range(g1.order)), tuple(images))


# -- automorphisms ---------------------------------------------------------


def _refined_colors(g: Graph) -> tuple[int, ...]:
    """Stable iterated degree/neighborhood coloring (1-WL). Automorphisms
    preserve these colors."""
    n = g.order
    colors = list(g.degrees())
    classes = len(set(colors))
    while True:
        sigs = []
        for u in range(n):
            nb = tuple(sorted(colors[v] for v in _bits(g.rows[u])))
            sigs.append((colors[u], nb))
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        nclasses = len(set(new))
        if nclasses == classes:
            return tuple(new)
        colors, classes = new, nclasses


def _automorphism_extends(g: Graph, k: int, w: int, colors) -> bool:
    """Is there an automorphism fixing 0..k-1 pointwise with k -> w?"""
    n = g.order
    rows = g.rows
    target = list(range(k)) + [w]
    used = ((1 << k) - 1) | (1 << w)

    def extend(pos: int) -> bool:
        nonlocal used
        if pos == n:
            return True
        row = rows[pos]
        for cand in range(n):
            if used >> cand & 1 or colors[cand] != colors[pos]:
                continue
            ok = True
            for i in range(pos):
                if (row >> i & 1) != (rows[cand] >> target[i] & 1):
                    ok = False
                    break
            if ok:
                target.append(cand)
                used |= 1 << cand
                if extend(pos + 1):
                    return True
                target.pop()
                used &= ~(1 << cand)
        return False

    return extend(k + 1)


def _aut_count_brute(g: Graph) -> int:
    """Count automorphisms by pruned enumeration over all assignments."""
    n = g.order
    degs = g.degrees()
    rows = g.rows
    count = 0
    target: list[int] = []
    used = 0

    def extend(pos: int) -> None:
        nonlocal count, used
        if pos == n:
            count += 1
            return
        row = rows[pos]
        for cand in range(n):
            if used >> cand & 1 or degs[cand] != degs[pos]:
                continue
            ok = True
            for i in range(pos):
                if (row >> i & 1) != (rows[cand] >> target[i] & 1):
                    ok = False
                    break
            if ok:
                target.append(cand)
                used |= 1 << cand
                extend(pos + 1)
                target.pop()
                used &= ~(1 << cand)

    extend(0)
    return count


def _aut_count_refined(g: Graph) -> int:
    """|Aut(g)| as a product of orbit sizes along the pointwise stabilizer
    chain of vertices 0, 1, .... Each orbit membership is one existence
    search, so highly symmetric graphs are counted without enumerating their
    automorphisms."""
    n = g.order
    colors = _refined_colors(g)
    total = 1
    for k in range(n):
        orbit = 1
        for w in range(k + 1, n):
            if colors[w] != colors[k]:
                continue
            if any(g.has_edge(k, i) != g.has_edge(w, i) for i in range(k)):
                continue
            if _automorphism_extends(g, k, w, colors):
                orbit += 1
        total *= orbit
    return total


_BRUTE_MAX_ORDER = 10


def aut_count(g: Graph, *, method: str = "auto", cap: int = 20) -> int:
    """Exact automorphism group size.

    ``auto`` uses pruned enumeration up to order 10 and the refinement +
    stabilizer-chain counter above that. ``cap`` bounds the accepted order.
    Note the brute counter's work grows with |Aut(g)|; ``refined`` is exact
    too and stays fast on symmetric graphs.
    """
    if g.order == 0:
        return 1
    if g.order > cap:
        raise CapExceeded(f"order {g.order} exceeds aut_count cap {cap}")
    if method == "auto":
        method = "brute" if g.order <= _BRUTE_MAX_ORDER else "refined"
    if method == "brute":
        return _aut_count_brute(g)
    if method == "refined":
        return _aut_count_refined(g)
    raise ValueError(f"unknown method {method!r}")


def is_rigid(g: Graph) -> bool:
    """True iff the identity is the only automorphism."""
    n = g.order
    colors = _refined_colors(g)
    if len(set(colors)) == n:
        return True
    for k in range(n):
        for w in range(k + 1, n):
            if colors[w] != colors[k]:
                continue
            if any(g.has_edge(k, i) != g.has_edge(w, i) for i in range(k)):
                continue
            if _automorphism_extends(g, k, w, colors):
                return False
    return True


def distinct_relabeling_count(h: Graph, *, cap: int = 20) -> int:
    """Number of adjacency-distinct relabelings of ``h``: order! / |Aut(h)|."""
    return math.factorial(h.order) // aut_count(h, cap=cap)
