"""Column/row interaction graphs and treedepth decompositions.

The primal graph of a matrix has one vertex per column, with an edge whenever
two columns share a row with nonzero entries in both; the dual graph is the
primal graph of the transpose.  A decomposition is a rooted forest over the
vertices; it is valid when every graph edge joins an ancestor-descendant pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .linalg import DimensionError, Matrix


class StructureError(Exception):
    """Invalid graph/decomposition input."""


class CapExceededError(Exception):
    """A configured search or size cap was exceeded."""


class Graph:
    """Simple undirected graph on vertices 0..n-1, no self-loops."""

    __slots__ = ("vertex_count", "edges", "adj")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]):
        norm = set()
        for u, v in edges:
            if u == v:
                raise StructureError("self-loop")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise StructureError("edge endpoint out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", frozenset(norm))
        adj: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.vertex_count == other.vertex_count
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.vertex_count, self.edges))

    def __repr__(self):
        return f"Graph(n={self.vertex_count}, m={len(self.edges)})"

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph relabelled to 0..len(vertices)-1 in given order."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(vertices), edges)

    def to_text(self) -> str:
        """Debug dump: one ``u v`` edge per line, sorted."""
        return "\n".join(f"{u} {v}" for u, v in sorted(self.edges))


def primal_graph(a: Matrix) -> Graph:
    """One vertex per column; columns sharing a nonzero row are adjacent."""
    edges = set()
    for i in range(a.rows):
        support = [j for j in range(a.cols) if a[i, j] != 0]
        for x in range(len(support)):
            for y in range(x + 1, len(support)):
                edges.add((support[x], support[y]))
    return Graph(a.cols, edges)


def dual_graph(a: Matrix) -> Graph:
    """Primal graph of the transpose: one vertex per row."""
    return primal_graph(a.transpose())


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex lists of the connected components, lowest-index first."""
    seen = [False] * g.vertex_count
    comps = []
    for s in range(g.vertex_count):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


class TdDecomposition:
    """Rooted forest over vertices 0..n-1, stored as a parent map."""

    __slots__ = ("vertex_count", "parent", "_children", "_roots")

    def __init__(self, parent: Sequence[Optional[int]]):
        n = len(parent)
        children: list[list[int]] = [[] for _ in range(n)]
        roots = []
        for v, p in enumerate(parent):
            if p is None:
                roots.append(v)
            else:
                if not (0 <= p < n):
                    raise StructureError("parent out of range")
                children[p].append(v)
        if not roots and n > 0:
            raise StructureError("no root: parent relation is cyclic")
        # acyclicity: every vertex must reach a root
        depth = [-1] * n
        for r in roots:
            depth[r] = 1
            stack = [r]
            while stack:
                u = stack.pop()
                for c in children[u]:
                    depth[c] = depth[u] + 1
                    stack.append(c)
        if any(d < 0 for d in depth):
            raise StructureError("cycle in parent relation")
        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "parent", tuple(parent))
        object.__setattr__(self, "_children", tuple(tuple(sorted(c)) for c in children))
        object.__setattr__(self, "_roots", tuple(sorted(roots)))

    def __setattr__(self, name, value):
        raise AttributeError("TdDecomposition is immutable")

    @property
    def roots(self) -> tuple[int, ...]:
        return self._roots

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def is_ancestor(self, u: int, v: int) -> bool:
        """True iff u is a (strict or equal) ancestor of v."""
        w: Optional[int] = v
        while w is not None:
            if w == u:
                return True
            w = self.parent[w]
        return False

    def subtree(self, v: int) -> list[int]:
        """Vertices of the subtree rooted at v, sorted."""
        out = [v]
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self._children[u]:
                out.append(c)
                stack.append(c)
        return sorted(out)

    def __eq__(self, other):
        return isinstance(other, TdDecomposition) and self.parent == other.parent

    def __hash__(self):
        return hash(self.parent)

    def __repr__(self):
        return f"TdDecomposition(n={self.vertex_count}, roots={self._roots})"


@dataclass(frozen=True)
class TdStats:
    """Height, topological height and level heights of a decomposition."""

    height: int
    topological_height: int
    level_heights: tuple[int, ...]


def validate_td(g: Graph, f: TdDecomposition) -> bool:
    """True iff every edge of g joins an ancestor-descendant pair of f."""
    if g.vertex_count != f.vertex_count:
        raise DimensionError("graph and decomposition vertex counts differ")
    return all(f.is_ancestor(u, v) or f.is_ancestor(v, u) for u, v in g.edges)


def td_stats(f: TdDecomposition) -> TdStats:
    """Statistics per root-leaf path, maximised over all paths.

    A vertex is degenerate when it has exactly one child.  The first level
    height counts the root segment up to and including the first
    non-degenerate vertex; each later level counts the vertices strictly below
    the previous non-degenerate vertex down to the next one.
    """
    if f.vertex_count == 0:
        return TdStats(0, 0, ())
    height = 0
    ttd = 0
    levels: dict[int, int] = {}

    # walk root-leaf paths; state = (vertex, depth, nondeg_index, segment size)
    for root in f.roots:
        stack = [(root, 1, 0, 1)]
        while stack:
            v, depth, level, seg = stack.pop()
            kids = f.children(v)
            nondeg = len(kids) != 1
            if nondeg:
                level += 1
                levels[level] = max(levels.get(level, 0), seg)
                seg = 0
            if not kids:
                height = max(height, depth)
                ttd = max(ttd, level)
                continue
            for c in kids:
                stack.append((c, depth + 1, level, seg + 1))
    return TdStats(height, ttd, tuple(levels[i] for i in range(1, ttd + 1)))


def restrict_decomposition(f: TdDecomposition, vertices: Sequence[int]) -> TdDecomposition:
    """Decomposition induced on a vertex subset (nearest kept ancestor).

    Valid for any induced subgraph of a graph that f is valid for; the result
    may be a forest even when f is a tree.  Vertices are relabelled to
    0..len(vertices)-1 in the given order.
    """
    index = {v: i for i, v in enumerate(vertices)}
    parent: list[Optional[int]] = []
    for v in vertices:
        p = f.parent[v]
        while p is not None and p not in index:
            p = f.parent[p]
        parent.append(index[p] if p is not None else None)
    return TdDecomposition(parent)


def td_compute(g: Graph, mode: str = "exact", exact_cap: int = 16) -> TdDecomposition:
    """Treedepth decomposition of a connected graph.

    Exact mode finds a minimum-height decomposition by recursive root-choice
    search memoised on vertex subsets, and refuses graphs larger than
    exact_cap.  Heuristic mode removes a greedily chosen balanced separator,
    recurses, and stacks the separator as a path above the recursive roots;
    the result is always valid but may not have minimum height.
    """
    if g.vertex_count == 0:
        return TdDecomposition([])
    if len(connected_components(g)) != 1:
        raise StructureError("graph is not connected; decompose components first")
    if mode == "exact":
        if g.vertex_count > exact_cap:
            raise CapExceededError(
                f"exact treedepth limited to {exact_cap} vertices, got {g.vertex_count}")
        return _td_exact(g)
    if mode == "heuristic":
        return _td_heuristic(g)
    raise ValueError(f"unknown mode {mode!r}")


def _mask_components(mask: int, adj: Sequence[int]) -> list[int]:
    """Connected components of the vertices set in mask, as bitmasks."""
    comps = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            v = frontier & -frontier
            frontier &= frontier - 1
            nxt = adj[v.bit_length() - 1] & mask & ~comp
            comp |= nxt
            frontier |= nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def _td_exact(g: Graph) -> TdDecomposition:
    n = g.vertex_count
    adj = [0] * n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    memo: dict[int, tuple[int, int]] = {}  # mask -> (height, chosen root)

    def best(mask: int) -> tuple[int, int]:
        got = memo.get(mask)
        if got is not None:
            return got
        if mask & (mask - 1) == 0:
            memo[mask] = (1, mask.bit_length() - 1)
            return memo[mask]
        best_h = None
        best_v = -1
        m = mask
        while m:
            vbit = m & -m
            m &= m - 1
            v = vbit.bit_length() - 1
            h = 1 + max(best(c)[0] for c in _mask_components(mask & ~vbit, adj))
            if best_h is None or h < best_h:  # ties keep the lowest vertex index
                best_h, best_v = h, v
        memo[mask] = (best_h, best_v)
        return memo[mask]

    parent: list[Optional[int]] = [None] * n

    def build(mask: int, above: Optional[int]) -> None:
        _, v = best(mask)
        parent[v] = above
        rest = mask & ~(1 << v)
        for comp in _mask_components(rest, adj):
            build(comp, v)

    full = (1 << n) - 1
    best(full)
    build(full, None)
    return TdDecomposition(parent)


def _td_heuristic(g: Graph) -> TdDecomposition:
    parent: list[Optional[int]] = [None] * g.vertex_count

    def solve(vertices: list[int], above: Optional[int]) -> None:
        if len(vertices) == 1:
            parent[vertices[0]] = above
            return
        live = set(vertices)
        sub = g.induced(vertices)
        local = {v: i for i, v in enumerate(vertices)}
        # peel separator vertices, preferring the removal that best balances
        # the remaining components, breaking ties by minimum degree then index
        sep: list[int] = []
        while len(live) > 1:
            comps = _components_of(sub, [local[v] for v in live])
            if len(comps) > 1:
                break
            best_v = None
            best_key = None
            for v in sorted(live):
                rest = [local[u] for u in live if u != v]
                largest = max((len(c) for c in _components_of(sub, rest)), default=0)
                degree = sum(1 for u in sub.adj[local[v]] if vertices[u] in live)
                key = (largest, degree, v)
                if best_key is None or key < best_key:
                    best_key, best_v = key, v
            sep.append(best_v)
            live.remove(best_v)
        # stack the separator as a path above the recursive roots
        top = above
        for v in sep:
            parent[v] = top
            top = v
        for comp in _components_of(sub, [local[v] for v in sorted(live)]):
            solve([vertices[i] for i in comp], top)

    for comp in connected_components(g):
        solve(comp, None)
    return TdDecomposition(parent)


def _components_of(g: Graph, vertices: list[int]) -> list[list[int]]:
    """Connected components of an induced vertex subset of g, sorted."""
    alive = set(vertices)
    seen: set[int] = set()
    comps = []
    for s in sorted(alive):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if v in alive and v not in seen:
                    seen.add(v)
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def decomposition_for_matrix(a: Matrix, side: str = "primal", mode: str = "auto",
                             exact_cap: int = 16) -> TdDecomposition:
    """Decomposition of a matrix graph, handling disconnected graphs.

    mode "auto" uses exact search per component when it fits under exact_cap
    and the heuristic otherwise.
    """
    g = primal_graph(a) if side == "primal" else dual_graph(a)
    parent: list[Optional[int]] = [None] * g.vertex_count
    for comp in connected_components(g):
        sub = g.induced(comp)
        if mode == "auto":
            comp_mode = "exact" if len(comp) <= exact_cap else "heuristic"
        else:
            comp_mode = mode
        f = td_compute(sub, mode=comp_mode, exact_cap=exact_cap)
        for i, v in enumerate(comp):
            p = f.parent[i]
            parent[v] = comp[p] if p is not None else None
    return TdDecomposition(parent)
