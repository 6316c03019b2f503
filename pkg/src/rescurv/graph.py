"""Simple undirected graphs with canonical edge order, and brute-force
combinatorics on them (spanning trees, matchings, Hamiltonian paths,
toughness, blocks, vertex transitivity).

Every vector indexed by edges uses the canonical order of ``Graph.edges``:
pairs ``(u, v)`` with ``u < v`` sorted lexicographically.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import ConnectivityError, ParameterError, ResourceError
from .exact import bareiss_det

TREE_CAP = 200_000
MATCHING_CAP = 200_000
TOUGHNESS_MAX_VERTICES = 16
AUTOMORPHISM_MAX_VERTICES = 16


@dataclass(frozen=True)
class Graph:
    """Simple loopless graph on vertices ``0..n-1``."""

    n: int
    edges: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ParameterError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        norm = set()
        for e in self.edges:
            try:
                u, v = (int(e[0]), int(e[1]))
            except (TypeError, ValueError, IndexError) as exc:
                raise ParameterError(f"bad edge {e!r}") from exc
            if len(e) != 2:
                raise ParameterError(f"bad edge {e!r}")
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"edge {e!r} out of range for n={self.n}")
            p = (min(u, v), max(u, v))
            if p in norm:
                raise ParameterError(f"parallel edge {p}")
            norm.add(p)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def m(self):
        return len(self.edges)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"

    @cached_property
    def edge_index(self):
        return {e: i for i, e in enumerate(self.edges)}

    def index(self, u, v):
        try:
            return self.edge_index[(min(u, v), max(u, v))]
        except KeyError:
            raise ParameterError(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in self.edge_index

    @cached_property
    def adjacency(self):
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def incident(self):
        """Edge indices incident to each vertex."""
        inc = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def degree(self, v):
        return len(self.adjacency[v])

    def degrees(self):
        return [len(a) for a in self.adjacency]

    def is_connected(self):
        return self.n > 0 and count_components(self.n, self.edges) == 1

    def require_connected(self):
        if not self.is_connected():
            raise ConnectivityError(f"{self!r} is not connected")

    def induced_edges(self, vertices):
        """Indices of edges with both ends in ``vertices``."""
        s = set(vertices)
        return [i for i, (u, v) in enumerate(self.edges) if u in s and v in s]

    def without_vertices(self, removed):
        """Subgraph on the remaining vertices, relabelled ``0..k-1``.

        Returns ``(graph, labels)`` with ``labels[new] = old``.
        """
        removed = set(removed)
        keep = [v for v in range(self.n) if v not in removed]
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph(len(keep), edges), keep

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))
        self.count = n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.count -= 1
        return True


def count_components(n, edges, removed=()):
    """Number of connected components after deleting ``removed`` vertices."""
    removed = set(removed)
    dsu = _DSU(n)
    for u, v in edges:
        if u not in removed and v not in removed:
            dsu.union(u, v)
    return dsu.count - len(removed)


def edge_set_rank(g, idx):
    """Rank of an edge subset in the cycle matroid: n - #components of (V, idx)."""
    dsu = _DSU(g.n)
    for i in idx:
        u, v = g.edges[i]
        dsu.union(u, v)
    return g.n - dsu.count


# -- named constructions -----------------------------------------------------

def _positive(name, *vals):
    for v in vals:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ParameterError(f"{name}: size parameters must be integers >= 1, got {vals}")


def path(n):
    _positive("path", n)
    return Graph(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def cycle(n):
    _positive("cycle", n)
    if n < 3:
        raise ParameterError(f"cycle needs n >= 3, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def complete(n):
    _positive("complete", n)
    return Graph(n, list(combinations(range(n), 2)), name=f"K{n}")


def complete_bipartite(a, b):
    _positive("complete_bipartite", a, b)
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)], name=f"K{a},{b}")


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner, name="Petersen")


def cartesian_product(g, h):
    """Cartesian product; vertex ``(u, x)`` gets id ``u * h.n + x``."""
    edges = []
    for u in range(g.n):
        for x, y in h.edges:
            edges.append((u * h.n + x, u * h.n + y))
    for u, v in g.edges:
        for x in range(h.n):
            edges.append((u * h.n + x, v * h.n + x))
    return Graph(g.n * h.n, edges)


def grid(n, m):
    _positive("grid", n, m)
    g = cartesian_product(path(n), path(m))
    return Graph(g.n, g.edges, name=f"grid{n}x{m}")


def glue(g, h, at_g=0, at_h=0, name=""):
    """Identify vertex ``at_g`` of ``g`` with vertex ``at_h`` of ``h``."""
    relabel = {}
    nxt = g.n
    for v in range(h.n):
        if v == at_h:
            relabel[v] = at_g
        else:
            relabel[v] = nxt
            nxt += 1
    edges = list(g.edges) + [(relabel[u], relabel[v]) for u, v in h.edges]
    return Graph(nxt, edges, name=name)


def build_named(name, *params):
    """Build ``path``, ``cycle``, ``complete``, ``complete_bipartite``,
    ``petersen`` or ``grid`` by keyword."""
    builders = {
        "path": (path, 1),
        "cycle": (cycle, 1),
        "complete": (complete, 1),
        "complete_bipartite": (complete_bipartite, 2),
        "petersen": (petersen, 0),
        "grid": (grid, 2),
    }
    if name not in builders:
        raise ParameterError(f"unknown graph family {name!r}")
    fn, arity = builders[name]
    if len(params) != arity:
        raise ParameterError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return fn(*params)


# -- blocks ---------------------------------------------------------------

@dataclass(frozen=True)
class Blocks:
    components: tuple  # tuple of tuples of edge indices
    cut_vertices: tuple

    def vertex_sets(self, g):
        out = []
        for comp in self.components:
            vs = set()
            for i in comp:
                vs.update(g.edges[i])
            out.append(tuple(sorted(vs)))
        return out

    def block_of_edge(self):
        lab = {}
        for b, comp in enumerate(self.components):
            for i in comp:
                lab[i] = b
        return [lab[i] for i in sorted(lab)]


def biconnected_components(g):
    """Partition the edges of a connected graph into blocks.

    Hopcroft-Tarjan lowpoint search with an explicit stack. Blocks are
    reported as sorted tuples of edge indices, ordered by smallest index.
    """
    g.require_connected()
    n = g.n
    disc = [-1] * n
    low = [0] * n
    timer = 0
    comps = []
    cuts = set()
    estack = []
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        # frames: (vertex, parent edge index, iterator over incident edges)
        stack = [(root, -1, iter(g.incident[root]))]
        while stack:
            v, pe, it = stack[-1]
            advanced = False
            for ei in it:
                if ei == pe:
                    continue
                a, b = g.edges[ei]
                w = b if a == v else a
                if disc[w] == -1:
                    estack.append(ei)
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, ei, iter(g.incident[w])))
                    advanced = True
                    break
                elif disc[w] < disc[v]:
                    estack.append(ei)
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    if u != root:
                        cuts.add(u)
                    comp = []
                    while True:
                        ei = estack.pop()
                        comp.append(ei)
                        if ei == pe:
                            break
                    comps.append(tuple(sorted(comp)))
        if root_children > 1:
            cuts.add(root)
    comps.sort()
    return Blocks(tuple(comps), tuple(sorted(cuts)))


def is_biconnected(g):
    return g.is_connected() and len(biconnected_components(g).components) <= 1


# -- spanning trees -----------------------------------------------------------

def count_spanning_trees(g):
    """Matrix-Tree theorem: any cofactor of the unweighted Laplacian."""
    if g.n == 0:
        return 0
    if g.n == 1:
        return 1
    L = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        L[u][v] -= 1
        L[v][u] -= 1
        L[u][u] += 1
        L[v][v] += 1
    return bareiss_det([row[1:] for row in L[1:]])


def _connects(edges, k):
    """Whether the multigraph ``edges`` on super-vertices ``0..k-1`` is connected."""
    if k <= 1:
        return True
    adj = [[] for _ in range(k)]
    for a, b, _ in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * k
    seen[0] = True
    todo = [0]
    cnt = 1
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                cnt += 1
                todo.append(y)
    return cnt == k


def enumerate_spanning_trees(g, cap=TREE_CAP):
    """All spanning trees as sorted tuples of edge indices, in lexicographic order.

    Contraction/deletion: the lowest remaining edge is either contracted
    into the tree or deleted (when deletion keeps the multigraph connected).
    The count is checked against the Matrix-Tree determinant before any
    enumeration starts.
    """
    g.require_connected()
    total = count_spanning_trees(g)
    if total > cap:
        raise ResourceError(f"{g!r} has {total} spanning trees, above the cap of {cap}")
    out = []

    def rec(edges, k, chosen):
        if k == 1:
            out.append(tuple(sorted(chosen)))
            return
        a, b, idx = edges[0]
        rest = edges[1:]
        # contract b into a, then shift labels above b down by one
        merged = []
        for x, y, j in rest:
            x = a if x == b else x
            y = a if y == b else y
            if x == y:
                continue
            if x > b:
                x -= 1
            if y > b:
                y -= 1
            merged.append((x, y, j))
        chosen.append(idx)
        rec(merged, k - 1, chosen)
        chosen.pop()
        parallel = any((x == a and y == b) or (x == b and y == a) for x, y, _ in rest)
        if parallel or _connects(rest, k):
            rec(rest, k, chosen)

    if g.n == 1:
        return [()]
    rec([(u, v, i) for i, (u, v) in enumerate(g.edges)], g.n, [])
    out.sort()
    if len(out) != total:
        from .errors import ConsistencyError
        raise ConsistencyError(f"enumerated {len(out)} trees but Matrix-Tree gives {total}")
    return out


# -- matchings ---------------------------------------------------------------

def enumerate_matchings(g, cap=MATCHING_CAP):
    """All matchings (including the empty one) as sorted tuples of edge indices."""
    out = []
    covered = [False] * g.n

    def rec(start, chosen):
        out.append(tuple(chosen))
        if len(out) > cap:
            raise ResourceError(f"{g!r} has more than {cap} matchings (cap)")
        for i in range(start, g.m):
            u, v = g.edges[i]
            if covered[u] or covered[v]:
                continue
            covered[u] = covered[v] = True
            chosen.append(i)
            rec(i + 1, chosen)
            chosen.pop()
            covered[u] = covered[v] = False

    rec(0, [])
    out.sort(key=lambda t: (len(t), t))
    return out


def maximum_matching_size(g):
    """Size of a maximum matching (blossom algorithm via networkx)."""
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return len(nx.max_weight_matching(G, maxcardinality=True))


# -- Hamiltonian paths ---------------------------------------------------------

def hamiltonian_paths(g):
    """Hamiltonian paths as sorted edge-index tuples (undirected, no duplicates)."""
    if g.n == 0:
        return []
    if g.n == 1:
        return [()]
    found = set()
    adj = [sorted(a) for a in g.adjacency]
    visited = [False] * g.n
    order = []

    def dfs(v, depth):
        if depth == g.n:
            if order[0] < order[-1]:
                found.add(tuple(sorted(g.index(order[i], order[i + 1]) for i in range(g.n - 1))))
            return
        for w in adj[v]:
            if not visited[w]:
                visited[w] = True
                order.append(w)
                dfs(w, depth + 1)
                order.pop()
                visited[w] = False

    for s in range(g.n):
        visited[s] = True
        order.append(s)
        dfs(s, 1)
        order.pop()
        visited[s] = False
    return sorted(found)


def is_hamiltonian(g):
    """Whether ``g`` has a Hamiltonian cycle (``K_1`` and ``K_2`` count as not)."""
    if g.n < 3:
        return False
    adj = g.adjacency
    visited = [False] * g.n
    visited[0] = True

    def dfs(v, depth):
        if depth == g.n:
            return 0 in adj[v]
        for w in adj[v]:
            if not visited[w]:
                visited[w] = True
                if dfs(w, depth + 1):
                    return True
                visited[w] = False
        return False

    return dfs(0, 1)


# -- toughness -------------------------------------------------------------------

@dataclass(frozen=True)
class ToughnessReport:
    one_tough: bool
    witness: tuple  # vertex set maximizing components(G-U) - |U|
    excess: int     # components(G-U) - |U| at the witness, over disconnecting U


def is_one_tough(g, max_vertices=TOUGHNESS_MAX_VERTICES):
    """Brute force over all nonempty proper ``U``: is ``c(G-U) <= |U|`` whenever
    ``G-U`` is disconnected?"""
    if g.n > max_vertices:
        raise ResourceError(f"toughness check limited to {max_vertices} vertices, {g!r} has {g.n}")
    best = None
    best_excess = None
    for mask in range(1, (1 << g.n) - 1):
        U = [v for v in range(g.n) if mask >> v & 1]
        c = count_components(g.n, g.edges, U)
        if c < 2:
            continue
        ex = c - len(U)
        if best_excess is None or ex > best_excess:
            best, best_excess = tuple(U), ex
    if best is None:
        # no disconnecting set: complete graphs are trivially 1-tough
        return ToughnessReport(True, (), 0)
    return ToughnessReport(best_excess <= 0, best, best_excess)


# -- automorphisms -----------------------------------------------------------

def _find_automorphism(g, src, dst):
    n = g.n
    adj = g.adjacency
    deg = g.degrees()
    if deg[src] != deg[dst]:
        return None
    mapping = [-1] * n
    used = [False] * n
    mapping[src] = dst
    used[dst] = True
    # BFS order from src keeps candidate sets small
    order = [src]
    seen = {src}
    i = 0
    while i < len(order):
        for w in sorted(adj[order[i]]):
            if w not in seen:
                seen.add(w)
                order.append(w)
        i += 1
    order += [v for v in range(n) if v not in seen]

    def consistent(v, t):
        if deg[v] != deg[t]:
            return False
        for w in adj[v]:
            mw = mapping[w]
            if mw != -1 and mw not in adj[t]:
                return False
        for w in range(n):
            mw = mapping[w]
            if mw != -1 and w != v and (w in adj[v]) != (mw in adj[t]):
                return False
        return True

    def rec(k):
        if k == n:
            return True
        v = order[k]
        for t in range(n):
            if not used[t] and consistent(v, t):
                mapping[v] = t
                used[t] = True
                if rec(k + 1):
                    return True
                mapping[v] = -1
                used[t] = False
        return False

    return list(mapping) if rec(1) else None


def is_vertex_transitive(g, max_vertices=AUTOMORPHISM_MAX_VERTICES):
    """Exact check: for every vertex ``v`` search an automorphism sending 0 to ``v``."""
    if g.n > max_vertices:
        raise ResourceError(f"automorphism search limited to {max_vertices} vertices, {g!r} has {g.n}")
    if g.n <= 1:
        return True
    if len(set(g.degrees())) > 1:
        return False
    return all(_find_automorphism(g, 0, v) is not None for v in range(1, g.n))


def is_bipartite(g):
    """Return ``(True, side)`` with ``side[v]`` in {0, 1}, or ``(False, None)``."""
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] != -1:
            continue
        side[s] = 0
        todo = [s]
        while todo:
            x = todo.pop()
            for y in g.adjacency[x]:
                if side[y] == -1:
                    side[y] = 1 - side[x]
                    todo.append(y)
                elif side[y] == side[x]:
                    return False, None
    return True, side


def tree_degrees(g, tree):
    deg = [0] * g.n
    for i in tree:
        u, v = g.edges[i]
        deg[u] += 1
        deg[v] += 1
    return deg
