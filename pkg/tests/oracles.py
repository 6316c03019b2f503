"""Brute-force reference computations, independent of the package internals."""

import itertools
from fractions import Fraction

import networkx as nx


def nx_graph(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def brute_spanning_trees(g):
    """Every (n-1)-subset of edges that forms a tree, checked by networkx."""
    out = []
    for idx in itertools.combinations(range(g.m), g.n - 1):
        H = nx.Graph()
        H.add_nodes_from(range(g.n))
        H.add_edges_from(g.edges[i] for i in idx)
        if nx.is_tree(H):
            out.append(idx)
    return out


def tree_ratio_resistances(g, c):
    """omega_e = (weighted trees containing e / c_e) / Z, by brute force."""
    c = [Fraction(x) for x in c]
    trees = brute_spanning_trees(g)
    Z = Fraction(0)
    num = [Fraction(0)] * g.m
    for T in trees:
        w = Fraction(1)
        for i in T:
            w *= c[i]
        Z += w
        for i in T:
            num[i] += w
    return [num[i] / c[i] / Z for i in range(g.m)]


def brute_hamiltonian_paths(g):
    """Edge sets of vertex permutations that walk along edges."""
    found = set()
    for perm in itertools.permutations(range(g.n)):
        if perm[0] > perm[-1]:
            continue
        try:
            found.add(tuple(sorted(g.index(a, b) for a, b in zip(perm, perm[1:]))))
        except (KeyError, ValueError):
            continue
    return sorted(found)


def brute_one_tough(g):
    G = nx_graph(g)
    for k in range(1, g.n):
        for U in itertools.combinations(range(g.n), k):
            H = G.copy()
            H.remove_nodes_from(U)
            if nx.number_connected_components(H) > max(k, 1):
                return False
    return True


def brute_matchings(g):
    out = []
    for k in range(g.m + 1):
        for idx in itertools.combinations(range(g.m), k):
            vs = [v for i in idx for v in g.edges[i]]
            if len(vs) == len(set(vs)):
                out.append(idx)
    return out


def has_hamiltonian_cycle(g):
    if g.n < 3:
        return False
    for perm in itertools.permutations(range(1, g.n)):
        cyc = (0,) + perm
        if all(g.has_edge(a, b) for a, b in zip(cyc, cyc[1:] + (0,))):
            return True
    return False


def atlas_connected(max_n):
    """Every connected graph on 2..max_n vertices from the networkx atlas."""
    from rescurv.graph import Graph

    out = []
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if 2 <= n <= max_n and nx.is_connected(G):
            out.append(Graph(n, sorted(tuple(sorted(e)) for e in G.edges()), name=f"atlas{len(out)}"))
    return out


def batch_curvature(g, C):
    """Curvature for each row of the weight array ``C`` (float, via numpy)."""
    import numpy as np

    C = np.asarray(C, dtype=float)
    B = np.zeros((g.m, g.n))
    for i, (u, v) in enumerate(g.edges):
        B[i, u], B[i, v] = 1, -1
    L = np.einsum("ei,se,ej->sij", B, C, B)
    J = np.full((g.n, g.n), 1.0 / g.n)
    Lp = np.linalg.inv(L + J) - J
    us = np.array([e[0] for e in g.edges])
    vs = np.array([e[1] for e in g.edges])
    omega = Lp[:, us, us] + Lp[:, vs, vs] - 2 * Lp[:, us, vs]
    r = C * omega
    return 1 - 0.5 * r @ np.abs(B)


def _adjacency(g):
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def dfs_hamiltonian_path_count(g):
    """Undirected Hamiltonian paths, by extending vertex sequences."""
    adj = _adjacency(g)
    if g.n == 1:
        return 1
    count = 0

    def extend(seq, seen):
        nonlocal count
        if len(seq) == g.n:
            count += 1
            return
        for w in adj[seq[-1]]:
            if w not in seen:
                seen.add(w)
                seq.append(w)
                extend(seq, seen)
                seq.pop()
                seen.discard(w)

    for s in range(g.n):
        extend([s], {s})
    return count // 2


def dfs_has_hamiltonian_cycle(g):
    adj = _adjacency(g)
    if g.n < 3:
        return False

    def extend(seq, seen):
        if len(seq) == g.n:
            return 0 in adj[seq[-1]]
        for w in adj[seq[-1]]:
            if w not in seen:
                seen.add(w)
                seq.append(w)
                if extend(seq, seen):
                    return True
                seq.pop()
                seen.discard(w)
        return False

    return extend([0], {0})
