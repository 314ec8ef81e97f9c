"""Independent reference computations used only by the tests."""

from fractions import Fraction

import networkx as nx

from heatgraph import graphs


def suite():
    return [
        graphs.complete(4),
        graphs.petersen(),
        graphs.hypercube(3),
        graphs.cycle(8),
        graphs.circulant(10, [1, 2]),
        graphs.random_regular(12, 4, seed=1),
    ]


def transitive_suite():
    return suite()[:5]


def to_networkx(g):
    G = nx.MultiGraph() if g.multigraph else nx.Graph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_edges_from(g.edges)
    return G


def nb_walks(g, x0, m):
    """All non-backtracking vertex sequences of length ``m`` from ``x0`` (exhaustive)."""
    walks = [(x0,)]
    for _ in range(m):
        nxt = []
        for w in walks:
            for y in g.neighbors[w[-1]]:
                if len(w) >= 2 and y == w[-2]:
                    continue
                nxt.append(w + (y,))
        walks = nxt
    return walks


def brute_geodesic_counts(g, x0, m_max):
    out = []
    for m in range(m_max + 1):
        row = [0] * g.vertex_count
        for w in nb_walks(g, x0, m):
            row[w[-1]] += 1
        out.append(row)
    return out


def brute_closed_tailless(g, x, m):
    if m == 0:
        return 1
    return sum(1 for w in nb_walks(g, x, m) if w[-1] == x and (m < 2 or w[1] != w[-2]))


def tree_radial_return(q, t):
    """Return probability on the tree from the birth-death chain on radii."""
    dist = {0: Fraction(1)}
    for _ in range(t):
        new = {}
        for r, p in dist.items():
            if r == 0:
                new[1] = new.get(1, 0) + p
            else:
                new[r + 1] = new.get(r + 1, 0) + p * Fraction(q, q + 1)
                new[r - 1] = new.get(r - 1, 0) + p * Fraction(1, q + 1)
        dist = new
    return dist.get(0, Fraction(0))


def matrix_power_diag(g, t):
    """Diagonal of ``(A - q Id)^t`` via networkx adjacency and Python integers."""
    import numpy as np

    A = nx.to_numpy_array(to_networkx(g), nodelist=range(g.vertex_count), dtype=int).astype(object)
    S = A - g.q * np.eye(g.vertex_count, dtype=int).astype(object)
    P = np.eye(g.vertex_count, dtype=int).astype(object)
    for _ in range(t):
        P = P.dot(S)
    return [P[i, i] for i in range(g.vertex_count)]
