"""Finite (q+1)-regular graphs and non-backtracking walk counts.

Counting follows the non-backtracking convention: a geodesic is a walk that
never immediately reverses its previous edge, and closed geodesics carry a
basepoint and an orientation. All counts are exact Python integers.
"""

from __future__ import annotations

import json
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "AsymmetryError",
    "GraphError",
    "GraphFormatError",
    "GeodesicRelationReport",
    "NonBacktrackingOperator",
    "RegularGraph",
    "RegularityError",
    "UnsupportedGraphError",
    "aggregate_closed_counts",
    "b_from_c",
    "circulant",
    "closed_tailless_counts",
    "complete",
    "count_geodesics_from",
    "cycle",
    "generate",
    "girth",
    "graph_to_json",
    "hashimoto_traces",
    "hypercube",
    "check_geodesic_relations",
    "load_graph",
    "nonbacktracking_operator",
    "petersen",
    "random_regular",
    "tailless_girth",
]


class GraphError(ValueError):
    """Base class for invalid graph input."""


class GraphFormatError(GraphError):
    pass


class RegularityError(GraphError):
    def __init__(self, vertex: int, found: int, expected: int):
        super().__init__(f"vertex {vertex} has degree {found}, expected {expected}")
        self.vertex = vertex
        self.found = found
        self.expected = expected


class AsymmetryError(GraphError):
    pass


class UnsupportedGraphError(GraphError):
    """Raised when an operation needs a simple graph (no loops, no multi-edges)."""


@dataclass(frozen=True)
class RegularGraph:
    """An undirected ``degree``-regular multigraph on vertices ``0..vertex_count-1``.

    ``edges`` is a sorted tuple of ``(u, v)`` pairs with ``u <= v``; a self-loop
    ``(x, x)`` contributes 2 to the degree of ``x``. Duplicate edges are only
    accepted with ``multigraph=True``.
    """

    vertex_count: int
    degree: int
    edges: tuple[tuple[int, int], ...]
    multigraph: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphError("a graph needs at least one vertex")
        if self.degree < 2:
            raise GraphError(f"degree must be q+1 >= 2, got {self.degree}")
        norm = []
        for e in self.edges:
            if len(e) != 2:
                raise GraphFormatError(f"edge {e!r} is not a pair")
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphFormatError(f"edge {e!r} references a missing vertex")
            norm.append((min(u, v), max(u, v)))
        norm.sort()
        if not self.multigraph:
            dup = [e for e, k in Counter(norm).items() if k > 1]
            if dup:
                raise GraphFormatError(f"duplicate edge {dup[0]} (set multigraph to allow)")
        object.__setattr__(self, "edges", tuple(norm))
        deg = [0] * self.vertex_count
        for u, v in norm:
            deg[u] += 1
            deg[v] += 1
        for x, d in enumerate(deg):
            if d != self.degree:
                raise RegularityError(x, d, self.degree)

    @property
    def q(self) -> int:
        return self.degree - 1

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor multiset of every vertex; a loop at ``x`` lists ``x`` twice."""
        rows: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            rows[u].append(v)
            rows[v].append(u)
        return tuple(tuple(sorted(r)) for r in rows)

    def adjacency_row(self, x: int) -> tuple[int, ...]:
        return self.neighbors[x]

    @property
    def is_simple(self) -> bool:
        return all(u != v for u, v in self.edges) and len(set(self.edges)) == len(self.edges)

    @cached_property
    def is_connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in self.neighbors[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == self.vertex_count

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for x, row in enumerate(self.neighbors):
            for y in row:
                A[x, y] += 1
        return A

    def require_simple(self) -> None:
        if not self.is_simple:
            raise UnsupportedGraphError(
                "geodesic counting is only defined here for simple graphs (no loops or multi-edges)"
            )


# -- serialization ---------------------------------------------------------

def graph_to_json(graph: RegularGraph) -> dict:
    doc = {
        "degree": graph.degree,
        "vertices": graph.vertex_count,
        "edges": [list(e) for e in graph.edges],
    }
    if graph.multigraph:
        doc["multigraph"] = True
    if graph.name:
        doc["name"] = graph.name
    return doc


def load_graph(text: str) -> RegularGraph:
    """Parse the JSON graph format.

    ``{"degree": q+1, "vertices": M, "edges": [[u, v], ...]}`` with 0-based
    indices; ``"adjacency": [[...], ...]`` (neighbor lists) may replace
    ``"edges"``. Duplicate edges require ``"multigraph": true``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be a JSON object")
    try:
        degree = int(doc["degree"])
        vertices = int(doc["vertices"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError("graph needs integer 'degree' and 'vertices'") from exc
    multigraph = bool(doc.get("multigraph", False))
    if "edges" in doc:
        edges = doc["edges"]
        if not isinstance(edges, list):
            raise GraphFormatError("'edges' must be a list of pairs")
        try:
            pairs = tuple((int(u), int(v)) for u, v in edges)
        except (TypeError, ValueError) as exc:
            raise GraphFormatError("each edge must be a pair of integers") from exc
    elif "adjacency" in doc:
        pairs = _edges_from_adjacency(doc["adjacency"], vertices)
    else:
        raise GraphFormatError("graph needs 'edges' or 'adjacency'")
    return RegularGraph(vertices, degree, pairs, multigraph=multigraph, name=str(doc.get("name", "")))


def _edges_from_adjacency(rows, vertices: int) -> tuple[tuple[int, int], ...]:
    if not isinstance(rows, list) or len(rows) != vertices:
        raise GraphFormatError("'adjacency' must list one neighbor row per vertex")
    counts: Counter = Counter()
    for x, row in enumerate(rows):
        for y in row:
            counts[(x, int(y))] += 1
    pairs = []
    for (x, y), k in counts.items():
        if x == y:
            if k % 2:
                raise AsymmetryError(f"loop at {x} listed an odd number of times")
            pairs.extend([(x, x)] * (k // 2))
        elif x < y:
            if counts.get((y, x), 0) != k:
                raise AsymmetryError(f"{y} lists {x} {counts.get((y, x), 0)} times but {x} lists {y} {k} times")
            pairs.extend([(x, y)] * k)
        elif (y, x) not in counts:
            raise AsymmetryError(f"{x} lists {y} but {y} does not list {x}")
    return tuple(pairs)


# -- generators ------------------------------------------------------------

def cycle(n: int) -> RegularGraph:
    if n < 3:
        raise ValueError("cycle(n) needs n >= 3")
    return RegularGraph(n, 2, tuple((i, (i + 1) % n) for i in range(n)), name=f"cycle({n})")


def complete(n: int) -> RegularGraph:
    if n < 3:
        raise ValueError("complete(n) needs n >= 3 so that q >= 1")
    edges = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    return RegularGraph(n, n - 1, edges, name=f"complete({n})")


def petersen() -> RegularGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return RegularGraph(10, 3, tuple(outer + spokes + inner), name="petersen")


def hypercube(d: int) -> RegularGraph:
    if d < 2:
        raise ValueError("hypercube(d) needs d >= 2 so that q >= 1")
    edges = tuple((x, x ^ (1 << b)) for x in range(1 << d) for b in range(d) if x < x ^ (1 << b))
    return RegularGraph(1 << d, d, edges, name=f"hypercube({d})")


def circulant(n: int, offsets) -> RegularGraph:
    offs = sorted({int(s) % n for s in offsets})
    offs = sorted({min(s, n - s) for s in offs})
    if not offs or offs[0] == 0:
        raise ValueError("circulant offsets must be non-zero modulo n")
    edges = set()
    for i in range(n):
        for s in offs:
            j = (i + s) % n
            edges.add((min(i, j), max(i, j)))
    degree = sum(1 if 2 * s == n else 2 for s in offs)
    label = ",".join(map(str, offs))
    return RegularGraph(n, degree, tuple(edges), name=f"circulant({n},{{{label}}})")


def random_regular(n: int, degree: int, seed: int, max_tries: int = 100_000) -> RegularGraph:
    """Random simple ``degree``-regular graph from the pairing model.

    Pairings are redrawn until the result has no loops or repeated edges.
    Deterministic for a given seed; not exactly uniform over graphs.
    """
    if degree < 2 or degree >= n:
        raise ValueError(f"need 2 <= degree < n, got degree={degree}, n={n}")
    if (n * degree) % 2:
        raise ValueError(f"n * degree must be even, got {n} * {degree}")
    rng = random.Random(seed)
    points = [x for x in range(n) for _ in range(degree)]
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = set()
        ok = True
        for i in range(0, len(points), 2):
            u, v = points[i], points[i + 1]
            e = (min(u, v), max(u, v))
            if u == v or e in pairs:
                ok = False
                break
            pairs.add(e)
        if ok:
            return RegularGraph(n, degree, tuple(pairs), name=f"random_regular({n},{degree},{seed})")
    raise RuntimeError(f"no simple pairing found in {max_tries} tries")


_GENERATORS = {
    "cycle": cycle,
    "complete": complete,
    "petersen": petersen,
    "hypercube": hypercube,
    "circulant": circulant,
    "random_regular": random_regular,
}


def generate(name: str, *args, **kwargs) -> RegularGraph:
    try:
        builder = _GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown graph family {name!r}; choose from {sorted(_GENERATORS)}") from None
    return builder(*args, **kwargs)


def girth(graph: RegularGraph) -> int | None:
    """Length of the shortest cycle (``None`` for a forest)."""
    graph.require_simple()
    best = None
    for s in range(graph.vertex_count):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in graph.neighbors[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    length = dist[x] + dist[y] + 1
                    if best is None or length < best:
                        best = length
    return best


# -- non-backtracking machinery --------------------------------------------

@dataclass(frozen=True)
class NonBacktrackingOperator:
    """Hashimoto operator on directed edges ("darts").

    ``successors[i]`` lists the darts ``(v, w)`` that may follow dart
    ``i = (u, v)``, i.e. those with ``w != u``.
    """

    darts: tuple[tuple[int, int], ...]
    successors: tuple[tuple[int, ...], ...]
    reverse: tuple[int, ...]

    def matrix(self) -> np.ndarray:
        B = np.zeros((len(self.darts), len(self.darts)), dtype=np.int64)
        for i, succ in enumerate(self.successors):
            B[i, list(succ)] = 1
        return B

    def out_darts(self, x: int) -> list[int]:
        return [i for i, (u, _) in enumerate(self.darts) if u == x]


@lru_cache(maxsize=64)
def nonbacktracking_operator(graph: RegularGraph) -> NonBacktrackingOperator:
    graph.require_simple()
    darts = sorted([(u, v) for u, v in graph.edges] + [(v, u) for u, v in graph.edges])
    index = {d: i for i, d in enumerate(darts)}
    successors = tuple(
        tuple(index[(v, w)] for w in graph.neighbors[v] if w != u) for u, v in darts
    )
    reverse = tuple(index[(v, u)] for u, v in darts)
    return NonBacktrackingOperator(tuple(darts), successors, reverse)


def _step(op: NonBacktrackingOperator, w: list[int]) -> list[int]:
    out = [0] * len(w)
    for i, wi in enumerate(w):
        if wi:
            for j in op.successors[i]:
                out[j] += wi
    return out


@lru_cache(maxsize=256)
def count_geodesics_from(graph: RegularGraph, x0: int, t_max: int) -> tuple[tuple[int, ...], ...]:
    """``c[m][x]``: number of geodesics of length ``m`` from ``x0`` to ``x``, ``m <= t_max``.

    Closed geodesics at ``x0`` are counted with and without tails.
    """
    op = nonbacktracking_operator(graph)
    M = graph.vertex_count
    rows = [tuple(1 if x == x0 else 0 for x in range(M))]
    w = [1 if u == x0 else 0 for u, _ in op.darts]
    for _ in range(t_max):
        row = [0] * M
        for i, wi in enumerate(w):
            row[op.darts[i][1]] += wi
        rows.append(tuple(row))
        w = _step(op, w)
    return tuple(rows[: t_max + 1])


def b_from_c(c, q: int) -> list[list[int]]:
    """``b_m = c_m - (q-1)(c_{m-2} + c_{m-4} + ... )`` down to ``c_0`` or ``c_1``."""
    out = []
    for m, row in enumerate(c):
        if m < 2:
            out.append(list(row))
            continue
        acc = list(row)
        for k in range(m - 2, -1, -2):
            for x, v in enumerate(c[k]):
                acc[x] -= (q - 1) * v
        out.append(acc)
    return out


@lru_cache(maxsize=64)
def closed_tailless_counts(graph: RegularGraph, m_max: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Per-vertex and total counts of closed geodesics without tails.

    ``N_closed[m][x]`` counts closed non-backtracking walks of length ``m``
    based at ``x`` whose last step is not the reverse of the first (so the
    cycle is also reduced). ``N_closed[0][x] = 1`` and ``N_total[0] = M``.
    Counted directly from the darts leaving each basepoint.
    """
    op = nonbacktracking_operator(graph)
    M = graph.vertex_count
    per = [[0] * M for _ in range(m_max + 1)]
    for x in range(M):
        per[0][x] = 1
    for first in range(len(op.darts)):
        x = op.darts[first][0]
        back = op.reverse[first]
        w = [0] * len(op.darts)
        w[first] = 1
        for m in range(1, m_max + 1):
            total = 0
            for i, wi in enumerate(w):
                if wi and op.darts[i][1] == x and i != back:
                    total += wi
            per[m][x] += total
            if m < m_max:
                w = _step(op, w)
    totals = tuple(sum(row) for row in per)
    return tuple(tuple(r) for r in per), totals


def hashimoto_traces(graph: RegularGraph, m_max: int) -> list[int]:
    """``tr(B^m)`` for ``m = 0..m_max`` (the ``m = 0`` entry is the dart count)."""
    op = nonbacktracking_operator(graph)
    n = len(op.darts)
    traces = [0] * (m_max + 1)
    traces[0] = n
    for start in range(n):
        w = [0] * n
        w[start] = 1
        for m in range(1, m_max + 1):
            w = _step(op, w)
            traces[m] += w[start]
    return traces


def aggregate_closed_counts(graph: RegularGraph, m_max: int) -> list[int]:
    """``sum_x c_m^{(x)}(x)``: closed geodesics (tails allowed) over all basepoints."""
    totals = [0] * (m_max + 1)
    for x in range(graph.vertex_count):
        c = count_geodesics_from(graph, x, m_max)
        for m in range(m_max + 1):
            totals[m] += c[m][x]
    return totals


def tailless_girth(graph: RegularGraph, x0: int, m_cap: int | None = None) -> int | None:
    """Smallest ``m >= 1`` with a closed tailless geodesic of length ``m`` at ``x0``."""
    cap = m_cap if m_cap is not None else 2 * graph.vertex_count + 2
    per, _ = closed_tailless_counts(graph, cap)
    for m in range(1, cap + 1):
        if per[m][x0] > 0:
            return m
    return None


# -- relations between closed geodesic counts ------------------------------

@dataclass
class GeodesicRelationReport:
    """Outcome of checking the closed-geodesic relations up to ``m_max``.

    ``failures`` holds ``(item, m, lhs, rhs)`` for the per-vertex identities at
    ``x0``; ``aggregate_failures`` the same for the versions summed over all
    basepoints.
    """

    x0: int
    m_max: int
    failures: list = field(default_factory=list)
    aggregate_failures: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures

    @property
    def aggregate_holds(self) -> bool:
        return not self.aggregate_failures

    @property
    def first_counterexample(self):
        return self.failures[0] if self.failures else None

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "m_max": self.m_max,
            "holds": self.holds,
            "aggregate_holds": self.aggregate_holds,
            "first_counterexample": self.first_counterexample,
            "failures": self.failures,
            "aggregate_failures": self.aggregate_failures,
        }


def _relation_items(c: list[int], N: list[int], q: int, unit: int, m_max: int):
    """Yield ``(item, m, lhs, rhs)`` for the three relations.

    Item 1 recovers ``N_m`` from ``c_m``, item 2 recovers ``c_m`` from the
    ``N_k``, and item 3 compares ``b_m`` with ``N_m`` plus the even-parity
    constant.
    ``c[m]`` are closed geodesic counts (tails allowed), ``N[m]`` tailless ones,
    and ``unit`` is the weight of the constant term (1 per vertex, M in total).
    """
    for m in range(3, m_max + 1):
        stop = 2 if m % 2 == 0 else 1
        rhs = c[m] + (1 - q) * sum(c[k] for k in range(m - 2, stop - 1, -2))
        yield 1, m, N[m], rhs
        ell = m // 2
        top = ell - 1 if m % 2 == 0 else ell
        rhs = N[m] + (q - 1) * sum(q ** (j - 1) * N[m - 2 * j] for j in range(1, top + 1))
        yield 2, m, c[m], rhs
    for m in range(2, m_max + 1):
        b = c[m] - (q - 1) * sum(c[k] for k in range(m - 2, -1, -2))
        rhs = N[m] + ((1 - q) * unit if m % 2 == 0 else 0)
        yield 3, m, b, rhs


def check_geodesic_relations(graph: RegularGraph, x0: int, m_max: int) -> GeodesicRelationReport:
    q = graph.q
    per, totals = closed_tailless_counts(graph, m_max)
    report = GeodesicRelationReport(x0, m_max)

    c = [row[x0] for row in count_geodesics_from(graph, x0, m_max)]
    N = [row[x0] for row in per]
    for item, m, lhs, rhs in _relation_items(c, N, q, 1, m_max):
        if lhs != rhs:
            report.failures.append((item, m, lhs, rhs))

    c_tot = aggregate_closed_counts(graph, m_max)
    for item, m, lhs, rhs in _relation_items(c_tot, list(totals), q, graph.vertex_count, m_max):
        if lhs != rhs:
            report.aggregate_failures.append((item, m, lhs, rhs))
    return report
