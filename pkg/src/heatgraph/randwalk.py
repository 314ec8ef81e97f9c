"""Random-walk kernels, conversions to the heat kernel, Monte Carlo, and tree agreement.

The uniform walk moves along each of the ``q+1`` half-edges at a vertex
with probability ``1/(q+1)``. A self-loop owns two half-edges, so it is
taken with probability ``2/(q+1)``, which keeps ``A/(q+1)`` stochastic.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .conversion import heat_series_from_rw, rw_series_from_heat
from .graphs import RegularGraph, closed_tailless_counts, count_geodesics_from
from .spectral import heat_kernel_power
from .tables import KernelTable, fraction_str
from .tree import tree_return_prob

__all__ = [
    "GirthReport",
    "ReturnDistribution",
    "WalkConfig",
    "girth_agreement",
    "heat_from_rw",
    "rw_kernel_exact",
    "rw_kernel_markov",
    "rw_simulate",
]


def rw_kernel_exact(graph: RegularGraph, x0: int, t_max: int) -> KernelTable:
    """Random-walk kernel obtained from the exact heat kernel by binomial transform."""
    heat = heat_kernel_power(graph, x0, t_max)
    rows = tuple(tuple(rw_series_from_heat(row, graph.q)) for row in heat.values)
    return KernelTable(x0, t_max, rows)


def rw_kernel_markov(graph: RegularGraph, x0: int, t_max: int) -> KernelTable:
    """Random-walk kernel by iterating the transition matrix in exact rationals."""
    nbrs = graph.neighbors
    d = graph.degree
    v = [Fraction(0)] * graph.vertex_count
    v[x0] = Fraction(1)
    rows = [[x] for x in v]
    for _ in range(t_max):
        v = [sum((v[y] for y in nbrs[x]), Fraction(0)) / d for x in range(graph.vertex_count)]
        for x, val in enumerate(v):
            rows[x].append(val)
    return KernelTable(x0, t_max, tuple(tuple(r) for r in rows))


def heat_from_rw(graph: RegularGraph, x0: int, t_max: int, rw: KernelTable | None = None) -> KernelTable:
    """Heat kernel recovered from random-walk values (Markov route unless ``rw`` is given)."""
    rw = rw_kernel_markov(graph, x0, t_max) if rw is None else rw
    rows = tuple(tuple(heat_series_from_rw(row, graph.q)) for row in rw.values)
    return KernelTable(x0, rw.t_max, rows)


# -- Monte Carlo -----------------------------------------------------------

@dataclass(frozen=True)
class WalkConfig:
    """Simulation settings.

    Trials are split into fixed-size chunks, each with its own Philox stream
    spawned from ``seed``. Results therefore do not depend on ``workers``.
    """

    seed: int
    trials: int
    chunk: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.chunk < 1 or self.workers < 1:
            raise ValueError("chunk and workers must be >= 1")


@dataclass(frozen=True)
class ReturnDistribution:
    """Return probabilities ``probs[t]`` for ``t = 0..t_max``.

    Empirical distributions carry ``stderr[t] = sqrt(p(1-p)/trials)``; exact
    ones have ``trials = None`` and zero errors.
    """

    t_max: int
    probs: tuple
    stderr: tuple
    trials: int | None = None

    @classmethod
    def exact(cls, table: KernelTable) -> "ReturnDistribution":
        x0 = table.basepoint
        probs = tuple(table[x0, t] for t in range(table.t_max + 1))
        return cls(table.t_max, probs, (0.0,) * len(probs), None)

    def sigma_for(self, p, trials: int | None = None) -> float:
        n = trials if trials is not None else self.trials
        p = float(p)
        return math.sqrt(p * (1 - p) / n)

    def to_csv(self, exact: "ReturnDistribution | None" = None) -> str:
        lines = ["t,analytic,empirical,stderr"]
        for t in range(self.t_max + 1):
            analytic = fraction_str(exact.probs[t]) if exact is not None else ""
            lines.append(f"{t},{analytic},{float(self.probs[t])!r},{float(self.stderr[t])!r}")
        return "\n".join(lines) + "\n"


def _simulate_chunk(table: np.ndarray, x0: int, t_max: int, size: int, seed_seq) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    pos = np.full(size, x0, dtype=np.int64)
    hits = np.zeros(t_max + 1, dtype=np.int64)
    hits[0] = size
    width = table.shape[1]
    for t in range(1, t_max + 1):
        pos = table[pos, rng.integers(0, width, size=size)]
        hits[t] = np.count_nonzero(pos == x0)
    return hits


def rw_simulate(graph: RegularGraph, x0: int, t_max: int, config: WalkConfig) -> ReturnDistribution:
    """Monte Carlo estimate of the return probability at ``x0`` for ``t <= t_max``."""
    table = np.array(graph.neighbors, dtype=np.int64)
    sizes = [config.chunk] * (config.trials // config.chunk)
    if config.trials % config.chunk:
        sizes.append(config.trials % config.chunk)
    seeds = np.random.SeedSequence(config.seed).spawn(len(sizes))
    jobs = list(zip(sizes, seeds))
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            parts = list(pool.map(lambda job: _simulate_chunk(table, x0, t_max, *job), jobs))
    else:
        parts = [_simulate_chunk(table, x0, t_max, *job) for job in jobs]
    hits = np.sum(parts, axis=0)
    probs = hits / config.trials
    stderr = np.sqrt(probs * (1 - probs) / config.trials)
    return ReturnDistribution(t_max, tuple(float(p) for p in probs), tuple(float(s) for s in stderr), config.trials)


# -- agreement with the tree below the girth --------------------------------

@dataclass
class GirthReport:
    """Graph return probability against the tree one.

    ``girth`` is the shortest tailless closed geodesic at ``x0``;
    ``closed_girth`` the shortest closed geodesic allowing tails, which can
    be smaller at vertices that see a cycle without lying on it.
    """

    x0: int
    t_max: int
    girth: int | None
    closed_girth: int | None
    rows: list = field(default_factory=list)

    @property
    def first_difference(self) -> int | None:
        for t, graph_p, tree_p in self.rows:
            if graph_p != tree_p:
                return t
        return None

    def _equal_below(self, bound) -> bool:
        limit = self.t_max + 1 if bound is None else min(bound, self.t_max + 1)
        return all(g == tr for t, g, tr in self.rows if t < limit)

    @property
    def passed(self) -> bool:
        return self._equal_below(self.girth)

    @property
    def equal_below_closed_girth(self) -> bool:
        return self._equal_below(self.closed_girth)

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "t_max": self.t_max,
            "girth": self.girth,
            "closed_girth": self.closed_girth,
            "first_difference": self.first_difference,
            "passed": self.passed,
            "equal_below_closed_girth": self.equal_below_closed_girth,
            "rows": [
                {"t": t, "graph": fraction_str(g), "tree": fraction_str(tr)} for t, g, tr in self.rows
            ],
        }


def girth_agreement(graph: RegularGraph, x0: int, t_max: int) -> GirthReport:
    graph.require_simple()
    per, _ = closed_tailless_counts(graph, t_max)
    girth = next((m for m in range(1, t_max + 1) if per[m][x0] > 0), None)
    c = count_geodesics_from(graph, x0, t_max)
    closed = next((m for m in range(1, t_max + 1) if c[m][x0] > 0), None)
    rw = rw_kernel_markov(graph, x0, t_max)
    report = GirthReport(x0, t_max, girth, closed)
    for t in range(t_max + 1):
        report.rows.append((t, rw[x0, t], tree_return_prob(graph.q, t)))
    return report
