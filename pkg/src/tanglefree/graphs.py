"""Tangle-freeness of regular multigraphs drawn from the configuration model.

A graph is L-tangle-free when every ball of radius L holds at most one
independent cycle.  Self-loops and parallel edges count as cycles.
"""
from __future__ import annotations

import csv
import io
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.stats import binomtest


@dataclass(frozen=True)
class RegularGraph:
    n: int
    d: int
    edges: tuple  # sorted (u, v) pairs with u <= v, repeated for parallel edges

    def __post_init__(self):
        deg = np.zeros(self.n, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        if self.n and not (deg == self.d).all():
            raise ValueError("graph is not d-regular")

    @classmethod
    def from_edges(cls, n: int, edges, d: int | None = None) -> "RegularGraph":
        es = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        if d is None:
            d = 2 * len(es) // n if n else 0
        return cls(n, d, es)

    def neighbours(self):
        nb = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            if u != v:
                nb[v].append(u)
        return nb

    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)


@dataclass(frozen=True)
class BallReport:
    center: int
    radius: int
    vertices: int
    edges: int
    components: int

    @property
    def cycle_dimension(self) -> int:
        return self.edges - self.vertices + self.components


def ball_cycles(G: RegularGraph, v: int, L: int) -> BallReport:
    """BFS ball of radius L around v and the cycle-space dimension of the induced subgraph."""
    if not 0 <= v < G.n:
        raise ValueError(f"vertex {v} not in graph")
    nb = G.neighbours()
    depth = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if depth[u] == L:
            continue
        for w in nb[u]:
            if w not in depth:
                depth[w] = depth[u] + 1
                queue.append(w)
    m = sum(1 for a, b in G.edges if a in depth and b in depth)
    return BallReport(v, L, len(depth), m, 1)


def ball_cycle_dimensions(G: RegularGraph, L: int) -> np.ndarray:
    """Cycle-space dimension of every radius-L ball at once (sparse reachability)."""
    e = G.edge_array()
    n = G.n
    if n == 0:
        return np.zeros(0, dtype=int)
    A = sparse.coo_matrix((np.ones(2 * len(e)), (np.r_[e[:, 0], e[:, 1]], np.r_[e[:, 1], e[:, 0]])), shape=(n, n)).tocsr()
    A.data[:] = 1.0
    R = sparse.identity(n, format="csr")
    step = (A + sparse.identity(n, format="csr")).astype(bool).astype(np.int8)
    for _ in range(L):
        nxt = (R @ step).astype(bool).astype(np.int8)
        if nxt.nnz == R.nnz:
            break  # balls stopped growing
        R = nxt
    R = R.tocsc()
    V = np.asarray(R.sum(axis=1)).ravel()
    both = R[:, e[:, 0]].multiply(R[:, e[:, 1]])
    E = np.asarray(both.sum(axis=1)).ravel()
    return (E - V + 1).astype(int)


def is_tangle_free(G: RegularGraph, L: int) -> bool:
    return bool((ball_cycle_dimensions(G, L) <= 1).all())


def sample_configuration(n: int, d: int, seed) -> RegularGraph:
    """Uniform perfect matching of the n*d half-edges; self-loops and multi-edges kept."""
    if (n * d) % 2:
        raise ValueError("n*d must be even")
    rng = np.random.default_rng(seed)
    half = rng.permutation(np.repeat(np.arange(n), d))
    pairs = half.reshape(-1, 2)
    return RegularGraph.from_edges(n, map(tuple, pairs.tolist()), d)


def wilson_interval(k: int, trials: int, level: float = 0.95):
    if trials == 0:
        return (math.nan, math.nan)
    ci = binomtest(k, trials).proportion_ci(confidence_level=level, method="wilson")
    return (float(ci.low), float(ci.high))


def tangle_radius(n: int, d: int, a: float) -> int:
    return int(math.floor(a * math.log(n) / math.log(d - 1) + 1e-12))


def _trial(args) -> bool:
    n, d, L, s = args
    return is_tangle_free(sample_configuration(n, d, s), L)


def tangle_phase(n_list, d: int, a: float, trials: int, seed: int = 0, workers: int = 1) -> list:
    """Fraction of tangle-free samples at L = floor(a log_{d-1} n), with Wilson 95% intervals."""
    if d < 3 or a <= 0:
        raise ValueError("need d >= 3 and a > 0")
    if trials == 0:
        return []
    rows = []
    for j, n in enumerate(n_list):
        L = tangle_radius(n, d, a)
        seeds = np.random.SeedSequence([seed, j]).spawn(trials)
        jobs = [(n, d, L, s) for s in seeds]
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                k = sum(pool.map(_trial, jobs))
        else:
            k = sum(map(_trial, jobs))
        lo, hi = wilson_interval(k, trials)
        rows.append({"n": n, "L": L, "trials": trials, "tangle_free_count": k, "fraction": k / trials,
                     "ci_low": lo, "ci_high": hi})
    return rows


STATS_COLUMNS = ("n", "L", "trials", "tangle_free_count", "fraction", "ci_low", "ci_high")


def phase_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_COLUMNS)
    for r in rows:
        w.writerow([r["n"], r["L"], r["trials"], r["tangle_free_count"],
                    f"{r['fraction']:.6f}", f"{r['ci_low']:.6f}", f"{r['ci_high']:.6f}"])
    return buf.getvalue()
