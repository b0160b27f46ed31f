"""Adaptive cubature over simplices with Grundmann-Moeller rules.

A simplex is an (n+1, n) array of vertices.  The error estimate on a cell is
the gap between the rules of degree 2s+1 and 2s-1; cells are split at the
midpoint of their longest edge until the summed estimate meets the tolerance.
"""
from __future__ import annotations

import heapq
import itertools
import math
from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    pass


def _compositions(total: int, parts: int):
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cut:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield out


@lru_cache(maxsize=None)
def gm_rule(n: int, s: int):
    """Barycentric nodes and weights of the degree 2s+1 rule on an n-simplex of unit volume."""
    d = 2 * s + 1
    nodes, weights = [], []
    for i in range(s + 1):
        w = (-1) ** i * 2.0 ** (-2 * s) * (d + n - 2 * i) ** d / (math.factorial(i) * math.factorial(d + n - i))
        for beta in _compositions(s - i, n + 1):
            nodes.append([(2 * b + 1) / (d + n - 2 * i) for b in beta])
            weights.append(w * math.factorial(n))
    return np.array(nodes), np.array(weights)


def simplex_volume(S: np.ndarray) -> float:
    n = S.shape[1]
    return abs(float(np.linalg.det(S[1:] - S[0]))) / math.factorial(n)


def gm_estimate(f, S: np.ndarray, s: int = 3):
    """(degree 2s+1 value, |difference to degree 2s-1|) on simplex S; f maps (m, n) points to (m,)."""
    vol = simplex_volume(S)
    vals = []
    for k in (s, s - 1):
        bary, w = gm_rule(S.shape[1], k)
        vals.append(vol * float(w @ f(bary @ S)))
    return vals[0], abs(vals[0] - vals[1])


def _split(S: np.ndarray):
    m = len(S)
    i, j = max(itertools.combinations(range(m), 2), key=lambda p: float(((S[p[0]] - S[p[1]]) ** 2).sum()))
    mid = (S[i] + S[j]) / 2
    a, b = S.copy(), S.copy()
    a[j] = mid
    b[i] = mid
    return a, b


def integrate_simplex(f, S, rtol: float = 1e-10, atol: float = 0.0, s: int = 3, max_cells: int = 200_000):
    """Adaptive integral of f over simplex S.  Returns (value, error estimate)."""
    S = np.asarray(S, dtype=float)
    v, e = gm_estimate(f, S, s)
    heap = [(-e, 0, S, v, e)]
    total, err, counter = v, e, 1
    while err > max(atol, rtol * abs(total)):
        if counter >= max_cells:
            raise QuadratureError(f"no convergence after {counter} cells (estimate {err:.3g})")
        _, _, cell, v, e = heapq.heappop(heap)
        total -= v
        err -= e
        for child in _split(cell):
            cv, ce = gm_estimate(f, child, s)
            total += cv
            err += ce
            counter += 1
            heapq.heappush(heap, (-ce, counter, child, cv, ce))
    return total, err


def corner_simplex(n: int, T: float) -> np.ndarray:
    """{x_i >= 0, sum x_i <= T}."""
    return np.vstack([np.zeros(n), T * np.eye(n)])


def dirichlet_monomial(exps, T):
    """Exact integral of prod x_i^a_i over the corner simplex of size T (T may be a Fraction)."""
    k = len(exps)
    top = sum(exps) + k
    num = math.prod(math.factorial(a) for a in exps)
    from fractions import Fraction

    return Fraction(num, math.factorial(top)) * T ** top
