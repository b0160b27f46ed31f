"""Closed hyperbolic surfaces as Fuchsian groups.

A surface is built either from Fenchel-Nielsen coordinates (lengths and twists
on a trivalent pants graph) or from explicit generator matrices.  Assembly
glues pairs of pants along a spanning tree of the pants graph and closes the
remaining cycles with HNN letters; a Tietze pass then eliminates redundant
generators, which for a closed surface leaves 2g generators and one relator.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
import numpy as np

from . import words as W
from .hyperbolic import (
    DomainError,
    MobiusMap,
    axis,
    classify,
    compose,
    geodesic_normal,
    ideal_vector,
    minkowski,
    normalizer,
    translation_length,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
RELATION_TOL = 1e-8


class SurfaceError(ValueError):
    """Invalid input or a construction that fails validation."""


# --- right-angled hexagons and pants -----------------------------------------


def hexagon_solve(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Right-angled hexagon with alternate sides a, b, c.

    Returns the other three sides ``(a', b', c')`` where ``a'`` is opposite ``a``.
    """
    if min(a, b, c) <= 0:
        raise DomainError("hexagon sides must be positive")

    def opposite(x, y, z):
        # cosh x' = (cosh y cosh z + cosh x) / (sinh y sinh z)
        return math.acosh((math.cosh(y) * math.cosh(z) + math.cosh(x)) / (math.sinh(y) * math.sinh(z)))

    return opposite(a, b, c), opposite(b, c, a), opposite(c, a, b)


def pants_seam_length(l1: float, l2: float, l3: float) -> float:
    """Length of the common perpendicular between cuffs 1 and 2 of a pair of pants."""
    return hexagon_solve(l1 / 2, l2 / 2, l3 / 2)[2]


@dataclass(frozen=True)
class BoundaryPiece:
    """Hyperbolic surface with geodesic boundary given by a free group on two generators.

    ``boundary_words`` lists one word per boundary component, in the order of
    ``boundary_lengths``.
    """

    signature: tuple[int, int]
    boundary_lengths: tuple[float, ...]
    generators: tuple[MobiusMap, MobiusMap]
    boundary_words: tuple[tuple, ...]

    def boundary_element(self, i: int) -> MobiusMap:
        return _eval(self.boundary_words[i], self.generators)


def _eval(word, gens) -> MobiusMap:
    m = MobiusMap.identity()
    for x in word:
        g = gens[abs(x) - 1]
        m = compose(m, g if x > 0 else g.inverse())
    return m


def _two_generator(tr_a: float, tr_b: float, tr_ab: float, side: float = 1.0, crossing: bool = False):
    """A = diag(lam, 1/lam) and B with the prescribed traces of B and AB.

    The axes are disjoint unless ``crossing`` is set.
    """
    lam = (tr_a + math.sqrt(tr_a * tr_a - 4)) / 2
    p = (tr_ab - tr_b / lam) / (lam - 1 / lam)
    s = tr_b - p
    qr = p * s - 1
    if crossing:
        if qr <= 0:
            raise SurfaceError("traces do not describe crossing axes")
        q = r = math.sqrt(qr)
        return MobiusMap(lam, 0.0, 0.0, 1 / lam), MobiusMap(p, q, r, s)
    if qr >= 0:
        raise SurfaceError("traces do not describe disjoint axes")
    q = side * math.sqrt(-qr)
    r = -side * math.sqrt(-qr)
    return MobiusMap(lam, 0.0, 0.0, 1 / lam), MobiusMap(p, q, r, s)


def build_pants(l1: float, l2: float, l3: float) -> BoundaryPiece:
    """Pair of pants with cuff lengths (l1, l2, l3).

    Generators are the first two cuffs; the third is ``(ab)^-1`` so the
    boundary words multiply to the identity.
    """
    if min(l1, l2, l3) <= 0:
        raise DomainError("cuff lengths must be positive")
    t = [2 * math.cosh(v / 2) for v in (l1, l2, l3)]
    a, b = _two_generator(t[0], t[1], -t[2])
    return BoundaryPiece((0, 3), (l1, l2, l3), (a, b), ((1,), (2,), (-2, -1)))


def build_one_holed_torus(l_a: float, l_b: float, l_ab: float) -> BoundaryPiece:
    """One-holed torus from the lengths of a, b and ab (a, b crossing once)."""
    x, y, z = (2 * math.cosh(v / 2) for v in (l_a, l_b, l_ab))
    tr_comm = x * x + y * y + z * z - x * y * z - 2
    if tr_comm >= -2:
        raise SurfaceError("lengths do not describe a one-holed torus")
    a, b = _two_generator(x, y, z, crossing=True)
    boundary = 2 * math.acosh(-tr_comm / 2)
    return BoundaryPiece((1, 1), (boundary,), (a, b), ((1, 2, -1, -2),))


def pants_handedness(piece: BoundaryPiece) -> list[int]:
    """Side (+1/-1) on which the pants lies, seen from each oriented cuff axis."""
    out = []
    for i in range(3):
        n = geodesic_normal(axis(piece.boundary_element(i)))
        other = axis(piece.boundary_element((i + 1) % 3))
        s = minkowski(ideal_vector(other.p) + ideal_vector(other.q), n)
        out.append(1 if s > 0 else -1)
    return out


# --- Fenchel-Nielsen data -------------------------------------------------------


def default_pants_graph(g: int) -> tuple:
    """Connected trivalent pants graph with 2g - 2 vertices.

    Pants form a cycle through slots 1 and 2; slot 0 pairs pants 2j with 2j+1.
    For genus 2 this is the theta graph.
    """
    if g < 2:
        raise DomainError("genus must be >= 2")
    n = 2 * g - 2
    edges = []
    for j in range(0, n, 2):
        edges.append(((j, 0), (j + 1, 0)))
    for i in range(n):
        edges.append(((i, 1), ((i + 1) % n, 2)))
    return tuple(sorted(_norm_edge(e) for e in edges))


def _norm_edge(e):
    (p, s), (q, t) = e
    a, b = (int(p), int(s)), (int(q), int(t))
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class FNCoordinates:
    genus: int
    pants_graph: tuple
    lengths: tuple
    twists: tuple
    approximate_wp: bool = False

    def __post_init__(self):
        g = self.genus
        if int(g) != g or g < 2:
            raise SurfaceError("genus must be an integer >= 2")
        graph = tuple(_norm_edge(e) for e in self.pants_graph)
        object.__setattr__(self, "pants_graph", graph)
        object.__setattr__(self, "lengths", tuple(float(x) for x in self.lengths))
        object.__setattr__(self, "twists", tuple(float(x) for x in self.twists))
        m = 3 * g - 3
        if len(graph) != m or len(self.lengths) != m or len(self.twists) != m:
            raise SurfaceError(f"genus {g} needs {m} curves, lengths and twists")
        if any(not x > 0 for x in self.lengths):
            raise SurfaceError("all lengths must be positive")
        slots = [s for e in graph for s in e]
        want = {(p, s) for p in range(2 * g - 2) for s in range(3)}
        if len(slots) != len(set(slots)) or set(slots) != want:
            raise SurfaceError("pants graph must use every slot of 2g-2 pants exactly once")
        # connectivity
        seen, stack = {0}, [0]
        while stack:
            p = stack.pop()
            for (a, _), (b, _) in graph:
                for x, y in ((a, b), (b, a)):
                    if x == p and y not in seen:
                        seen.add(y)
                        stack.append(y)
        if len(seen) != 2 * g - 2:
            raise SurfaceError("pants graph is not connected")

    @classmethod
    def parse(cls, text: str) -> "FNCoordinates":
        """Parse the compact form ``"g=2;l=2,2,2;t=0,0,0"`` (default pants graph)."""
        fields = dict(part.split("=", 1) for part in text.replace(" ", "").split(";") if part)
        g = int(fields["g"])
        lengths = [float(x) for x in fields["l"].split(",")]
        twists = [float(x) for x in fields.get("t", ",".join("0" * len(lengths))).split(",")]
        return cls(g, default_pants_graph(g), tuple(lengths), tuple(twists))


def sample_fn(g: int, length_cap: float, seed: int) -> FNCoordinates:
    """Boxed-Lebesgue sample in Fenchel-Nielsen coordinates.

    This approximates the Weil-Petersson measure only locally (Wolpert's
    formula makes it Lebesgue in these coordinates); no mapping-class-group
    fundamental domain is used, so the result is flagged ``approximate_wp``.
    """
    if length_cap <= 0:
        raise DomainError("length_cap must be positive")
    rng = np.random.default_rng(seed)
    m = 3 * g - 3
    lengths = length_cap - rng.uniform(0.0, length_cap, size=m)
    twists = rng.uniform(0.0, 1.0, size=m) * lengths
    return FNCoordinates(g, default_pants_graph(g), tuple(lengths), tuple(twists), approximate_wp=True)


# --- the surface ------------------------------------------------------------


@dataclass
class ValidationReport:
    relation_residual: float
    hyperbolic_generators: bool
    jorgensen_min: float
    jorgensen_ok: bool
    notes: list = field(default_factory=list)

    def as_dict(self):
        return {
            "relation_residual": self.relation_residual,
            "hyperbolic_generators": self.hyperbolic_generators,
            "jorgensen_min": self.jorgensen_min,
            "jorgensen_ok": self.jorgensen_ok,
            "discreteness_certified": False,
            "notes": list(self.notes),
        }


class FuchsianSurface:
    """Closed surface H/Gamma of genus g given by generators and relators.

    ``cuff_words`` maps each Fenchel-Nielsen curve index to a word for it
    (only for surfaces built from FN coordinates).
    """

    def __init__(self, genus, generators, relations, provenance, cuff_words=None):
        self.genus = int(genus)
        self.generators = tuple(generators)
        self.relations = tuple(tuple(r) for r in relations)
        self.provenance = provenance
        self.cuff_words = dict(cuff_words or {})
        self.area = 2 * math.pi * (2 * self.genus - 2)
        self.report = validate(self)
        self._domain = None

    @property
    def relation(self):
        return self.relations[0] if self.relations else ()

    def element(self, word) -> MobiusMap:
        return _eval(word, self.generators)

    def matrices(self) -> np.ndarray:
        return np.array([g.to_array() for g in self.generators])

    @property
    def domain(self):
        """Dirichlet domain (computed on first use)."""
        if self._domain is None:
            from .domain import DirichletDomain

            self._domain = DirichletDomain.build(self)
        return self._domain

    def fingerprint(self) -> str:
        import hashlib

        payload = json.dumps(
            {"genus": self.genus, "gens": [[format(v, ".12e") for v in (g.a, g.b, g.c, g.d)] for g in self.generators]},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def summary(self) -> dict:
        return {
            "genus": self.genus,
            "generators": [[format(v, ".17g") for v in (g.a, g.b, g.c, g.d)] for g in self.generators],
            "relations": [W.format_word(r) for r in self.relations],
            "area": self.area,
            "validation": self.report.as_dict(),
            "provenance": self.provenance,
            "surface_hash": self.fingerprint(),
        }


def relator_residual(word, gens) -> float:
    """Backward error of a relator: distance of the product from +-I over the product of norms."""
    m = np.eye(2)
    log_scale = 0.0
    for x in word:
        g = gens[abs(x) - 1].to_array()
        if x < 0:
            g = np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])
        m = m @ g
        log_scale += math.log(float(np.abs(g).max()))
    err = min(np.abs(m - np.eye(2)).max(), np.abs(m + np.eye(2)).max())
    return float(err) * math.exp(-min(log_scale, 700.0))


def jorgensen(a: MobiusMap, b: MobiusMap) -> float:
    """|tr^2 A - 4| + |tr [A,B] - 2|; at least 1 for discrete non-elementary pairs."""
    comm = a @ b @ a.inverse() @ b.inverse()
    return abs(a.trace ** 2 - 4) + abs(comm.trace - 2)


def validate(surface: FuchsianSurface, tol: float = RELATION_TOL) -> ValidationReport:
    gens = surface.generators
    if not gens:
        raise SurfaceError("empty generator list")
    res = max((relator_residual(r, gens) for r in surface.relations), default=0.0)
    hyp = all(classify(g) == "hyperbolic" for g in gens)
    jmin = math.inf
    for i in range(len(gens)):
        for j in range(len(gens)):
            if i != j:
                jmin = min(jmin, jorgensen(gens[i], gens[j]))
    report = ValidationReport(res, hyp, jmin, jmin >= 1 - 1e-9)
    report.notes.append("discreteness is not certified; Jorgensen pairs and relator residuals only")
    big = max(float(np.abs(g.to_array()).max()) for g in gens)
    if big > 1e6:
        report.notes.append(f"poorly conditioned generators (max entry {big:.2e}); double precision numerics degrade")
        log.warning("generator entries up to %.2e", big)
    if res > tol:
        raise SurfaceError(f"relation residual {res:.3e} exceeds {tol:.1e}")
    if not hyp:
        bad = [i + 1 for i, g in enumerate(gens) if classify(g) != "hyperbolic"]
        raise SurfaceError(f"non-hyperbolic generators {bad}")
    if not report.jorgensen_ok:
        raise SurfaceError(f"Jorgensen inequality fails (min {jmin:.4g})")
    return report


# --- Fenchel-Nielsen assembly ---------------------------------------------------

ASSEMBLY_DPS = 50


def _mp_pants(l1, l2, l3):
    """Cuff matrices X0, X1, X2 (X0 X1 X2 = 1) at high precision, same normal form as build_pants."""
    t1, t2, t3 = (2 * mpmath.cosh(mpmath.mpf(v) / 2) for v in (l1, l2, l3))
    lam = (t1 + mpmath.sqrt(t1 * t1 - 4)) / 2
    p = (-t3 - t2 / lam) / (lam - 1 / lam)
    s = t2 - p
    q = mpmath.sqrt(1 - p * s)
    a = mpmath.matrix([[lam, 0], [0, 1 / lam]])
    b = mpmath.matrix([[p, q], [-q, s]])
    return [a, b, mpmath.inverse(a * b)]


def _mp_apply(m, z):
    if z == mpmath.inf:
        return mpmath.inf if m[1, 0] == 0 else m[0, 0] / m[1, 0]
    den = m[1, 0] * z + m[1, 1]
    return mpmath.inf if den == 0 else (m[0, 0] * z + m[0, 1]) / den


def _mp_fixed(m):
    """(repelling, attracting) fixed points of a hyperbolic matrix."""
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if c == 0:
        other = b / (d - a)
        return (other, mpmath.inf) if abs(a) > abs(d) else (mpmath.inf, other)
    disc = mpmath.sqrt((a + d) ** 2 - 4)
    z1, z2 = ((a - d) + disc) / (2 * c), ((a - d) - disc) / (2 * c)
    return (z1, z2) if abs(c * z1 + d) < abs(c * z2 + d) else (z2, z1)


def _mp_normalizer(p, q):
    if q == mpmath.inf:
        return mpmath.matrix([[1, -p], [0, 1]])
    if p == mpmath.inf:
        return mpmath.matrix([[0, -1], [1, -q]])
    sgn = 1 if p > q else -1
    r = mpmath.sqrt(abs(p - q))
    return mpmath.matrix([[sgn, -sgn * p], [1, -q]]) / r


def _mp_frame(cuffs, s):
    """Normal frame of cuff s: axis to (0, inf), seam to cuff s+1 ending at i."""
    n = _mp_normalizer(*_mp_fixed(cuffs[s]))
    u, v = (_mp_apply(n, z) for z in _mp_fixed(cuffs[(s + 1) % 3]))
    k = mpmath.sqrt(u * v)
    return mpmath.matrix([[1 / mpmath.sqrt(k), 0], [0, mpmath.sqrt(k)]]) * n


def _mp_twist(t):
    e = mpmath.exp(mpmath.mpf(t) / 2)
    return mpmath.matrix([[e, 0], [0, 1 / e]])


def _to_map(m) -> MobiusMap:
    return MobiusMap(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))


def build_surface(fn: FNCoordinates) -> FuchsianSurface:
    with mpmath.workdps(ASSEMBLY_DPS):
        return _assemble(fn)


def _assemble(fn: FNCoordinates) -> FuchsianSurface:
    g = fn.genus
    npants = 2 * g - 2
    curve_at = {}
    for i, (u, v) in enumerate(fn.pants_graph):
        curve_at[u] = i
        curve_at[v] = i
    pieces = [_mp_pants(*(fn.lengths[curve_at[(p, s)]] for s in range(3))) for p in range(npants)]
    frames = {(p, s): _mp_frame(pieces[p], s) for p in range(npants) for s in range(3)}
    half_turn = mpmath.matrix([[0, -1], [1, 0]])

    def glue(p, s, q, t, tau):
        # conjugator taking pants q's local frame across cuff (p, s)
        return mpmath.inverse(frames[(p, s)]) * _mp_twist(tau) * half_turn * frames[(q, t)]

    edges = sorted(range(len(fn.pants_graph)), key=lambda i: fn.pants_graph[i])
    placed = {0: mpmath.eye(2)}
    tree = []
    while len(placed) < npants:
        for i in edges:
            (p, s), (q, t) = fn.pants_graph[i]
            if (p in placed) != (q in placed):
                if q in placed:
                    (p, s), (q, t) = (q, t), (p, s)
                placed[q] = placed[p] * glue(p, s, q, t, fn.twists[i])
                tree.append(i)
                break
        else:  # pragma: no cover - graph is validated connected
            raise SurfaceError("pants graph is not connected")
    extra = [i for i in edges if i not in tree]

    # free generators: two cuffs per pants, then one HNN letter per extra edge
    gens = []
    for p in range(npants):
        m = placed[p]
        for s in (0, 1):
            gens.append(m * pieces[p][s] * mpmath.inverse(m))

    def cuff_word(p, s):
        return ((2 * p + 1,), (2 * p + 2,), (-(2 * p + 2), -(2 * p + 1)))[s]

    relators = []
    for i in tree:
        (p, s), (q, t) = fn.pants_graph[i]
        relators.append(cuff_word(q, t) + cuff_word(p, s))
    for i in extra:
        (p, s), (q, t) = fn.pants_graph[i]
        gens.append(placed[p] * glue(p, s, q, t, fn.twists[i]) * mpmath.inverse(placed[q]))
        k = len(gens)
        relators.append((k,) + cuff_word(q, t) + (-k,) + cuff_word(p, s))

    new_gens, new_rels, subst = tietze(len(gens), relators)
    kept = [gens[j - 1] for j in new_gens]
    h = recenter([_to_map(m) for m in kept])
    hm = mpmath.matrix([[h.a, h.b], [h.c, h.d]])
    gens = [_to_map(hm * m * mpmath.inverse(hm)) for m in kept]
    cuffs = {}
    for i, ((p, s), _) in enumerate(fn.pants_graph):
        cuffs[i] = cuff_word(p, s)
    cuffs = {i: W.free_reduce(_substitute(w, subst)) for i, w in cuffs.items()}
    prov = {
        "mode": "fn",
        "pants_graph": [[list(u), list(v)] for u, v in fn.pants_graph],
        "lengths": [format(x, ".17g") for x in fn.lengths],
        "twists": [format(x, ".17g") for x in fn.twists],
        "approximate_wp": fn.approximate_wp,
    }
    return FuchsianSurface(g, gens, new_rels, prov, cuffs)


def recenter(gens) -> MobiusMap:
    """Map h sending the point of least total generator displacement to i.

    Conjugating by h keeps matrix entries small for the later numerics.  The
    displacement function is convex, so a local search suffices.
    """
    from scipy.optimize import minimize

    mats = np.array([g.to_array() for g in gens])

    def cost(v):
        # 2 cosh d(i, M i) is the squared Frobenius norm of M
        x, ly = v
        e = math.exp(ly / 2)
        h = np.array([[1 / e, -x / e], [0.0, e]])
        hi = np.array([[e, x / e], [0.0, 1 / e]])
        conj = h @ mats @ hi
        return float(np.log((conj ** 2).sum(axis=(1, 2)) / 2).sum())

    res = minimize(cost, np.zeros(2), method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
    x, y = res.x[0], math.exp(res.x[1])
    # h maps x + iy to i
    return MobiusMap(1 / math.sqrt(y), -x / math.sqrt(y), 0.0, math.sqrt(y))


def _substitute(word, subst):
    out = []
    for x in word:
        w = subst[abs(x)]
        out.extend(w if x > 0 else W.inverse(w))
    return tuple(out)


def tietze(ngens: int, relators):
    """Eliminate generators occurring exactly once in some relator.

    Returns ``(kept, relators, subst)``: the surviving original generator
    indices, the relators renumbered over them, and a map from every original
    generator to a word in the renumbered generators.
    """
    subst = {j: (j,) for j in range(1, ngens + 1)}
    rels = [W.free_reduce(r) for r in relators]
    eliminated = set()
    changed = True
    while changed:
        changed = False
        for ri, r in enumerate(rels):
            counts = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = sorted((j for j, c in counts.items() if c == 1), reverse=True)
            if not once:
                continue
            x = once[0]
            i = next(k for k, y in enumerate(r) if abs(y) == x)
            u, v = r[:i], r[i + 1:]
            sol = W.free_reduce(W.inverse(u) + W.inverse(v)) if r[i] > 0 else W.free_reduce(v + u)
            single = {x: sol}

            def sub(w):
                out = []
                for y in w:
                    if abs(y) in single:
                        out.extend(single[abs(y)] if y > 0 else W.inverse(single[abs(y)]))
                    else:
                        out.append(y)
                return W.free_reduce(out)

            rels = [W.cyclic_reduce(sub(w)) for k, w in enumerate(rels) if k != ri]
            rels = [w for w in rels if w]
            subst = {j: sub(w) for j, w in subst.items()}
            eliminated.add(x)
            changed = True
            break
    kept = [j for j in range(1, ngens + 1) if j not in eliminated]
    renum = {j: k + 1 for k, j in enumerate(kept)}

    def ren(w):
        return tuple(renum[abs(y)] * (1 if y > 0 else -1) for y in w)

    return kept, [ren(r) for r in rels], {j: ren(w) for j, w in subst.items()}


# --- files ------------------------------------------------------------------


def _real(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (str, int, float)):
        raise SurfaceError(f"expected a real number, got {v!r}")
    try:
        return float(v)
    except ValueError as exc:
        raise SurfaceError(f"bad real {v!r}") from exc


def surface_from_dict(d: dict) -> FuchsianSurface:
    if not isinstance(d, dict):
        raise SurfaceError("surface file must contain an object")
    mode = d.get("mode")
    try:
        genus = int(d["genus"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SurfaceError("missing or bad 'genus'") from exc
    if mode == "fn":
        try:
            graph = tuple(_norm_edge(e) for e in d["pants_graph"])
            fn = FNCoordinates(genus, graph, [_real(x) for x in d["lengths"]], [_real(x) for x in d["twists"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SurfaceError):
                raise
            raise SurfaceError(f"bad fn surface: {exc}") from exc
        return build_surface(fn)
    if mode == "matrices":
        raw = d.get("generators")
        if not raw:
            raise SurfaceError("empty generator list")
        gens = []
        for k, entries in enumerate(raw):
            if len(entries) != 4:
                raise SurfaceError(f"generator {k + 1} needs 4 entries")
            a, b, c, dd = (_real(x) for x in entries)
            det = a * dd - b * c
            if abs(det - 1) > 1e-6:
                raise SurfaceError(f"generator {k + 1} has determinant {det!r}")
            gens.append(MobiusMap(a, b, c, dd))
        rel = d.get("relation")
        if isinstance(rel, str):
            rel = W.parse_word(rel)
        if not rel:
            raise SurfaceError("missing relation")
        rel = tuple(int(x) for x in rel)
        if any(x == 0 or abs(x) > len(gens) for x in rel):
            raise SurfaceError("relation refers to unknown generators")
        return FuchsianSurface(genus, gens, [rel], {"mode": "matrices"})
    raise SurfaceError(f"unknown mode {mode!r}")


def load_surface(path) -> FuchsianSurface:
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SurfaceError(f"{path}: not valid JSON ({exc})") from exc
    return surface_from_dict(d)


def fn_to_dict(fn: FNCoordinates) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "mode": "fn",
        "genus": fn.genus,
        "pants_graph": [[list(u), list(v)] for u, v in fn.pants_graph],
        "lengths": [format(x, ".17g") for x in fn.lengths],
        "twists": [format(x, ".17g") for x in fn.twists],
    }


def matrices_to_dict(genus, gens, relation) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "mode": "matrices",
        "genus": genus,
        "generators": [[format(v, ".17g") for v in (g.a, g.b, g.c, g.d)] for g in gens],
        "relation": list(relation),
    }


def bolza_generators() -> tuple[list[MobiusMap], tuple]:
    """Side pairings of the regular octagon with angles pi/4, moved to the half-plane.

    In the disc model the pairings are [[1+sqrt2, s e^{ik pi/4}], [s e^{-ik pi/4}, 1+sqrt2]]
    with s = sqrt(2+2 sqrt2), k = 0..3.
    """
    a = 1 + math.sqrt(2)
    s = math.sqrt(2 + 2 * math.sqrt(2))
    # Cayley map disc -> half-plane: z = i(1+w)/(1-w)
    cay = np.array([[1j, 1j], [-1, 1]])
    cay_inv = np.linalg.inv(cay)
    gens = []
    for k in range(4):
        e = complex(math.cos(k * math.pi / 4), math.sin(k * math.pi / 4))
        u = np.array([[a, s * e], [s * e.conjugate(), a]])
        m = cay @ u @ cay_inv
        if np.abs(m.imag).max() > 1e-9:
            m = m * 1j
        gens.append(MobiusMap.from_array(m.real))
    return gens, (1, -2, 3, -4, -1, 2, -3, 4)
