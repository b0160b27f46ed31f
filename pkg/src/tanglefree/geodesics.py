"""Closed geodesics: enumeration up to a length cutoff, simplicity and intersections.

A closed geodesic is cut by the Dirichlet domain into chords.  Tracing a
chord across faces (exit face f, continue with the axis pulled back by the
pairing of f) runs once around the geodesic, which gives its primitive
length, a canonical set of chords for deduplication, and self-intersection
and intersection counts as chord crossings.

Completeness: a class of length l has a lift whose axis meets the domain, and
for such a lift T, cosh d(o, T o) <= cosh^2 R cosh l - sinh^2 R.  Enumerating
that orbit ball therefore meets every class.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import words as W
from .domain import BudgetExceeded, DirichletDomain, DomainFailure, orbit_points, tube_search, word_of
from .hyperbolic import (
    AxisGeodesic,
    DomainError,
    MobiusMap,
    axis,
    classify,
    fixed_points,
    ideal_vector,
    length_from_trace,
    lorentz_batch,
    minkowski,
    to_hyperboloid,
)

log = logging.getLogger(__name__)

SCHEME_VERSION = "dirichlet-chords/1"
LENGTH_TOL = 1e-7
POINT_TOL = 1e-7
CELL = 1e-5


class Inconclusive(RuntimeError):
    """A search could not reach a definite answer within its budget."""


# --- chords -------------------------------------------------------------------


@dataclass(frozen=True)
class Chord:
    u: tuple  # entry point in the Klein disc
    v: tuple  # exit point
    f_in: int
    f_out: int
    length: float


def _klein(t: float) -> np.ndarray:
    v = ideal_vector(t)
    return v[1:] / v[0]


def klein_endpoints(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Klein-disc endpoints (repelling, attracting) of a hyperbolic matrix's axis."""
    p, q = fixed_points(MobiusMap.from_array(mat))
    return _klein(p), _klein(q)


def clip_line(domain: DirichletDomain, P: np.ndarray, Q: np.ndarray):
    """Part of the chord P -> Q inside the domain: (t_in, t_out, f_in, f_out) or None."""
    a = np.array([f.a for f in domain.faces])
    d = Q - P
    num = 1.0 - a @ P
    den = a @ d
    t_lo, t_hi = 0.0, 1.0
    f_in = f_out = -1
    for j in range(len(a)):
        if abs(den[j]) < 1e-300:
            if num[j] < 0:
                return None
            continue
        t = num[j] / den[j]
        if den[j] > 0:
            if t < t_hi:
                t_hi, f_out = t, j
        elif t > t_lo:
            t_lo, f_in = t, j
    if t_hi - t_lo <= 1e-14 or f_in < 0 or f_out < 0:
        return None
    return t_lo, t_hi, f_in, f_out


def klein_distance(u, v) -> float:
    u, v = np.asarray(u), np.asarray(v)
    c = (1 - u @ v) / math.sqrt((1 - u @ u) * (1 - v @ v))
    return math.acosh(max(1.0, c))


def chord_of(domain: DirichletDomain, mat: np.ndarray):
    P, Q = klein_endpoints(mat)
    hit = clip_line(domain, P, Q)
    if hit is None:
        return None
    t0, t1, fi, fo = hit
    u, v = P + t0 * (Q - P), P + t1 * (Q - P)
    return Chord(tuple(u), tuple(v), fi, fo, klein_distance(u, v))


def trace_chords(domain: DirichletDomain, mat: np.ndarray, max_steps: int = 100_000):
    """Chords of the closed geodesic of ``mat`` (whose axis must meet the domain), one period."""
    first = chord_of(domain, mat)
    if first is None:
        raise DomainFailure("axis does not meet the domain")
    chords = [first]
    m = mat
    for _ in range(max_steps):
        c = chords[-1]
        s, si = domain.face_mats[c.f_out], domain.face_inv[c.f_out]
        m = si @ m @ s
        nxt = chord_of(domain, m)
        if nxt is None:
            raise DomainFailure("lost the geodesic while tracing")
        if _same_chord(nxt, first, oriented=True):
            return chords
        chords.append(nxt)
    raise DomainFailure("tracing did not close up")


def _same_chord(c1: Chord, c2: Chord, oriented: bool = False, tol: float = POINT_TOL) -> bool:
    u1, v1, u2, v2 = (np.array(x) for x in (c1.u, c1.v, c2.u, c2.v))
    if np.abs(u1 - u2).max() < tol and np.abs(v1 - v2).max() < tol:
        return True
    if oriented:
        return False
    return bool(np.abs(u1 - v2).max() < tol and np.abs(v1 - u2).max() < tol)


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def chords_cross(c1: Chord, c2: Chord, eps: float = 1e-12) -> bool:
    """Proper crossing of two chords in the open domain."""
    if _same_chord(c1, c2):
        return False
    a, b, c, d = c1.u, c1.v, c2.u, c2.v
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    return bool(o1 * o2 < -eps and o3 * o4 < -eps)


def count_crossings(chords1, chords2=None) -> int:
    """Crossing pairs within one chord set, or between two."""
    if chords2 is None:
        n = 0
        for i in range(len(chords1)):
            for j in range(i + 1, len(chords1)):
                n += chords_cross(chords1[i], chords1[j])
        return n
    return int(sum(chords_cross(a, b) for a in chords1 for b in chords2))


class ChordIndex:
    """Spatial hash of chords by midpoint, mapping chords back to class ids."""

    def __init__(self):
        self.cells = {}

    @staticmethod
    def _cell(c: Chord):
        m = (np.array(c.u) + np.array(c.v)) / 2
        return int(math.floor(m[0] / CELL)), int(math.floor(m[1] / CELL))

    def add(self, c: Chord, cls_id: int):
        self.cells.setdefault(self._cell(c), []).append((c, cls_id))

    def find(self, c: Chord):
        i, j = self._cell(c)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                for other, cid in self.cells.get((i + di, j + dj), ()):
                    if _same_chord(c, other):
                        return cid
        return None


# --- inventory ------------------------------------------------------------------


@dataclass
class ClosedGeodesic:
    """One free-homotopy class of closed geodesics.

    ``word`` is a canonical word in the surface generators; ``power`` is k
    when the class is the k-th power of a primitive one.  ``chords`` are the
    primitive geodesic's pieces in the Dirichlet domain.
    """

    word: tuple
    trace: float
    length: float
    primitive: bool
    power: int
    self_intersections: int | None
    element: MobiusMap
    class_id: int = -1
    chords: tuple = field(default=(), repr=False, compare=False)

    @property
    def simple(self) -> bool | None:
        if not self.primitive:
            return False
        if self.self_intersections is None:
            return None
        return self.self_intersections == 0

    @property
    def axis(self) -> AxisGeodesic:
        return axis(self.element)

    @property
    def primitive_length(self) -> float:
        return self.length / self.power

    def word_text(self) -> str:
        return W.format_word(self.word)


@dataclass
class GeodesicInventory:
    surface_hash: str
    L: float
    geodesics: list
    stamp: dict

    @property
    def complete(self) -> bool:
        return not self.stamp.get("possibly_incomplete", False)

    def primitive(self):
        return [g for g in self.geodesics if g.primitive]

    def by_class(self, class_id: int, power: int = 1):
        for g in self.geodesics:
            if g.class_id == class_id and g.power == power:
                return g
        return None

    def upto(self, L: float) -> "GeodesicInventory":
        """The sub-inventory of classes of length at most L."""
        if L > self.L + 1e-12:
            raise ValueError("cannot extend an inventory")
        stamp = dict(self.stamp, L=L)
        return GeodesicInventory(self.surface_hash, L, [g for g in self.geodesics if g.length <= L + LENGTH_TOL], stamp)

    def to_csv(self) -> str:
        lines = ["# schema_version=1", "word,trace,length,primitive,simple"]
        for g in self.geodesics:
            simple = "" if g.simple is None else str(g.simple).lower()
            lines.append(f"{g.word_text()},{g.trace:.17g},{g.length:.17g},{str(g.primitive).lower()},{simple}")
        return "\n".join(lines) + "\n"


def orbit_radius_for(R: float, L: float) -> float:
    """Radius of the orbit ball meeting every class of length <= L (domain circumradius R)."""
    return math.acosh(math.cosh(R) ** 2 * math.cosh(L) - math.sinh(R) ** 2)


def _signed_trace(surface, word) -> float:
    m = W.evaluate(word, [g.to_array() for g in surface.generators])
    return float(m[0, 0] + m[1, 1])


class _Classes:
    """Primitive classes found so far, with their chords and best words."""

    def __init__(self, domain):
        self.domain = domain
        self.index = ChordIndex()
        self.chords = []
        self.lengths = []
        self.reps = []  # domain-frame matrix of a primitive representative

    def lookup(self, mat: np.ndarray):
        """Class id and power of a hyperbolic element whose axis meets the domain (None if unknown)."""
        c = chord_of(self.domain, mat)
        if c is None:
            return None
        cid = self.index.find(c)
        if cid is None:
            return None
        return cid, c

    def add(self, mat: np.ndarray) -> int:
        chords = trace_chords(self.domain, mat)
        cid = len(self.chords)
        for c in chords:
            self.index.add(c, cid)
        self.chords.append(tuple(chords))
        self.lengths.append(sum(c.length for c in chords))
        self.reps.append(mat)
        return cid

    def classify(self, mat: np.ndarray):
        """(class id, power) for any hyperbolic element, moving its axis into the domain first."""
        m = _into_domain(self.domain, mat)
        hit = self.lookup(m)
        if hit is None:
            return None
        cid, _ = hit
        ell = length_from_trace(m[0, 0] + m[1, 1])
        return cid, max(1, int(round(ell / self.lengths[cid])))


def _into_domain(domain: DirichletDomain, mat: np.ndarray) -> np.ndarray:
    """Conjugate so that the axis meets the domain."""
    p, q = fixed_points(MobiusMap.from_array(mat))
    n = np.cross(ideal_vector(p), ideal_vector(q)) * np.array([-1.0, 1.0, 1.0])
    n = n / math.sqrt(float(minkowski(n, n)))
    o = np.array([1.0, 0.0, 0.0])
    foot = o - float(minkowski(o, n)) * n
    foot = foot / math.sqrt(-float(minkowski(foot, foot)))
    _, h = domain.reduce_point(foot)
    return h @ mat @ np.linalg.inv(h)


# --- word searches ----------------------------------------------------------------


def _word_layers(ngen: int, max_len: int, canonical_prefix: bool):
    """Reduced words by length as (letters array, matrices) layers, without evaluation.

    With ``canonical_prefix`` only words that can be canonical class
    representatives are produced: the first letter is a positive generator and
    no later letter uses a smaller generator index.
    """
    letters = np.array([i + 1 for i in range(ngen)] + [-(i + 1) for i in range(ngen)], dtype=np.int16)
    first = letters[letters > 0] if canonical_prefix else letters
    cur = first[:, None]
    yield cur
    for _ in range(max_len - 1):
        last = cur[:, -1]
        parts = []
        for x in letters:
            ok = last != -x
            if canonical_prefix:
                ok &= abs(int(x)) >= cur[:, 0]
            if ok.any():
                sel = cur[ok]
                parts.append(np.concatenate([sel, np.full((len(sel), 1), x, dtype=np.int16)], axis=1))
        if not parts:
            return
        cur = np.concatenate(parts)
        # keep a fixed order: lexicographic in the letter sequence
        cur = cur[np.lexsort(cur.T[::-1])]
        yield cur


def _evaluate_layer(words_arr: np.ndarray, lmats: np.ndarray, ngen: int) -> np.ndarray:
    idx = np.where(words_arr > 0, words_arr - 1, ngen - words_arr - 1)
    m = lmats[idx[:, 0]].copy()
    for j in range(1, words_arr.shape[1]):
        m = m @ lmats[idx[:, j]]
    return m


def search_words(domain, classes, L: float, max_word: int, canonical_prefix: bool = True, batch: int = 200_000):
    """Best word per (class id, power) among reduced words of length <= max_word with length <= L.

    Returns ``(best, unmatched)`` where ``unmatched`` counts words of length
    <= L whose class is unknown (a sign the class list is incomplete).
    """
    gens = domain.gens
    ngen = len(gens)
    lmats = np.array([g.to_array() for g in gens] + [g.inverse().to_array() for g in gens])
    tr_cut = 2 * math.cosh(L / 2) * (1 + 1e-12)
    best = {}
    unmatched = 0
    for layer in _word_layers(ngen, max_word, canonical_prefix):
        for s in range(0, len(layer), batch):
            chunk = layer[s:s + batch]
            if chunk.shape[1] > 1:
                chunk = chunk[chunk[:, 0] != -chunk[:, -1]]
            if not len(chunk):
                continue
            mats = _evaluate_layer(chunk, lmats, ngen)
            tr = np.abs(mats[:, 0, 0] + mats[:, 1, 1])
            ok = np.nonzero((tr > 2 + 1e-9) & (tr <= tr_cut))[0]
            for i in ok.tolist():
                w = tuple(int(x) for x in chunk[i])
                cw = W.canonical_class(w)
                if canonical_prefix and cw != w:
                    continue
                got = classes.classify(mats[i])
                if got is None:
                    unmatched += 1
                    continue
                key = (len(cw), W._key(cw))
                if got not in best or key < best[got][0]:
                    best[got] = (key, cw)
    return {k: v[1] for k, v in best.items()}, unmatched


# --- enumeration ----------------------------------------------------------------


def _candidates(orb, R: float, L: float, r: float):
    idx = orb.within(r)
    idx = idx[idx > 0]
    mats = orb.mats[idx]
    tr = np.abs(mats[:, 0, 0] + mats[:, 1, 1])
    hyp = tr > 2 + 1e-10
    ell = np.full(len(idx), np.inf)
    ell[hyp] = 2 * np.arccosh(tr[hyp] / 2)
    ok = ell <= L + LENGTH_TOL
    cd = orb.cosh_d[idx]
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = (cd - np.cosh(ell)) / (np.cosh(ell) - 1)
    ok &= s2 <= math.sinh(R) ** 2 * (1 + 1e-9) + 1e-12
    sel = np.nonzero(ok)[0]
    order = sel[np.lexsort((orb.depth[idx[sel]], ell[sel]))]
    return idx[order], ell[order]


def enumerate_geodesics(surface, L: float, max_word: int = 8) -> GeodesicInventory:
    """Every free-homotopy class of closed geodesics of length <= L, once each.

    Classes are found geometrically (complete for the given L); canonical
    words are the shortest among reduced words of length <= ``max_word``
    when one exists, otherwise a word read off the orbit search.
    """
    if not L > 0:
        raise DomainError("L must be positive")
    dom = surface.domain
    R = dom.radius
    r = orbit_radius_for(R, L) + 1e-9
    stamp = {
        "scheme": SCHEME_VERSION,
        "L": L,
        "domain_radius": R,
        "domain_faces": len(dom.faces),
        "orbit_radius": r,
        "max_word": max_word,
        "possibly_incomplete": False,
    }
    L_eff = L
    try:
        orb = dom.orbit(r)
    except BudgetExceeded as exc:
        log.warning("%s; shrinking the cutoff", exc)
        stamp["possibly_incomplete"] = True
        while True:
            L_eff *= 0.8
            r = orbit_radius_for(R, L_eff) + 1e-9
            try:
                orb = dom.orbit(r)
                break
            except BudgetExceeded:
                continue
        stamp["covered_L"] = L_eff

    classes = _Classes(dom)
    best_orbit = {}
    idx, ell = _candidates(orb, R, L_eff, r)
    for k, lk in zip(idx.tolist(), ell.tolist()):
        m = orb.mats[k]
        c = chord_of(dom, m)
        if c is None:
            continue
        cid = classes.index.find(c)
        if cid is None:
            cid = classes.add(m)
        power = max(1, int(round(lk / classes.lengths[cid])))
        key = (power, int(orb.depth[k]))
        if cid not in best_orbit or key < best_orbit[cid][0]:
            best_orbit[cid] = (key, k)

    labels, unmatched = ({}, 0)
    if max_word > 0:
        labels, unmatched = search_words(dom, classes, L_eff, max_word)
    if unmatched:
        log.error("%d short words matched no enumerated class", unmatched)
        stamp["possibly_incomplete"] = True
        stamp["unmatched_words"] = unmatched

    gens = [g.to_array() for g in surface.generators]
    out = []
    for cid in range(len(classes.chords)):
        (p0, _), k = best_orbit[cid]
        ow = W.cyclic_reduce(orb.word(k))
        root_w, root_k = W.root(ow)
        if p0 > 1 and root_k % p0 == 0:
            ow = root_w * (root_k // p0)
        ell0 = classes.lengths[cid]
        sic = count_crossings(classes.chords[cid])
        for power in range(1, int(math.floor((L_eff + LENGTH_TOL) / ell0)) + 1):
            word = labels.get((cid, power))
            fallback = W.canonical_class(ow * power)
            if word is None or (len(fallback), W._key(fallback)) < (len(word), W._key(word)):
                word = fallback
            trace = float(np.trace(W.evaluate(word, gens)))
            length = length_from_trace(trace)
            if length > L_eff + LENGTH_TOL:
                continue
            out.append(
                ClosedGeodesic(
                    word=word,
                    trace=trace,
                    length=length,
                    primitive=power == 1,
                    power=power,
                    self_intersections=sic if power == 1 else None,
                    element=MobiusMap.from_array(W.evaluate(word, gens)),
                    class_id=cid,
                    chords=classes.chords[cid],
                )
            )
    out.sort(key=lambda g: (round(g.length, 9), len(g.word), W._key(g.word)))
    inv = GeodesicInventory(surface.fingerprint(), L, out, stamp)
    inv._classes = classes
    return inv


# --- single geodesics ----------------------------------------------------------------


def geodesic_from_word(surface, word) -> ClosedGeodesic:
    """Closed geodesic of a word in the surface generators, with its chords traced."""
    w = W.cyclic_reduce(tuple(word))
    if not w:
        raise W.ContractibleWordError("word reduces to the identity")
    mat = W.evaluate(w, [g.to_array() for g in surface.generators])
    return geodesic_from_element(surface, MobiusMap.from_array(mat), w, trace=float(np.trace(mat)))


def geodesic_from_element(surface, elem: MobiusMap, word=None, trace=None) -> ClosedGeodesic:
    """Closed geodesic of a surface-frame group element; the word is looked up if not given."""
    if classify(elem) != "hyperbolic":
        raise DomainError("element is not hyperbolic")
    dom = surface.domain
    md = _into_domain(dom, dom.to_domain(elem))
    if word is None:
        word = word_of(dom, md)  # a conjugate is enough: only the class matters
    chords = tuple(trace_chords(dom, md))
    if trace is None:
        trace = float(np.trace(W.evaluate(word, [g.to_array() for g in surface.generators])))
    length = length_from_trace(trace)
    ell0 = sum(c.length for c in chords)
    power = max(1, int(round(length / ell0)))
    return ClosedGeodesic(
        word=W.canonical_class(word),
        trace=trace,
        length=length,
        primitive=power == 1,
        power=power,
        self_intersections=count_crossings(chords) if power == 1 else None,
        element=elem,
        chords=chords,
    )


def is_simple(geo: ClosedGeodesic, surface=None) -> bool:
    if geo.self_intersections is None and geo.primitive:
        if surface is None:
            raise ValueError("need the surface to trace this geodesic")
        geo = geodesic_from_word(surface, geo.word)
    return bool(geo.simple)


def _chords_for(geo, surface):
    if geo.chords:
        return geo.chords
    if surface is None:
        raise ValueError("need the surface to trace this geodesic")
    return geodesic_from_word(surface, geo.word).chords


def intersection_number(g1: ClosedGeodesic, g2: ClosedGeodesic, surface=None) -> int:
    """Geometric intersection number; 0 for a class paired with itself (or its powers)."""
    c1, c2 = _chords_for(g1, surface), _chords_for(g2, surface)
    if c2 and _has_chord(c1, c2[0]):
        return 0
    return count_crossings(c1, c2) * g1.power * g2.power


def _has_chord(chords, c) -> bool:
    return any(_same_chord(c, x) for x in chords)


def systole(surface) -> ClosedGeodesic:
    """Shortest closed geodesic (from a complete inventory at a length that is certainly enough)."""
    L = shortest_loop_at(_centre(surface), surface)[0]
    inv = enumerate_geodesics(surface, L + 1e-6, max_word=6)
    if not inv.complete or not inv.geodesics:
        raise Inconclusive("could not certify the systole")
    return inv.geodesics[0]


def _centre(surface) -> complex:
    """The Dirichlet centre in the surface frame."""
    return surface.domain.conj.inverse()(1j)


# --- loops at points ----------------------------------------------------------------


def _orbit_at(surface, z, extra: float):
    """Elements T (domain frame, acting at the reduced lift) with d(x, T x) <= extra candidates."""
    dom = surface.domain
    x = dom.point_to_domain(z)
    xr, h = dom.reduce_point(x)
    d0 = math.acosh(max(1.0, float(xr[0])))
    r = 2 * d0 + extra + 1e-9
    orb = dom.orbit(r)
    idx = orb.within(r)
    idx = idx[idx > 0]
    ys = lorentz_batch(orb.mats[idx]) @ xr
    ch = -minkowski(ys, xr[None])
    return dom, orb, idx, ch, h


def _loop_bound(surface, z) -> float:
    dom = surface.domain
    xr, _ = dom.reduce_point(dom.point_to_domain(z))
    ys = lorentz_batch(dom.face_mats) @ xr
    return math.acosh(max(1.0, float((-minkowski(ys, xr[None])).min())))


def shortest_loop_at(z, surface) -> tuple[float, MobiusMap]:
    """Length of the shortest geodesic loop at z and the group element realising it (surface frame)."""
    z = z.z if hasattr(z, "z") else complex(z)
    ub = _loop_bound(surface, z)
    dom, orb, idx, ch, h = _orbit_at(surface, z, ub)
    k = int(np.argmin(ch))
    length = math.acosh(max(1.0, float(ch[k])))
    t = np.linalg.inv(h) @ orb.mats[idx[k]] @ h
    return length, dom.from_domain(t)


def injectivity_radius_at(z, surface) -> float:
    return shortest_loop_at(z, surface)[0] / 2


def loops_shorter_than(z, surface, bound: float):
    """All elements T != id with d(z, T z) < bound, as (length, element) pairs sorted by length."""
    z = z.z if hasattr(z, "z") else complex(z)
    dom, orb, idx, ch, h = _orbit_at(surface, z, bound)
    sel = np.nonzero(ch < math.cosh(bound))[0]
    hi = np.linalg.inv(h)
    out = []
    for k in sel[np.argsort(ch[sel], kind="stable")].tolist():
        out.append((math.acosh(max(1.0, float(ch[k]))), dom.from_domain(hi @ orb.mats[idx[k]] @ h)))
    return out


# --- multiplicities -----------------------------------------------------------------


def spectrum_multiplicities(inv: GeodesicInventory, resolution: float = 1e-6):
    """Groups of classes whose lengths agree within ``resolution``."""
    groups = []
    for g in sorted(inv.geodesics, key=lambda g: g.length):
        if groups and g.length - groups[-1]["lengths"][-1] <= resolution:
            groups[-1]["lengths"].append(g.length)
            groups[-1]["words"].append(g.word_text())
        else:
            groups.append({"lengths": [g.length], "words": [g.word_text()]})
    return [
        {"length": grp["lengths"][0], "multiplicity": len(grp["words"]), "words": grp["words"]}
        for grp in groups
    ]


# --- lifts and translates ------------------------------------------------------------


@dataclass
class AxisFrame:
    normal: np.ndarray  # unit spacelike normal (oriented)
    foot: np.ndarray  # point of the axis closest to the centre
    tangent: np.ndarray  # unit tangent at the foot, towards the attracting end
    rho: float  # distance from the centre


def axis_frame(mat: np.ndarray) -> AxisFrame:
    p, q = fixed_points(MobiusMap.from_array(mat))
    u, v = ideal_vector(p), ideal_vector(q)
    n = np.cross(u, v) * np.array([-1.0, 1.0, 1.0])
    n = n / math.sqrt(float(minkowski(n, n)))
    o = np.array([1.0, 0.0, 0.0])
    s = float(minkowski(o, n))
    m = o - s * n
    m = m / math.sqrt(-float(minkowski(m, m)))
    e = v + float(minkowski(v, m)) * m
    e = e / math.sqrt(float(minkowski(e, e)))
    return AxisFrame(n, m, e, math.asinh(abs(s)))


def _crossing_point(n1, n2):
    x = np.cross(n1, n2) * np.array([-1.0, 1.0, 1.0])
    q = float(minkowski(x, x))
    if q >= 0:
        return None
    x = x / math.sqrt(-q)
    return x if x[0] > 0 else -x


@dataclass
class Lift:
    normal: np.ndarray
    cosh_or_cos: float  # |<n1, n>|: < 1 crossing (cos of angle), >= 1 cosh of distance
    element: np.ndarray  # domain-frame g with lift = g . axis2


def _domain_rep(surface, geo):
    dom = surface.domain
    return _into_domain(dom, dom.to_domain(geo.element))


def nearby_lifts(surface, geo1, geo2, reach: float):
    """Lifts of geo2's axis that come within ``reach`` of a fundamental segment of geo1's axis.

    Returns (frame of geo1's axis, primitive length of geo1, distinct lifts).
    Lifts equal to geo1's own axis are dropped.
    """
    dom = surface.domain
    A, B = _domain_rep(surface, geo1), _domain_rep(surface, geo2)
    f1, f2 = axis_frame(A), axis_frame(B)
    l1, l2 = geo1.primitive_length, geo2.primitive_length
    r = f1.rho + l1 / 2 + reach + l2 / 2 + f2.rho + 1e-9
    orb = dom.orbit(r)
    idx = orb.within(r)
    normals = lorentz_batch(orb.mats[idx]) @ f2.normal
    c = np.abs(minkowski(normals, f1.normal[None]))
    keep = np.nonzero(c <= math.cosh(reach) * (1 + 1e-12))[0]
    seen = set()
    lifts = []
    for k in keep[np.argsort(c[keep], kind="stable")].tolist():
        n = normals[k]
        if abs(c[k] - 1) < 1e-9 and np.abs(np.abs(n) - np.abs(f1.normal)).max() < 1e-7:
            continue  # the axis itself
        key = tuple(np.rint(n / 1e-6).astype(np.int64).tolist())
        if key in seen:
            continue
        seen.add(key)
        lifts.append(Lift(n, float(c[k]), orb.mats[idx[k]]))
    return f1, l1, lifts


def tube_lifts(surface, geo, reach: float):
    """Like ``nearby_lifts(surface, geo, geo, reach)`` but searching only a tube.

    Tiles are kept near the fundamental segment of the axis instead of in a
    ball around the centre, which is far cheaper for long reaches.
    """
    dom = surface.domain
    A = _domain_rep(surface, geo)
    f = axis_frame(A)
    ell = geo.primitive_length
    far = math.cosh(f.rho + ell / 2 + reach + 1e-9)  # orbit point to segment, see nearby_lifts
    grow = math.cosh(math.acosh(far) + dom.radius + 1e-6)

    def seg_cosh(pts):
        # Fermi coordinates: sinh(rho), cosh(rho) cosh(t), cosh(rho) sinh(t)
        sh = minkowski(pts, f.normal[None])
        x = -minkowski(pts, f.foot[None])
        y = minkowski(pts, f.tangent[None])
        t = np.abs(np.arctanh(np.clip(y / x, -1 + 1e-16, 1 - 1e-16)))
        return np.sqrt(1 + sh * sh) * np.cosh(np.maximum(t - ell / 2, 0))

    mats = tube_search(dom, lambda pts: seg_cosh(pts) <= grow)
    mats = mats[seg_cosh(orbit_points(mats)) <= far]
    normals = lorentz_batch(mats) @ f.normal
    c = np.abs(minkowski(normals, f.normal[None]))
    keep = np.nonzero(c <= math.cosh(reach) * (1 + 1e-12))[0]
    seen = set()
    lifts = []
    for k in keep[np.argsort(c[keep], kind="stable")].tolist():
        n = normals[k]
        if abs(c[k] - 1) < 1e-9 and np.abs(np.abs(n) - np.abs(f.normal)).max() < 1e-7:
            continue
        key = tuple(np.rint(n / 1e-6).astype(np.int64).tolist())
        if key in seen:
            continue
        seen.add(key)
        lifts.append(Lift(n, float(c[k]), mats[k]))
    return f, ell, lifts


def crossings_on_segment(frame: AxisFrame, length: float, lifts) -> int:
    """Lifts crossing the half-open fundamental segment [-l/2, l/2) around the foot."""
    n = 0
    for lf in lifts:
        if lf.cosh_or_cos >= 1:
            continue
        x = _crossing_point(frame.normal, lf.normal)
        if x is None:
            continue
        t = math.asinh(float(minkowski(x, frame.tangent)))
        if -length / 2 <= t < length / 2:
            n += 1
    return n


def intersections_by_translates(surface, geo1, geo2) -> int:
    """Independent intersection count from axis translates."""
    f1, l1, lifts = nearby_lifts(surface, geo1, geo2, 0.0)
    return crossings_on_segment(f1, l1, lifts)


def self_intersections_by_translates(surface, geo) -> int:
    f1, l1, lifts = nearby_lifts(surface, geo, geo, 0.0)
    return crossings_on_segment(f1, l1, lifts) // 2


def translate_distance(surface, geo1, geo2, reach: float):
    """Smallest distance between the axis of geo1 and a different lift of geo2's axis.

    Returns (distance, element) or (inf, None) when no lift comes within ``reach``.
    """
    _, _, lifts = nearby_lifts(surface, geo1, geo2, reach)
    if not lifts:
        return math.inf, None
    lf = lifts[0]
    d = math.acosh(lf.cosh_or_cos) if lf.cosh_or_cos > 1 else 0.0
    return d, surface.domain.from_domain(lf.element)
