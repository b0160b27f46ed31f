"""Dirichlet fundamental domain, orbit enumeration and geodesic chord tracing.

All work happens in a "domain frame": the surface group conjugated so that
the Dirichlet centre is i, which is (1, 0, 0) on the hyperboloid.  Polygons
live in the Klein disc, where geodesics are straight chords, so clipping and
crossing tests are plain planar geometry.

The domain is built from orbit points of short generator words and certified
by Gauss-Bonnet: a candidate polygon always contains the true Dirichlet
domain, and equals it exactly when its area is 4 pi (g - 1).  Once certified,
the face pairings give a rigorous orbit search: every element moving i by at
most r is reached through tiles whose centres lie within r + R, where R is
the polygon's circumradius.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import words as W
from .hyperbolic import MobiusMap, compose, lorentz_batch, minkowski, to_hyperboloid

log = logging.getLogger(__name__)

AREA_TOL = 1e-7
GRID = 1e-4  # orbit points closer than this on the hyperboloid are identified
# a fixed off-centre shift keeps the base point away from symmetry centres, so
# that vertices are trivalent and geodesics avoid passing through them
GENERIC_SHIFT = complex(0.0731, 1.0419)


class DomainFailure(RuntimeError):
    """The Dirichlet domain could not be certified within the search limits."""


class BudgetExceeded(RuntimeError):
    """An orbit search needed more elements than its budget allows."""


def orbit_points(mats: np.ndarray) -> np.ndarray:
    """Images of i on the hyperboloid for a stack of SL2 matrices."""
    a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
    return np.stack([(a * a + b * b + c * c + d * d) / 2, (a * a + b * b - c * c - d * d) / 2, a * c + b * d], axis=1)


def _inv(mats: np.ndarray) -> np.ndarray:
    out = np.empty_like(mats)
    out[:, 0, 0] = mats[:, 1, 1]
    out[:, 1, 1] = mats[:, 0, 0]
    out[:, 0, 1] = -mats[:, 0, 1]
    out[:, 1, 0] = -mats[:, 1, 0]
    return out


def _keys(x: np.ndarray):
    k = np.rint(x[:, 1:] / GRID).astype(np.int64)
    return list(zip(k[:, 0].tolist(), k[:, 1].tolist()))


# --- polygons in the Klein disc -------------------------------------------------


def clip_polygon(verts, labels, a, b, label):
    """Clip a convex polygon by the half-plane a . k <= b.

    ``labels[i]`` names the edge from ``verts[i]`` to ``verts[i + 1]``.
    """
    n = len(verts)
    s = verts @ a - b
    if (s <= 1e-15).all():
        return verts, labels
    out_v, out_l = [], []
    for i in range(n):
        j = (i + 1) % n
        p, q = verts[i], verts[j]
        sp, sq = s[i], s[j]
        if sp <= 0:
            out_v.append(p)
            if sq > 0:
                t = sp / (sp - sq)
                out_l.append(labels[i])
                out_v.append(p + t * (q - p))
                out_l.append(label)
            else:
                out_l.append(labels[i])
        elif sq <= 0:
            t = sp / (sp - sq)
            out_v.append(p + t * (q - p))
            out_l.append(labels[i])
    if not out_v:
        return np.zeros((0, 2)), []
    return np.array(out_v), out_l


def _drop_short_edges(verts, labels, eps=1e-12):
    keep_v, keep_l = [], []
    n = len(verts)
    for i in range(n):
        if np.linalg.norm(verts[(i + 1) % n] - verts[i]) > eps:
            keep_v.append(verts[i])
            keep_l.append(labels[i])
    return np.array(keep_v), keep_l


def face_normal(y: np.ndarray) -> np.ndarray:
    """Unit outward normal of the bisector between (1,0,0) and the orbit point y."""
    n = np.array([y[0] - 1.0, y[1], y[2]])
    return n / math.sqrt(float(minkowski(n, n)))


def polygon_area(normals) -> float:
    """Hyperbolic area of a compact convex polygon from its consecutive outward edge normals."""
    m = len(normals)
    total = 0.0
    for i in range(m):
        c = float(minkowski(normals[i], normals[(i + 1) % m]))
        total += math.acos(max(-1.0, min(1.0, -c)))
    return (m - 2) * math.pi - total


class _Pool:
    """Distinct non-identity group elements keyed by their orbit point."""

    def __init__(self):
        self.seen = {(0, 0)}
        self.mats = []
        self.words = []

    def __len__(self):
        return len(self.mats)

    def add(self, mats, words, cut):
        """Add elements moving i by at most ``cut``; returns indices of the new ones."""
        pts = orbit_points(mats)
        ok = np.isfinite(pts[:, 0]) & (pts[:, 0] <= math.cosh(min(cut, 700.0))) & (pts[:, 0] > 1 + 1e-9)
        idx = np.nonzero(ok)[0].tolist()
        new = []
        for i, key in zip(idx, _keys(pts[idx])):
            if key not in self.seen:
                self.seen.add(key)
                self.mats.append(mats[i])
                self.words.append(words[i])
                new.append(i)
        return new


@dataclass
class Face:
    element: np.ndarray  # 2x2 matrix in the domain frame
    word: tuple  # word in the surface generators
    point: np.ndarray  # orbit point element(i) on the hyperboloid
    normal: np.ndarray
    a: np.ndarray  # Klein half-plane a . k <= b
    b: float
    partner: int = -1


def _displacement(m: MobiusMap) -> float:
    return (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d) / 2


def _expand(word, subs):
    out = []
    for x in word:
        w = subs[abs(x) - 1]
        out.extend(w if x > 0 else W.inverse(w))
    return tuple(out)


def shorten_generators(gens, max_rounds: int = 10_000):
    """Greedy Nielsen moves g_i -> g_i g_j^(+-1) or g_j^(+-1) g_i while the displacement of i drops.

    Returns the new generators and, for each, its word in the old ones.
    """
    gens = list(gens)
    words = [(i + 1,) for i in range(len(gens))]
    for _ in range(max_rounds):
        best = None
        for i, gi in enumerate(gens):
            base = _displacement(gi)
            for j, gj in enumerate(gens):
                if i == j:
                    continue
                for e in (1, -1):
                    h = gj if e > 0 else gj.inverse()
                    hw = words[j] if e > 0 else W.inverse(words[j])
                    for cand, cw in ((compose(gi, h), words[i] + hw), (compose(h, gi), hw + words[i])):
                        gain = base - _displacement(cand)
                        if gain > 1e-9 * base and (best is None or gain > best[0]):
                            best = (gain, i, cand, cw)
        if best is None:
            break
        _, i, cand, cw = best
        gens[i] = cand
        words[i] = W.free_reduce(cw)
    return gens, words


class DirichletDomain:
    """Certified Dirichlet domain of a closed surface group.

    ``conj`` maps the surface frame to the domain frame; ``gens`` are the
    surface generators in the domain frame (same order as the surface).
    """

    def __init__(self, genus, conj, gens, faces, verts, labels, max_orbit=3_000_000):
        self.genus = genus
        self.conj = conj
        self.gens = gens
        self.faces = faces
        self.verts = verts
        self.labels = labels
        self.max_orbit = max_orbit
        self.normals = np.array([f.normal for f in faces])
        self.face_points = np.array([f.point for f in faces])
        self.face_mats = np.array([f.element for f in faces])
        self.face_inv = _inv(self.face_mats)
        klein_r = np.sqrt((verts ** 2).sum(axis=1)).max()
        self.radius = math.atanh(float(klein_r))
        edge_normals = [faces[l].normal for l in labels]
        self.area = polygon_area(edge_normals)
        self._orbit = None

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, surface, max_len: int = 12, max_orbit: int = 3_000_000) -> "DirichletDomain":
        from .surfaces import recenter

        h = recenter(surface.generators)
        x, y = GENERIC_SHIFT.real, GENERIC_SHIFT.imag
        # centre the domain slightly off the displacement minimiser
        shift = MobiusMap(1 / math.sqrt(y), -x / math.sqrt(y), 0.0, math.sqrt(y))
        conj = compose(shift, h)
        cinv = conj.inverse()
        gens = [compose(compose(conj, g), cinv) for g in surface.generators]
        target = 4 * math.pi * (surface.genus - 1)

        short, short_words = shorten_generators(gens)
        k = len(short)
        letters = [i + 1 for i in range(k)] + [-(i + 1) for i in range(k)]
        lmats = np.array([g.to_array() for g in short] + [g.inverse().to_array() for g in short])
        disp = math.acosh(float(orbit_points(lmats)[:, 0].max()))

        # phase 1: breadth-first words until the candidate polygon is compact
        pool = _Pool()
        frontier_m = np.eye(2)[None]
        frontier_w = [()]
        cut = 2 * disp + 2.0
        dom = None
        for length in range(1, max_len + 1):
            new_m = np.einsum("nij,ljk->nlik", frontier_m, lmats).reshape(-1, 2, 2)
            new_w = [w + (l,) for w in frontier_w for l in letters]
            keep = pool.add(new_m, [W.free_reduce(_expand(w, short_words)) for w in new_w], cut)
            if not keep:
                break
            frontier_m = new_m[keep]
            frontier_w = [new_w[i] for i in keep]
            if length >= 2:
                dom = cls._from_candidates(surface.genus, conj, gens, pool, max_orbit)
                if dom is not None:
                    break
        if dom is None:
            raise DomainFailure("no compact candidate polygon from short words")

        # phase 2: add products of face elements until Gauss-Bonnet closes
        for _ in range(max_len * 4):
            if abs(dom.area - target) <= AREA_TOL * target:
                dom._pair_faces()
                log.debug("Dirichlet domain: %d faces, R=%.4f", len(dom.faces), dom.radius)
                return dom
            fm = np.array([f.element for f in dom.faces])
            fw = [f.word for f in dom.faces]
            prod = np.einsum("nij,mjk->nmik", fm, fm).reshape(-1, 2, 2)
            pw = [W.free_reduce(u + v) for u in fw for v in fw]
            prod = np.concatenate([prod, _inv(fm)])
            pw = pw + [W.inverse(w) for w in fw]
            if not pool.add(prod, pw, 2 * dom.radius + 1e-6):
                raise DomainFailure(f"refinement stalled (area {dom.area:.6f}, expected {target:.6f})")
            if len(pool) > max_orbit:
                raise BudgetExceeded("candidate pool exceeded its budget")
            dom = cls._from_candidates(surface.genus, conj, gens, pool, max_orbit)
        raise DomainFailure(f"could not certify the Dirichlet domain (area {dom.area:.6f}, expected {target:.6f})")

    @classmethod
    def _from_candidates(cls, genus, conj, gens, pool, max_orbit):
        mats, words = np.array(pool.mats), pool.words
        pts = orbit_points(mats)
        order = np.argsort(pts[:, 0], kind="stable")
        verts = np.array([[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]])
        labels = [-1, -1, -1, -1]
        faces = []
        for idx in order.tolist():
            y = pts[idx]
            a = y[1:] / (y[0] - 1.0)
            b = 1.0
            if verts.size and (verts @ a <= b + 1e-15).all():
                continue
            faces.append(Face(mats[idx], tuple(words[idx]), y, face_normal(y), a, b))
            verts, labels = clip_polygon(verts, labels, a, b, len(faces) - 1)
        verts, labels = _drop_short_edges(verts, labels)
        if len(verts) < 3 or -1 in labels:
            return None
        if (np.sqrt((verts ** 2).sum(axis=1)) >= 1 - 1e-12).any():
            return None
        used = sorted(set(labels))
        remap = {old: new for new, old in enumerate(used)}
        faces = [faces[i] for i in used]
        labels = [remap[l] for l in labels]
        return cls(genus, conj, gens, faces, verts, labels, max_orbit)

    def _pair_faces(self):
        for f in self.faces:
            p = orbit_points(_inv(f.element[None]))[0]
            ch = -minkowski(self.face_points, p[None])
            j = int(np.argmin(ch))
            if ch[j] > 1 + 1e-8:
                raise DomainFailure("face pairing is not closed under inverses")
            f.partner = j

    # -- frames and points ---------------------------------------------------

    def to_domain(self, m: MobiusMap) -> np.ndarray:
        """Matrix of a surface-frame element in the domain frame."""
        return compose(compose(self.conj, m), self.conj.inverse()).to_array()

    def from_domain(self, mat: np.ndarray) -> MobiusMap:
        ci = self.conj.inverse()
        return compose(compose(ci, MobiusMap.from_array(mat)), self.conj)

    def point_to_domain(self, z: complex) -> np.ndarray:
        return to_hyperboloid(self.conj(complex(z)))

    def contains(self, x: np.ndarray, tol: float = 1e-12) -> bool:
        return bool((-minkowski(self.face_points, x[None]) >= x[0] * (1 - tol)).all())

    def reduce_point(self, x: np.ndarray, max_steps: int = 10_000):
        """Move a hyperboloid point into the domain.

        Returns ``(x', h)`` with ``x' = h x`` inside the domain, h as a 2x2 matrix.
        """
        h = np.eye(2)
        for _ in range(max_steps):
            ch = -minkowski(self.face_points, x[None])
            j = int(np.argmin(ch))
            if ch[j] >= x[0] * (1 - 1e-13):
                return x, h
            # x is closer to s_j(o) than to o: pull it back by s_j^-1
            x = lorentz_batch(self.face_inv[j][None])[0] @ x
            h = self.face_inv[j] @ h
        raise DomainFailure("point reduction did not terminate")

    # -- orbit search --------------------------------------------------------

    def orbit(self, r: float) -> "Orbit":
        """All group elements g with d(i, g i) <= r (domain frame)."""
        if self._orbit is None or self._orbit.radius < r:
            self._orbit = Orbit.search(self, r)
        return self._orbit


class Orbit:
    """Tile search over face pairings.

    ``mats[k]`` is a group element, ``pts[k]`` its orbit point; element k is
    ``mats[parent[k]] @ face[letter[k]]``.  Index 0 is the identity.
    """

    def __init__(self, domain, radius, mats, pts, parent, letter):
        self.domain = domain
        self.radius = radius
        self.mats = mats
        self.pts = pts
        self.parent = parent
        self.letter = letter
        self.cosh_d = pts[:, 0]

    @classmethod
    def search(cls, domain: DirichletDomain, r: float) -> "Orbit":
        reach = math.cosh(r + domain.radius + 1e-6)
        fm = domain.face_mats
        nf = len(fm)
        mats = [np.eye(2)[None]]
        depth = [np.array([0])]
        parent = [np.array([-1])]
        letter = [np.array([-1])]
        seen = {(0, 0)}
        frontier = np.eye(2)[None]
        start = 0
        total = 1
        while len(frontier):
            kids = np.einsum("nij,fjk->nfik", frontier, fm).reshape(-1, 2, 2)
            pts = orbit_points(kids)
            ok = np.nonzero(pts[:, 0] <= reach)[0]
            keep = []
            for i, key in zip(ok.tolist(), _keys(pts[ok])):
                if key not in seen:
                    seen.add(key)
                    keep.append(i)
            keep = np.array(keep, dtype=np.int64)
            total += len(keep)
            if total > domain.max_orbit:
                raise BudgetExceeded(f"orbit search to radius {r:.3f} needs more than {domain.max_orbit} elements")
            frontier = kids[keep]
            mats.append(frontier)
            parent.append(start + keep // nf)
            letter.append(keep % nf)
            depth.append(np.full(len(keep), len(depth)))
            start += len(mats[-2])
        mats = np.concatenate(mats)
        out = cls(domain, r, mats, orbit_points(mats), np.concatenate(parent), np.concatenate(letter))
        out.depth = np.concatenate(depth)
        return out

    def within(self, r: float) -> np.ndarray:
        if r > self.radius + 1e-12:
            raise ValueError("radius exceeds the searched orbit")
        return np.nonzero(self.cosh_d <= math.cosh(r))[0]

    def word(self, k: int) -> tuple:
        """Word in the surface generators for element k."""
        faces = []
        while k > 0:
            faces.append(int(self.letter[k]))
            k = int(self.parent[k])
        out = []
        for f in reversed(faces):
            out.extend(self.domain.faces[f].word)
        return W.free_reduce(out)

    def find(self, mat: np.ndarray):
        """Index of a group element (domain frame) in the orbit, or None."""
        if getattr(self, "_index", None) is None:
            self._index = {k: i for i, k in enumerate(_keys(self.pts))}
        return self._index.get(_keys(orbit_points(mat[None]))[0])


def tube_search(domain: DirichletDomain, keep) -> np.ndarray:
    """Group elements whose tiles satisfy ``keep`` (a test on orbit points).

    ``keep`` must select the tiles meeting some convex set, so the selection
    is connected through faces.
    """
    fm = domain.face_mats
    out = [np.eye(2)[None]]
    seen = {(0, 0)}
    frontier = out[0]
    total = 1
    while len(frontier):
        kids = np.einsum("nij,fjk->nfik", frontier, fm).reshape(-1, 2, 2)
        pts = orbit_points(kids)
        ok = np.nonzero(keep(pts))[0]
        new = []
        for i, key in zip(ok.tolist(), _keys(pts[ok])):
            if key not in seen:
                seen.add(key)
                new.append(i)
        total += len(new)
        if total > domain.max_orbit:
            raise BudgetExceeded(f"tube search needs more than {domain.max_orbit} elements")
        frontier = kids[np.array(new, dtype=np.int64)]
        out.append(frontier)
    return np.concatenate(out)


def word_of(domain: DirichletDomain, mat: np.ndarray) -> tuple:
    """A word in the surface generators for a domain-frame group element."""
    x0 = float(orbit_points(mat[None])[0, 0])
    if x0 < 1 + 1e-9:
        return ()
    # walk the orbit point back into the domain, recording the faces crossed
    m = mat
    faces = []
    for _ in range(10_000):
        x = orbit_points(m[None])[0]
        ch = -minkowski(domain.face_points, x[None])
        j = int(np.argmin(ch))
        if ch[j] >= x[0] * (1 - 1e-13):
            break
        m = domain.face_inv[j] @ m
        faces.append(j)
    if orbit_points(m[None])[0, 0] < 1 + 1e-7:
        return W.free_reduce([a for j in faces for a in domain.faces[j].word])
    d = math.acosh(x0)
    orb = domain.orbit(d + 1e-6)
    k = orb.find(mat)
    if k is None:
        raise DomainFailure("element not found in its orbit ball; is it in the group?")
    return orb.word(k)
