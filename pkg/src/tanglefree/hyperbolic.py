"""Isometries of the upper half-plane and the closed-form formulas built on them.

Points live in the upper half-plane H = {x + iy : y > 0}.  Orientation-preserving
isometries are elements of PSL(2, R), stored as unit-determinant 2x2 matrices
normalised so that the first nonzero entry is positive.

Besides the half-plane picture a few helpers work on the hyperboloid model
(Minkowski space with signature (-, +, +)), where geodesics become spacelike
unit normals and most incidence questions reduce to inner products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: default relative tolerance and absolute floor
REL_TOL = 1e-9
ABS_TOL = 1e-12
#: half-width of the parabolic band around |trace| = 2
PARABOLIC_BAND = 1e-10
EPS = 2.220446049250313e-16


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


def _canonical_sign(a, b, c, d):
    for v in (a, b, c, d):
        if v != 0:
            if v < 0:
                return -a, -b, -c, -d
            break
    return a, b, c, d


@dataclass(frozen=True, eq=False)
class MobiusMap:
    """Element of PSL(2, R) acting by z -> (az + b) / (cz + d)."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        # products of large unimodular matrices lose the determinant to cancellation
        scale = max(abs(self.a * self.d), abs(self.b * self.c))
        if abs(det - 1) <= 64 * EPS * scale:
            det = 1.0
        if not det > 0:
            raise DomainError(f"determinant must be positive, got {det!r}")
        s = math.sqrt(det)
        a, b, c, d = _canonical_sign(self.a / s, self.b / s, self.c / s, self.d / s)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, m) -> "MobiusMap":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @classmethod
    def translation_along(cls, axis: "AxisGeodesic", t: float) -> "MobiusMap":
        """Hyperbolic map translating by ``t`` along ``axis`` (from p towards q)."""
        n = normalizer(axis)
        e = math.exp(t / 2)
        return compose(compose(n.inverse(), MobiusMap(e, 0.0, 0.0, 1 / e)), n)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def inverse(self) -> "MobiusMap":
        return _unchecked(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)

    def __call__(self, z):
        if isinstance(z, PlanePoint):
            w = self(z.z)
            return PlanePoint(w.real, w.imag)
        if z == math.inf:
            return math.inf if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return math.inf
        return (self.a * z + self.b) / den

    def distance_to(self, other: "MobiusMap") -> float:
        """Max-norm distance between matrices, minimised over the sign ambiguity."""
        u, v = self.to_array(), other.to_array()
        return float(min(np.abs(u - v).max(), np.abs(u + v).max()))

    def isclose(self, other: "MobiusMap", tol: float = 1e-8) -> bool:
        scale = max(1.0, float(np.abs(self.to_array()).max()))
        return self.distance_to(other) <= tol * scale

    def __eq__(self, other):
        if not isinstance(other, MobiusMap):
            return NotImplemented
        return self.isclose(other, REL_TOL)

    def __hash__(self):
        return hash(tuple(round(v, 6) for v in (self.a, self.b, self.c, self.d)))

    def __repr__(self):
        return f"MobiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise DomainError(f"point must lie in the upper half-plane, y={self.y!r}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "PlanePoint":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class AxisGeodesic:
    """Oriented geodesic of H, from endpoint ``p`` to endpoint ``q`` on R u {inf}."""

    p: float
    q: float

    def __post_init__(self):
        if self.p == self.q:
            raise DomainError("geodesic endpoints must differ")

    def reversed(self) -> "AxisGeodesic":
        return AxisGeodesic(self.q, self.p)

    def normalized(self) -> "AxisGeodesic":
        """Unoriented representative with p < q, or q = inf."""
        if self.p == math.inf or (self.q != math.inf and self.p > self.q):
            return self.reversed()
        return self


def compose(m: MobiusMap, n: MobiusMap) -> MobiusMap:
    # the product of unimodular maps is unimodular; skip the determinant check,
    # which cancellation makes unreliable once entries are large
    return _unchecked(
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def _unchecked(a, b, c, d) -> MobiusMap:
    out = object.__new__(MobiusMap)
    for k, v in zip("abcd", _canonical_sign(a, b, c, d)):
        object.__setattr__(out, k, v)
    return out


def dist(z: PlanePoint, w: PlanePoint) -> float:
    dx, dy = z.x - w.x, z.y - w.y
    # arcosh(1 + u) with u small is best evaluated as log1p
    u = (dx * dx + dy * dy) / (2 * z.y * w.y)
    return math.log1p(u + math.sqrt(u * (u + 2)))


def classify(m: MobiusMap, band: float = PARABOLIC_BAND) -> str:
    if m.isclose(MobiusMap.identity(), 1e-12):
        return "identity"
    t = abs(m.trace)
    if t > 2 + band:
        return "hyperbolic"
    if t >= 2 - band:
        return "parabolic"
    return "elliptic"


def length_from_trace(trace: float) -> float:
    t = abs(trace) / 2
    if t < 1:
        raise DomainError(f"|trace| = {abs(trace)!r} < 2 has no translation length")
    return 2 * math.acosh(t)


def translation_length(m: MobiusMap) -> float:
    if classify(m) != "hyperbolic":
        raise DomainError(f"translation length needs a hyperbolic map, trace={m.trace!r}")
    return length_from_trace(m.trace)


def fixed_points(m: MobiusMap) -> tuple[float, float]:
    """(repelling, attracting) fixed points of a hyperbolic map."""
    if classify(m) != "hyperbolic":
        raise DomainError("fixed points requested for a non-hyperbolic map")
    a, b, c, d = m.a, m.b, m.c, m.d
    tr = a + d
    disc = math.sqrt(tr * tr - 4)
    if abs(c) < 1e-14 * max(1.0, abs(a), abs(d)):
        # z -> (a/d) z + b/d: infinity is one fixed point
        finite = b / (d - a)
        return (finite, math.inf) if abs(a) > abs(d) else (math.inf, finite)
    # roots of c z^2 + (d - a) z - b = 0, computed without cancellation
    s = 1.0 if (a - d) >= 0 else -1.0
    r1 = ((a - d) + s * disc) / (2 * c)
    r2 = -b / (c * r1) if r1 != 0 else ((a - d) - s * disc) / (2 * c)
    # derivative at fixed point z is 1/(cz+d)^2; attracting iff < 1
    if abs(c * r1 + d) > 1:
        return r2, r1
    return r1, r2


def axis(m: MobiusMap) -> AxisGeodesic:
    p, q = fixed_points(m)
    return AxisGeodesic(p, q)


def normalizer(ax: AxisGeodesic) -> MobiusMap:
    """Isometry taking ``ax.p`` to 0 and ``ax.q`` to infinity."""
    p, q = ax.p, ax.q
    if q == math.inf:
        return MobiusMap(1.0, -p, 0.0, 1.0)
    if p == math.inf:
        return MobiusMap(0.0, -1.0, 1.0, -q)
    if p > q:
        return MobiusMap(1.0, -p, 1.0, -q)
    return MobiusMap(-1.0, p, 1.0, -q)


# --- closed-form formulas -------------------------------------------------


def figure_eight_length(l1: float, l2: float, l3: float) -> float:
    """Length of the figure-eight geodesic winding around cuffs 1 and 3 of a pair of pants."""
    for v in (l1, l2, l3):
        if not v > 0:
            raise DomainError("cuff lengths must be positive")
    return 2 * math.acosh(2 * math.cosh(l1 / 2) * math.cosh(l3 / 2) + math.cosh(l2 / 2))


def standard_collar_width(l: float) -> float:
    if not l > 0:
        raise DomainError("length must be positive")
    return math.asinh(1 / math.sinh(l / 2))


def fermi_cylinder_volume(l: float, w: float) -> float:
    """Area of the width-w half-collar around a geodesic of length l."""
    if not l > 0 or w < 0:
        raise DomainError("need l > 0 and w >= 0")
    return l * math.sinh(w)


def fermi_boundary_length(l: float, w: float) -> float:
    """Length of the equidistant curve at distance w from a geodesic of length l."""
    if not l > 0 or w < 0:
        raise DomainError("need l > 0 and w >= 0")
    return l * math.cosh(w)


def bavard_bound(g: int) -> float:
    """Upper bound on the shortest geodesic loop through any point of a genus-g surface."""
    if int(g) != g or g < 2:
        raise DomainError("genus must be an integer >= 2")
    return 2 * math.acosh(1 / (2 * math.sin(math.pi / (12 * g - 6))))


# --- hyperboloid model ------------------------------------------------------


def minkowski(u, v):
    return -u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]


def to_hyperboloid(z) -> np.ndarray:
    """Half-plane point(s) to the hyperboloid sheet; i maps to (1, 0, 0)."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    r2 = x * x + y * y
    return np.stack([(1 + r2) / (2 * y), (r2 - 1) / (2 * y), x / y], axis=-1)


def ideal_vector(t: float) -> np.ndarray:
    """Light-like vector representing the boundary point t in R u {inf}."""
    if t == math.inf:
        return np.array([1.0, 1.0, 0.0])
    v = np.array([1 + t * t, t * t - 1, 2 * t])
    return v / v[0]


def geodesic_normal(ax: AxisGeodesic) -> np.ndarray:
    """Unit spacelike normal of an oriented geodesic.

    The sign is fixed by the orientation, so orientation-preserving isometries
    carry normals to normals.
    """
    u, v = ideal_vector(ax.p), ideal_vector(ax.q)
    n = np.cross(u, v) * np.array([-1.0, 1.0, 1.0])
    return n / math.sqrt(float(minkowski(n, n)))


def geodesic_distance(a1: AxisGeodesic, a2: AxisGeodesic) -> float:
    """Distance between two geodesics; 0 when they cross or coincide."""
    c = abs(float(minkowski(geodesic_normal(a1), geodesic_normal(a2))))
    return math.acosh(c) if c > 1 else 0.0


def point_geodesic_distance(z: PlanePoint, ax: AxisGeodesic) -> float:
    x = to_hyperboloid(z.z)
    return math.asinh(abs(float(minkowski(x, geodesic_normal(ax)))))


def lorentz(m: MobiusMap) -> np.ndarray:
    """SO+(2,1) matrix acting on the hyperboloid like ``m`` acts on H."""
    a, b, c, d = m.a, m.b, m.c, m.d
    # columns are images of an orthonormal frame at i
    return lorentz_batch(np.array([[[a, b], [c, d]]]))[0]


def lorentz_batch(mats: np.ndarray) -> np.ndarray:
    a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
    # standard isomorphism SL(2,R) -> SO+(2,1) for the embedding in to_hyperboloid
    A2, B2, C2, D2 = a * a, b * b, c * c, d * d
    out = np.empty((len(mats), 3, 3))
    out[:, 0, 0] = (A2 + B2 + C2 + D2) / 2
    out[:, 0, 1] = (A2 - B2 + C2 - D2) / 2
    out[:, 0, 2] = a * b + c * d
    out[:, 1, 0] = (A2 + B2 - C2 - D2) / 2
    out[:, 1, 1] = (A2 - B2 - C2 + D2) / 2
    out[:, 1, 2] = a * b - c * d
    out[:, 2, 0] = a * c + b * d
    out[:, 2, 1] = a * c - b * d
    out[:, 2, 2] = a * d + b * c
    return out
