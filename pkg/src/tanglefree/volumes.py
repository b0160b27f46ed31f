"""Weil-Petersson volume polynomials and the integrals that bound the chance of being tangled.

Polynomials are stored exactly: a coefficient p/q for each monomial
l1^(2 e1) ... ln^(2 en) pi^(2 k).  The normalisation is V(0,3) = 1 and
V(1,1)(l) = l^2/24 + pi^2/6, both built in.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import mpmath
import numpy as np
from scipy import integrate, special

from .quadrature import corner_simplex, dirichlet_monomial, integrate_simplex

MP_DPS = 50
QUAD_RTOL = 1e-10


class TableError(ValueError):
    pass


class MissingVolume(KeyError):
    pass


@dataclass(frozen=True)
class VolumePolynomial:
    g: int
    n: int
    coeffs: dict  # (exps tuple of length n, k) -> Fraction

    def __post_init__(self):
        if 2 * self.g - 2 + self.n <= 0:
            raise TableError(f"({self.g},{self.n}) is not a hyperbolic signature")
        for (exps, k), c in self.coeffs.items():
            if len(exps) != self.n:
                raise TableError(f"V({self.g},{self.n}): monomial {exps} has the wrong arity")
            if c < 0:
                raise TableError(f"V({self.g},{self.n}): negative coefficient {c}")
            if sum(exps) + k != 3 * self.g - 3 + self.n:
                raise TableError(f"V({self.g},{self.n}): monomial {exps}|{k} has the wrong degree")
        if self.constant_exact() == {}:
            raise TableError(f"V({self.g},{self.n}) has no positive constant term")

    @property
    def signature(self):
        return (self.g, self.n)

    def constant_exact(self) -> dict:
        """Value at zero lengths as {power of pi^2: rational}."""
        return {k: c for (e, k), c in self.coeffs.items() if not any(e) and c > 0}

    def __call__(self, lengths=None) -> float:
        return eval_volume(self, lengths)

    @property
    def constant(self) -> float:
        return eval_volume(self, [0.0] * self.n)

    def eval_exact(self, lengths) -> dict:
        """Exact value at rational lengths, as {power of pi^2: rational}."""
        _arity(self, lengths)
        out: dict = {}
        ls = [Fraction(x) for x in lengths]
        for (exps, k), c in self.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c * math.prod(x ** (2 * e) for x, e in zip(ls, exps))
        return out

    def as_lines(self) -> list:
        out = []
        for (exps, k), c in sorted(self.coeffs.items()):
            out.append(f"{self.g} {self.n} : [{' '.join(map(str, exps))} | {k}] = {c}")
        return out


def _arity(p, lengths):
    if len(lengths) != p.n:
        raise ValueError(f"V({p.g},{p.n}) takes {p.n} lengths, got {len(lengths)}")


def eval_volume(p: VolumePolynomial, lengths=None) -> float:
    lengths = [0.0] * p.n if lengths is None else list(lengths)
    _arity(p, lengths)
    with mpmath.workdps(MP_DPS):
        pi2 = mpmath.pi ** 2
        ls = [mpmath.mpf(x) ** 2 for x in lengths]
        total = mpmath.mpf(0)
        for (exps, k), c in p.coeffs.items():
            term = mpmath.mpf(c.numerator) / c.denominator * pi2 ** k
            for x, e in zip(ls, exps):
                term *= x ** e
            total += term
        return float(total)


def eval_volume_array(p: VolumePolynomial, pts: np.ndarray) -> np.ndarray:
    """Float evaluation at many points (rows of pts)."""
    out = np.zeros(len(pts))
    for (exps, k), c in p.coeffs.items():
        term = float(c) * math.pi ** (2 * k) * np.ones(len(pts))
        for i, e in enumerate(exps):
            if e:
                term = term * pts[:, i] ** (2 * e)
        out += term
    return out


BUILTINS = {
    (0, 3): VolumePolynomial(0, 3, {((0, 0, 0), 0): Fraction(1)}),
    (1, 1): VolumePolynomial(1, 1, {((1,), 0): Fraction(1, 24), ((0,), 1): Fraction(1, 6)}),
}

_LINE = re.compile(r"^\s*(\d+)\s+(\d+)\s*:\s*\[([\d\s]*)\|\s*(\d+)\s*\]\s*=\s*(\S+)\s*$")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


@dataclass
class VolumeTable:
    entries: dict = field(default_factory=lambda: dict(BUILTINS))
    sources: dict = field(default_factory=dict)

    def __contains__(self, sig) -> bool:
        return tuple(sig) in self.entries

    def get(self, g: int, n: int) -> VolumePolynomial:
        try:
            return self.entries[(g, n)]
        except KeyError:
            raise MissingVolume(f"volume table has no V({g},{n})") from None

    def constant(self, g: int, n: int) -> float:
        return self.get(g, n).constant

    def signatures(self):
        return sorted(self.entries)


def parse_volume_table(text: str, source: str = "<text>") -> VolumeTable:
    """Parse table text; raises TableError on malformed lines or invalid entries."""
    raw: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        m = _LINE.match(body)
        if not m:
            raise TableError(f"{source}:{lineno}: cannot parse {line.strip()!r}")
        g, n, exps, k, value = int(m[1]), int(m[2]), tuple(int(x) for x in m[3].split()), int(m[4]), m[5]
        if not _RATIONAL.match(value):
            raise TableError(f"{source}:{lineno}: coefficient {value!r} is not a rational p/q")
        c = Fraction(value)
        if c < 0:
            raise TableError(f"{source}:{lineno}: negative coefficient {value}")
        mono = raw.setdefault((g, n), {})
        if (exps, k) in mono:
            raise TableError(f"{source}:{lineno}: duplicate monomial {list(exps)}|{k} for V({g},{n})")
        mono[(exps, k)] = c
    table = VolumeTable()
    for sig, coeffs in raw.items():
        try:
            p = VolumePolynomial(sig[0], sig[1], {key: c for key, c in coeffs.items() if c != 0})
        except TableError as exc:
            raise TableError(f"{source}: {exc}") from None
        if sig in BUILTINS:
            if p.coeffs != BUILTINS[sig].coeffs:
                raise TableError(f"{source}: V{sig} conflicts with the built-in polynomial")
            continue
        table.entries[sig] = p
        table.sources[sig] = source
    bad = [r for r in volume_monotone_check(table) if not r["passed"]]
    if bad:
        r = bad[0]
        raise TableError(f"{source}: V{tuple(r['smaller'])} = {r['lhs']:.6g} exceeds V{tuple(r['larger'])} = {r['rhs']:.6g}")
    return table


def load_volume_table(path=None) -> VolumeTable:
    """Built-ins plus the entries of ``path`` (built-ins only when path is None)."""
    if path is None:
        return VolumeTable()
    return parse_volume_table(Path(path).read_text(), str(path))


def shipped_table() -> VolumeTable:
    text = resources.files("tanglefree").joinpath("data/volumes.txt").read_text()
    return parse_volume_table(text, "volumes.txt")


# --- inequalities between volumes -------------------------------------------


def sinh_bound_check(p: VolumePolynomial, lengths) -> dict:
    """l1...ln V(l) <= 2^n prod sinh(l_i/2) V(0); compared directly, so zero lengths are fine."""
    _arity(p, lengths)
    with mpmath.workdps(MP_DPS):
        ls = [mpmath.mpf(x) for x in lengths]
        lhs = mpmath.fprod(ls) * mpmath.mpf(eval_volume(p, lengths))
        rhs = 2 ** p.n * mpmath.fprod(mpmath.sinh(x / 2) for x in ls) * mpmath.mpf(p.constant)
        return {"passed": bool(lhs <= rhs * (1 + mpmath.mpf(10) ** -12)), "lhs": float(lhs), "rhs": float(rhs),
                "slack": float(rhs - lhs), "signature": [p.g, p.n]}


def volume_monotone_check(table: VolumeTable) -> list:
    """V(g, n+2) <= V(g+1, n) for every pair present in the table."""
    out = []
    for g, n in table.signatures():
        if n >= 2 and (g + 1, n - 2) in table:
            lhs, rhs = table.constant(g, n), table.constant(g + 1, n - 2)
            out.append({"passed": lhs <= rhs, "smaller": [g, n], "larger": [g + 1, n - 2], "lhs": lhs, "rhs": rhs})
    return out


def measured_growth_constant(table: VolumeTable) -> dict:
    """Smallest C with V(g,n) <= C V(g,n+1) / (2g-2+n) over the pairs in the table."""
    ratios = {}
    for g, n in table.signatures():
        if (g, n + 1) in table:
            ratios[f"{g},{n}"] = (2 * g - 2 + n) * table.constant(g, n) / table.constant(g, n + 1)
    return {"C": max(ratios.values()) if ratios else None, "ratios": ratios}


def measured_split_constant(table: VolumeTable, n: int) -> dict:
    """Smallest C_n with sum_{g1+g2=g} V(g1,n1+1) V(g2,n2+1) <= C_n V(g,n) / g, per (g, n1)."""
    ratios = {}
    for g, m in table.signatures():
        if m != n or g == 0:
            continue
        for n1 in range(n + 1):
            n2 = n - n1
            total, complete = 0.0, True
            for g1 in range(g + 1):
                g2 = g - g1
                if 2 * g1 - 1 + n1 <= 0 or 2 * g2 - 1 + n2 <= 0:
                    continue
                if (g1, n1 + 1) not in table or (g2, n2 + 1) not in table:
                    complete = False
                    break
                total += table.constant(g1, n1 + 1) * table.constant(g2, n2 + 1)
            if complete:
                ratios[f"g={g},n1={n1}"] = g * total / table.constant(g, n)
    return {"C": max(ratios.values()) if ratios else None, "ratios": ratios}


# --- Mirzakhani integrals over the four embedding types ------------------------


@dataclass(frozen=True)
class MulticurveCase:
    """One topological type of embedded pants or one-holed torus in genus g.

    ``terms`` lists the cut surfaces summed over (one entry per genus split); each
    is a tuple of pieces ((g, n), slots) with slots naming the curve glued to
    each boundary of the piece.
    """

    case: str
    genus: int
    k: int
    terms: tuple
    C_gamma: float = 1.0


def multicurve_cases(g: int, C_gamma: dict | None = None) -> list:
    C_gamma = C_gamma or {}
    pants = ((0, 3), (0, 1, 2))
    cases = [MulticurveCase("i", g, 1, ((((1, 1), (0,)), ((g - 1, 1), (0,))),) if g >= 2 else ())]
    cases.append(MulticurveCase("ii", g, 3, ((pants, ((g - 2, 3), (0, 1, 2))),) if g >= 2 else ()))
    iii = tuple((pants, ((g1, 1), (0,)), ((g - 1 - g1, 2), (1, 2))) for g1 in range(1, g - 1))
    cases.append(MulticurveCase("iii", g, 3, iii))
    iv = tuple(
        (pants, ((g1, 1), (0,)), ((g2, 1), (1,)), ((g - g1 - g2, 1), (2,)))
        for g1 in range(1, g + 1)
        for g2 in range(g1, g + 1)
        if g - g1 - g2 >= g2
    )
    cases.append(MulticurveCase("iv", g, 3, iv))
    return [MulticurveCase(c.case, c.genus, c.k, c.terms, C_gamma.get(c.case, 1.0)) for c in cases]


def _piece_poly(p: VolumePolynomial, slots, k: int) -> dict:
    out: dict = {}
    for (exps, j), c in p.coeffs.items():
        a = [0] * k
        for s, e in zip(slots, exps):
            a[s] += 2 * e
        key = (tuple(a), j)
        out[key] = out.get(key, Fraction(0)) + c
    return out


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for (a, j), c in p.items():
        for (b, i), d in q.items():
            key = (tuple(x + y for x, y in zip(a, b)), i + j)
            out[key] = out.get(key, Fraction(0)) + c * d
    return out


def integrand_polynomial(case: MulticurveCase, table: VolumeTable) -> dict:
    """sum over terms of prod V_piece times l1...lk, as {(exponents of l, power of pi^2): rational}."""
    total: dict = {}
    for term in case.terms:
        poly = {(tuple([1] * case.k), 0): Fraction(1)}
        for (g, n), slots in term:
            poly = _poly_mul(poly, _piece_poly(table.get(g, n), slots, case.k))
        for key, c in poly.items():
            total[key] = total.get(key, Fraction(0)) + c
    return total


def _poly_values(poly: dict, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(len(pts))
    for (a, j), c in poly.items():
        out += float(c) * math.pi ** (2 * j) * np.prod(pts ** np.array(a), axis=1)
    return out


def _poly_simplex_integral(poly: dict, T: float) -> float:
    with mpmath.workdps(MP_DPS):
        total = mpmath.mpf(0)
        Tm = mpmath.mpf(T)
        for (a, j), c in poly.items():
            top = sum(a) + len(a)
            w = dirichlet_monomial(a, 1)
            total += mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(w.numerator) / w.denominator \
                * mpmath.pi ** (2 * j) * Tm ** top
        return float(total)


def kernel_one_holed_torus(T: float) -> float:
    """Closed form of int_0^T 2 (l^2/24 + pi^2/6) e^(l/2) dl."""
    with mpmath.workdps(MP_DPS):
        T = mpmath.mpf(T)
        e = mpmath.exp(T / 2)
        sq = e * (2 * T ** 2 - 8 * T + 16) - 16  # int l^2 e^(l/2)
        return float(2 * (sq / 24 + mpmath.pi ** 2 / 6 * 2 * (e - 1)))


def kernel_simplex_exp(T: float) -> float:
    """Closed form of the integral of exp((l1+l2+l3)/2) over l1+l2+l3 <= T."""
    with mpmath.workdps(MP_DPS):
        T = mpmath.mpf(T)
        return float((mpmath.exp(T / 2) * (2 * T ** 2 - 8 * T + 16) - 16) / 2)


def _kernel_fn(case: str):
    if case == "i":
        return lambda x: 2 * (x[:, 0] ** 2 / 24 + math.pi ** 2 / 6) * np.exp(x[:, 0] / 2), kernel_one_holed_torus
    return lambda x: np.exp(x.sum(axis=1) / 2), kernel_simplex_exp


def _volume_prefactor(case: MulticurveCase, table: VolumeTable) -> float:
    """Constant volumes multiplying the bound kernel.

    Case i keeps V(1,1)(l) inside the kernel, so only the second piece counts;
    the pants factor V(0,3) = 1 drops out everywhere.
    """
    total = 0.0
    for term in case.terms:
        pieces = term[1:] if case.case == "i" else [p for p in term if p[0] != (0, 3)]
        total += math.prod(table.constant(g, n) for (g, n), _ in pieces)
    return total


def expectation(case: MulticurveCase, L: float, table: VolumeTable, F=None, kernel: str = "exact",
                rtol: float = QUAD_RTOL) -> dict:
    """Mirzakhani integral for one case over {sum l_i <= 2L}, by quadrature and in closed form.

    ``kernel="exact"`` integrates the volume polynomials themselves; ``"bound"``
    uses the exponential kernels obtained from the sinh bound on volumes.  F, if
    given, multiplies the integrand (points are rows (l1..lk)); no closed form then.
    The expectation is C_gamma * integral / V(g,0).
    """
    T = 2 * L
    Vg = table.constant(case.genus, 0)
    out = {"case": case.case, "genus": case.genus, "L": L, "kernel": kernel, "C_gamma": case.C_gamma}
    if not case.terms or T <= 0:
        out.update(integral_quadrature=0.0, integral_closed_form=0.0, quadrature_error=0.0, expectation=0.0)
        return out
    if kernel == "exact":
        poly = integrand_polynomial(case, table)
        f = lambda x: _poly_values(poly, x)  # noqa: E731
        closed = _poly_simplex_integral(poly, T)
    elif kernel == "bound":
        fk, ck = _kernel_fn(case.case)
        pre = _volume_prefactor(case, table)
        f = lambda x: pre * fk(x)  # noqa: E731
        closed = pre * ck(T)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    if F is not None:
        g0 = f
        f = lambda x: g0(x) * np.asarray(F(x), dtype=float)  # noqa: E731
        closed = None
    if closed == 0.0:
        q, err = 0.0, 0.0
    else:
        q, err = integrate_simplex(f, corner_simplex(case.k, T), rtol=rtol, atol=1e-300)
    value = closed if closed is not None else q
    out.update(integral_quadrature=q, integral_closed_form=closed, quadrature_error=err,
               expectation=case.C_gamma * value / Vg)
    if closed:
        out["relative_difference"] = abs(q - closed) / abs(closed)
    return out


def tangled_probability_bound(g: int, a: float, table: VolumeTable, mode: str = "table",
                              constants: dict | None = None, C_gamma: dict | None = None) -> dict:
    """Markov bound on P(X is tangled at L = a log g), summed over the four embedding types."""
    L = a * math.log(g)
    out = {"g": g, "a": a, "L": L, "mode": mode}
    if mode == "table":
        cases = {}
        for case in multicurve_cases(g, C_gamma):
            try:
                cases[case.case] = expectation(case, L, table)["expectation"]
            except MissingVolume as exc:
                raise MissingVolume(f"table mode at genus {g}: {exc.args[0]}") from None
        total = sum(cases[c] for c in ("i", "ii", "iii", "iv"))
        out.update(cases=cases, markov_sum=total, bound=min(1.0, total), conditional=False)
        return out
    if mode != "asymptotic":
        raise ValueError(f"unknown mode {mode!r}")
    need = {"C", "C0", "C1"}
    if not constants or not need <= set(constants):
        raise ValueError(f"asymptotic mode needs constants {sorted(need)}")
    if g < 3:
        raise ValueError("asymptotic mode needs g >= 3")
    C, C0, C1 = (float(constants[k]) for k in ("C", "C0", "C1"))
    K1, K3 = kernel_one_holed_torus(2 * L), kernel_simplex_exp(2 * L)
    # volume ratios through V(g-1,1) <= C V(g-1,2)/(2g-3) <= C V(g)/(2g-3), and the split bound
    cases = {
        "i": C / (2 * g - 3) * K1,
        "ii": C / (2 * g - 3) * K3,
        "iii": C1 * C / ((g - 1) * (2 * g - 3)) * K3,
        "iv": (3 * C0 / (2 * g)) * (C / (4 * g / 3 - 2)) * (C0 / g) * K3,
    }
    total = sum(cases[c] for c in ("i", "ii", "iii", "iv"))
    out.update(cases=cases, markov_sum=total, bound=min(1.0, total), conditional=True, constants=dict(constants))
    return out


def mirzakhani_petri_constant() -> float:
    """int_1^2 (e^t + e^-t - 2)/t dt by adaptive quadrature."""
    val, _ = integrate.quad(lambda t: (math.exp(t) + math.exp(-t) - 2) / t, 1.0, 2.0, epsabs=1e-14, epsrel=1e-13)
    return val


def mirzakhani_petri_closed_form() -> float:
    return float(special.expi(2) - special.expi(1) + special.expi(-2) - special.expi(-1) - 2 * math.log(2))


def kernel_agreement(case: str, L: float, rtol: float = QUAD_RTOL) -> dict:
    """Bound kernel of one case (volume constants left out): quadrature against closed form."""
    fk, ck = _kernel_fn(case)
    k = 1 if case == "i" else 3
    q, err = integrate_simplex(fk, corner_simplex(k, 2 * L), rtol=rtol)
    closed = ck(2 * L)
    return {"case": case, "L": L, "quadrature": q, "closed_form": closed, "error_estimate": err,
            "relative_difference": abs(q - closed) / abs(closed)}
