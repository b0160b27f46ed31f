import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from tanglefree.hyperbolic import (
    AxisGeodesic,
    DomainError,
    MobiusMap,
    PlanePoint,
    axis,
    bavard_bound,
    classify,
    compose,
    dist,
    fermi_boundary_length,
    fermi_cylinder_volume,
    figure_eight_length,
    fixed_points,
    length_from_trace,
    standard_collar_width,
    translation_length,
)

REL = 1e-9


def close(x, ref, rel=REL):
    return abs(x - float(ref)) <= rel * max(1.0, abs(float(ref)))


reals = st.floats(-3, 3, allow_nan=False)
lengths = st.floats(0.05, 8, allow_nan=False)


@st.composite
def maps(draw):
    # product of a translation, a rotation and a shear: always unimodular
    t, th, s = draw(reals), draw(st.floats(0, 2 * math.pi)), draw(reals)
    e = math.exp(t / 2)
    A = np.array([[e, 0], [0, 1 / e]])
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    S = np.array([[1, s], [0, 1]])
    return MobiusMap.from_array(A @ R @ S)


@st.composite
def points(draw):
    return PlanePoint(draw(reals), draw(st.floats(0.1, 5)))


def test_identity_and_inverse_composition():
    m = MobiusMap(2.0, 1.0, 1.0, 1.0)
    assert compose(MobiusMap.identity(), m) == m
    assert compose(m, m.inverse()) == MobiusMap.identity()


def test_projective_equality():
    assert MobiusMap(2.0, 1.0, 1.0, 1.0) == MobiusMap(-2.0, -1.0, -1.0, -1.0)


def test_parabolic_product_trace_matches_extended_precision():
    p, q = MobiusMap(1.0, 0.37, 0.0, 1.0), MobiusMap(1.0, 0.0, -2.9, 1.0)
    import mpmath

    M = mpmath.matrix([[1, "0.37"], [0, 1]]) * mpmath.matrix([[1, 0], ["-2.9", 1]])
    assert close(abs(compose(p, q).trace), abs(M[0, 0] + M[1, 1]))


def test_rejects_nonpositive_determinant():
    with pytest.raises(DomainError):
        MobiusMap(1.0, 0.0, 0.0, -1.0)


def test_distance_values():
    assert dist(PlanePoint(0, 1), PlanePoint(0, 1)) == 0
    assert close(dist(PlanePoint(0, 1), PlanePoint(0, math.e)), 1.0)
    assert close(dist(PlanePoint(0, 1), PlanePoint(1, 2)), O.half_plane_distance(1j, 1 + 2j))


def test_classification():
    assert classify(MobiusMap.identity()) == "identity"
    assert classify(MobiusMap(2.0, 1.0, 1.0, 1.0)) == "hyperbolic"
    assert classify(MobiusMap(1.0, 1.0, 0.0, 1.0)) == "parabolic"
    assert classify(MobiusMap(0.0, -1.0, 1.0, 0.0)) == "elliptic"


def test_translation_length_values():
    assert close(length_from_trace(3), O.length_from_trace(3))
    assert close(length_from_trace(2 + 2 * math.sqrt(2)), O.bolza_systole())
    with pytest.raises(DomainError):
        translation_length(MobiusMap(1.0, 1.0, 0.0, 1.0))


def test_fixed_points_match_quadratic_roots():
    a, b, c, d = 2.0, 1.0, 1.0, 1.0
    ref = O.fixed_points(a, b, c, d)
    got = sorted(fixed_points(MobiusMap(a, b, c, d)))
    assert all(close(x, r) for x, r in zip(got, ref))
    assert axis(MobiusMap(3.0, 0.0, 0.0, 1 / 3)) == AxisGeodesic(math.inf, 0.0) or \
        set(fixed_points(MobiusMap(3.0, 0.0, 0.0, 1 / 3))) == {0.0, math.inf}


def test_figure_eight_values():
    assert close(figure_eight_length(2, 2, 2), O.figure_eight(2, 2, 2))
    assert figure_eight_length(2, 2, 2) == pytest.approx(5.0563710812901, abs=1e-12)


@given(lengths, lengths, lengths)
def test_figure_eight_bounds(a, b, c):
    f = figure_eight_length(a, b, c)
    assert f >= 4 * math.asinh(1) - 1e-12
    # total boundary 2L gives a figure-eight shorter than 2L + 2 log 6
    assert f <= a + b + c + 2 * math.log(6) + 1e-9


def test_collar_values():
    assert close(standard_collar_width(2), O.collar(2))
    assert standard_collar_width(2) == pytest.approx(0.77193683290530, abs=1e-13)
    assert close(standard_collar_width(2 * math.asinh(1)), math.asinh(1))
    ws = [standard_collar_width(10.0 ** -k) for k in range(1, 8)]
    assert all(x < y for x, y in zip(ws, ws[1:]))


def test_fermi_values():
    assert fermi_cylinder_volume(1.7, 0) == 0
    assert close(fermi_cylinder_volume(1, math.asinh(2 * math.pi)), 2 * math.pi)
    assert close(fermi_cylinder_volume(3, 2), O.half_collar_area(3, 2))
    assert fermi_boundary_length(1.3, 0) == 1.3
    assert close(fermi_boundary_length(1, 1), O.equidistant_length(1, 1))


@given(lengths, st.floats(0, 6))
def test_fermi_identity(l, w):
    assert fermi_boundary_length(l, w) ** 2 - fermi_cylinder_volume(l, w) ** 2 == pytest.approx(l * l, rel=1e-9)


@given(st.floats(0.05, 50))
def test_torus_length_bound(l):
    # a boundary of length l <= 2L has l sqrt(1 + 4 pi^2 / l^2) <= 2L + 2 pi
    assert l * math.sqrt(1 + 4 * math.pi ** 2 / l ** 2) <= l + 2 * math.pi + 1e-12


def test_bavard_values():
    assert close(bavard_bound(2), O.loop_bound(2))
    assert bavard_bound(10) > bavard_bound(2)
    gaps = [bavard_bound(g) - 2 * math.log(g) for g in (2, 10, 100, 10 ** 4, 10 ** 6)]
    refs = [float(O.loop_bound(g)) - 2 * math.log(g) for g in (2, 10, 100, 10 ** 4, 10 ** 6)]
    assert all(close(x, r) for x, r in zip(gaps, refs))
    assert max(gaps) < 5


@given(maps(), maps(), maps())
def test_composition_associative(a, b, c):
    assert compose(compose(a, b), c).isclose(compose(a, compose(b, c)), 1e-9)


@given(maps(), points(), points())
@settings(max_examples=50)
def test_distance_invariant(m, z, w):
    assert dist(m(z), m(w)) == pytest.approx(dist(z, w), rel=1e-7, abs=1e-9)


@given(maps(), maps())
def test_trace_conjugation_invariant(m, g):
    c = compose(compose(g, m), g.inverse())
    assert abs(c.trace) == pytest.approx(abs(m.trace), rel=1e-9, abs=1e-9)


@given(lengths, reals, st.floats(0.2, 4))
def test_translation_along_axis(t, p, width):
    ax = AxisGeodesic(p, p + width)
    m = MobiusMap.translation_along(ax, t)
    assert translation_length(m) == pytest.approx(t, rel=1e-7)
    q1, q2 = fixed_points(m)
    assert {round(q1, 6), round(q2, 6)} == {round(p, 6), round(p + width, 6)}
