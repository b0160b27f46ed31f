import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import corpus_surface
from tanglefree.domain import orbit_points, word_of
from tanglefree.words import evaluate

NAMES = ["bolza.json", "genus2_symmetric.json", "genus2_mixed.json", "genus2_thin_cuff.json", "genus3_generic.json"]


@pytest.mark.parametrize("name", NAMES)
def test_area_and_pairing(name):
    s = corpus_surface(name)
    dom = s.domain
    assert dom.area == pytest.approx(4 * math.pi * (s.genus - 1), rel=1e-9)
    assert len(dom.faces) % 2 == 0
    for i, f in enumerate(dom.faces):
        partner = dom.faces[f.partner]
        assert partner.partner == i
        assert np.allclose(partner.element @ f.element, np.eye(2), atol=1e-8) or np.allclose(
            partner.element @ f.element, -np.eye(2), atol=1e-8
        )


@pytest.mark.parametrize("name", NAMES)
def test_face_words_match_elements(name):
    s = corpus_surface(name)
    dom = s.domain
    for f in dom.faces:
        m = dom.to_domain(s.element(f.word))
        assert min(np.abs(m - f.element).max(), np.abs(m + f.element).max()) < 1e-8


def test_centre_inside(symmetric):
    dom = symmetric.domain
    assert dom.contains(np.array([1.0, 0.0, 0.0]))


@given(st.floats(-3, 3), st.floats(0.05, 5))
@settings(max_examples=40, deadline=None)
def test_reduce_point(x, y):
    dom = corpus_surface("genus2_mixed.json").domain
    p = dom.point_to_domain(complex(x, y))
    q, h = dom.reduce_point(p)
    assert dom.contains(q, tol=1e-9)
    assert abs(abs(np.linalg.det(h)) - 1) < 1e-8


def test_orbit_matches_word_products(mixed):
    # every element of word length <= 4 inside the ball shows up in the orbit search
    dom = mixed.domain
    r = 5.0
    orb = dom.orbit(r)
    inside = orb.within(r)
    gens = [g.to_array() for g in dom.gens]
    letters = [1, -1, 2, -2, 3, -3, 4, -4]
    words = [()]
    for _ in range(4):
        words = words + [w + (l,) for w in words if len(w) == _ for l in letters if not w or w[-1] != -l]
    found = 0
    for w in words:
        m = evaluate(w, gens)
        if orbit_points(m[None])[0, 0] <= math.cosh(r) - 1e-9:
            k = orb.find(m)
            assert k is not None and k in set(inside.tolist())
            found += 1
    assert found > 10


def test_word_of_round_trip(mixed):
    dom = mixed.domain
    for w in [(1, 2), (3, -1, -4), (2, 2, -3)]:
        m = dom.to_domain(mixed.element(w))
        back = word_of(dom, m)
        m2 = dom.to_domain(mixed.element(back))
        assert min(np.abs(m - m2).max(), np.abs(m + m2).max()) < 1e-8
