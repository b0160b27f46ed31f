import math

import numpy as np
import pytest

import oracles as O
from conftest import corpus_surface, inventory
from tanglefree.geodesics import geodesic_from_word, systole
from tanglefree.hyperbolic import normalizer, standard_collar_width
from tanglefree.tangle import (
    PreconditionError,
    _Candidate,
    ball_classify,
    certify_tangle_free,
    check_witness,
    constructive_upper_bound,
    disjoint_collar_check,
    find_witness,
    improved_collar_check,
    intersection_bound_check,
    local_group,
    sample_points,
    verify_candidate,
    witness_to_figure_eight,
)
from tanglefree.words import parse_word


def certify(name, L, **kw):
    return certify_tangle_free(corpus_surface(name), L, inventory(name, 2 * L, 8), **kw)


def on_axis(geo, t=0.0):
    return normalizer(geo.axis).inverse()(math.exp(t) * 1j)


def test_short_pants_witness(short_pants):
    cert = certify("genus2_short_pants.json", 1.05, consequences=False)
    w = cert.witness
    assert cert.result == "witness" and not cert.tangle_free
    assert w.kind == "pants"
    assert w.total == pytest.approx(2.1, abs=1e-9)
    assert sorted(round(g.length, 9) for g in w.boundary) == [0.7, 0.7, 0.7]
    assert check_witness(short_pants, w, 1.05)
    assert w.as_dict()["total_boundary_length"] == pytest.approx(2.1)


def test_short_pants_no_witness_below(short_pants):
    assert find_witness(short_pants, 1.0, inventory("genus2_short_pants.json", 2.0, 8)) is None


def test_symmetric_sweep_monotone():
    results = {L: certify("genus2_symmetric.json", L, consequences=False) for L in (0.9, 1.5, 2.0, 2.9, 3.1, 3.5)}
    free = [results[L].tangle_free for L in sorted(results)]
    assert free == sorted(free, reverse=True)
    assert results[2.9].tangle_free and not results[3.1].tangle_free
    assert results[3.1].witness.total == pytest.approx(6.0, abs=1e-9)
    assert results[2.0].depth_limited is False and results[2.0].exhaustive is False


@pytest.mark.parametrize("name", ["genus2_symmetric.json", "genus2_mixed.json", "bolza.json", "genus2_thin_cuff.json"])
def test_half_systole_always_free(name):
    L = systole(corpus_surface(name)).length / 2
    cert = certify(name, L, n_points=10)
    assert cert.tangle_free and cert.consistent()


def test_certificate_consequences():
    cert = certify("genus2_symmetric.json", 2.9, n_points=30, seed=1)
    assert cert.tangle_free
    assert cert.consistent()
    suite = cert.consequences
    assert suite["short_geodesics_simple"]["checked"] == 3
    assert suite["intersection_bounds"]["checked"] > 0
    assert suite["balls"]["checked"] >= 30
    d = cert.as_dict()
    assert d["result"] == "certified-tangle-free-at-depth"
    assert d["search"]["cutoff"] == pytest.approx(5.8)


def test_depth_stamp(symmetric):
    cert = certify_tangle_free(symmetric, 2.0, inventory("genus2_symmetric.json", 3.0, 8), consequences=False)
    assert cert.depth_limited


def test_bridge_pants(symmetric):
    w = certify("genus2_symmetric.json", 3.1, consequences=False).witness
    f = witness_to_figure_eight(symmetric, w)
    assert f.self_intersections == 1 and not f.simple
    assert f.length == pytest.approx(float(O.figure_eight(2, 2, 2)), abs=1e-9)
    assert f.length <= 2 * 3.1 + 2 * math.pi


def test_bridge_short_pants(short_pants):
    w = certify("genus2_short_pants.json", 1.05, consequences=False).witness
    f = witness_to_figure_eight(short_pants, w)
    assert f.self_intersections == 1
    assert f.length <= 2 * 1.05 + 2 * math.pi


def test_bridge_torus(symmetric):
    dom = symmetric.domain
    a = dom.to_domain(symmetric.element((1,)))
    b = dom.to_domain(symmetric.element(parse_word("aC")))
    w = verify_candidate(symmetric, _Candidate(0.0, "one-holed-torus", (a, b), {"family": "test"}))
    assert w is not None and w.kind == "one-holed-torus"
    ell = w.total
    f = witness_to_figure_eight(symmetric, w)
    assert f.self_intersections == 1
    assert f.length <= ell * math.sqrt(1 + 4 * math.pi ** 2 / ell ** 2) + 1e-9


def test_invalid_candidate_rejected(symmetric):
    # a and aB are not the cuffs of an embedded pants: aB is a figure-eight
    dom = symmetric.domain
    a = dom.to_domain(symmetric.element((1,)))
    b = dom.to_domain(symmetric.element(parse_word("Ab")))
    assert verify_candidate(symmetric, _Candidate(0.0, "pants", (a, b), {})) is None


def test_collar_embeds_on_certified(symmetric):
    for g in inventory("genus2_symmetric.json", 5.8, 8).primitive():
        if g.length < 2.9:
            rep = improved_collar_check(symmetric, g, 2.9)
            assert rep.embedded and rep.obstruction is None and rep.volume_ok


def test_oversized_collar_obstructed(short_pants):
    cuff = systole(short_pants)
    L = 1.05
    width = standard_collar_width(cuff.length) + (L - cuff.length) / 2 + 0.7
    rep = improved_collar_check(short_pants, cuff, L, width=width)
    assert rep.embedded is False
    assert rep.obstruction is not None
    assert rep.min_distance < 2 * width


def test_collar_precondition(symmetric):
    with pytest.raises(PreconditionError):
        improved_collar_check(symmetric, systole(symmetric), 1.5)


def test_intersection_bound(symmetric):
    cert = certify("genus2_symmetric.json", 2.9, consequences=False)
    a, b = (geodesic_from_word(symmetric, w) for w in [(1,), parse_word("aC")])
    rep = intersection_bound_check(a, b, 2.9, symmetric, cert)
    assert rep["passed"] and rep["intersections"] == 1
    assert rep["bound"] == math.floor(rep["ratio"])
    tangled = certify("genus2_symmetric.json", 3.1, consequences=False)
    assert intersection_bound_check(a, b, 3.1, symmetric, tangled)["skipped"]


def test_disjoint_short_pair():
    s = corpus_surface("genus2_thin_cuff.json")
    cert = certify("genus2_thin_cuff.json", 2.5, n_points=5)
    assert cert.tangle_free and cert.consistent()
    prims = [g for g in inventory("genus2_thin_cuff.json", 5.0, 8).primitive() if g.length < 2.5]
    g1, g2 = prims[0], prims[1]
    assert g1.length + g2.length < 2.5
    rep = intersection_bound_check(g1, g2, 2.5, s, cert)
    assert rep["expect_disjoint"] and rep["intersections"] == 0
    rep = disjoint_collar_check(g1, g2, 2.5, s, cert)
    assert rep["passed"] and rep["distance"] > rep["required"]
    if max(g1.length, g2.length) < 1.25:
        assert rep["collars_disjoint"]
    else:
        assert "collars_disjoint" not in rep
    with pytest.raises(PreconditionError):
        disjoint_collar_check(g1, g1, 2.5, s, cert)


def test_local_group_trivial(symmetric):
    from tanglefree.geodesics import injectivity_radius_at

    L = 2.9
    pts = [z for z in sample_points(symmetric, 30, seed=5) if injectivity_radius_at(z, symmetric) >= L / 4]
    assert pts
    for z in pts:
        assert local_group(z, symmetric, L).kind == "trivial"


def test_local_group_cyclic_on_thin_cuff():
    s = corpus_surface("genus2_thin_cuff.json")
    cuff = systole(s)
    assert cuff.length == pytest.approx(0.3, abs=1e-9)
    lg = local_group(on_axis(cuff, 0.2), s, 2.5)
    assert lg.kind == "cyclic"
    assert abs(abs(lg.generator.trace) - abs(cuff.element.trace)) < 1e-9
    assert sorted(abs(p) for p in lg.powers)[:2] == [1, 1]
    assert all(p is not None for p in lg.powers)
    assert ball_classify(on_axis(cuff), s, 2.5) == "cylinder-like"


def test_ball_sweep_no_violation(symmetric):
    kinds = [ball_classify(z, symmetric, 2.9) for z in sample_points(symmetric, 100, seed=7)]
    assert "VIOLATION" not in kinds
    assert "plane-like" in kinds


@pytest.mark.parametrize("name", ["genus2_symmetric.json", "genus2_mixed.json", "genus2_thin_cuff.json", "genus3_generic.json"])
def test_constructive_bound(name):
    s = corpus_surface(name)
    rep = constructive_upper_bound(s)
    assert rep.area_ok and rep.total_ok
    assert check_witness(s, rep.witness)
    assert rep.C_measured == pytest.approx(rep.witness.total / 2 - 2 * math.log(s.genus))
    f = witness_to_figure_eight(s, rep.witness)
    assert f.self_intersections == 1
    assert np.isfinite(rep.as_dict()["C_measured"])
