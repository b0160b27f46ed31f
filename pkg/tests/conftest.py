import functools
import json
from pathlib import Path

import pytest

from tanglefree.geodesics import enumerate_geodesics
from tanglefree.surfaces import FNCoordinates, build_surface, load_surface

ROOT = Path(__file__).resolve().parent.parent
CORPUS = sorted((ROOT / "corpus").glob("*.json"))


@functools.lru_cache(maxsize=None)
def surface_from_fn(text):
    return build_surface(FNCoordinates.parse(text))


@functools.lru_cache(maxsize=None)
def corpus_surface(name):
    s = load_surface(ROOT / "corpus" / name)
    s.domain  # build once
    return s


@functools.lru_cache(maxsize=None)
def inventory(name, L, max_word=8):
    return enumerate_geodesics(corpus_surface(name), L, max_word=max_word)


@pytest.fixture(scope="session")
def corpus_names():
    return [p.name for p in CORPUS]


@pytest.fixture(scope="session")
def symmetric():
    return corpus_surface("genus2_symmetric.json")


@pytest.fixture(scope="session")
def short_pants():
    return corpus_surface("genus2_short_pants.json")


@pytest.fixture(scope="session")
def mixed():
    return corpus_surface("genus2_mixed.json")


@pytest.fixture(scope="session")
def bolza():
    return corpus_surface("bolza.json")


def corpus_json(name):
    return json.loads((ROOT / "corpus" / name).read_text())


def oracle_equivalence(name, L, k):
    """Compare the inventory's words of length <= k with exhaustive word search.

    Returns (inventory words, oracle words, words of unknown class).  The
    oracle keeps, for each class met by some word, the least canonical word.
    """
    from oracles import all_short_words
    from tanglefree.words import _key, canonical_class

    s = corpus_surface(name)
    inv = inventory(name, L, k)
    dom = s.domain
    best, unknown = {}, []
    for w, ell in all_short_words([g.to_array() for g in s.generators], L, k).items():
        c = canonical_class(w)
        got = inv._classes.classify(dom.to_domain(s.element(c)))
        if got is None:
            unknown.append(c)
            continue
        if got not in best or (len(c), _key(c)) < (len(best[got]), _key(best[got])):
            best[got] = c
    mine = {g.word for g in inv.geodesics if len(g.word) <= k}
    return mine, set(best.values()), unknown
