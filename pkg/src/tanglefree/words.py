"""Words in a free group on generators 1..n; ``-k`` stands for the inverse of ``k``.

Words are tuples of nonzero ints.  Text form uses letters a, b, c, ... with
upper case for inverses ("aBAb"), which is how inventories are exported.
"""
from __future__ import annotations

import string

Word = tuple


class ContractibleWordError(ValueError):
    pass


def inverse(w) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def _rank(x: int) -> tuple:
    # order a < A < b < B < ...
    return (abs(x), x < 0)


def _key(w):
    return tuple(_rank(x) for x in w)


def _min_rotation(w):
    n = len(w)
    best = None
    for i in range(n):
        r = w[i:] + w[:i]
        if best is None or _key(r) < _key(best):
            best = r
    return best


def canonical_class(w) -> Word:
    """Representative of the conjugacy class of ``w`` up to inversion.

    Cyclically reduces, then takes the least rotation of ``w`` or its inverse
    in the order a < A < b < B < ...
    """
    w = cyclic_reduce(tuple(w))
    if not w:
        raise ContractibleWordError("word reduces to the identity")
    r1 = _min_rotation(w)
    r2 = _min_rotation(inverse(w))
    return r1 if _key(r1) <= _key(r2) else r2


def root(w) -> tuple[Word, int]:
    """Split a cyclically reduced word as (u, k) with w = u^k and k maximal."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == tuple(w):
            return tuple(w[:d]), n // d
    return tuple(w), 1


def is_proper_power(w) -> bool:
    return root(cyclic_reduce(tuple(w)))[1] > 1


def _alphabet(n: int) -> str:
    if n > 26:
        raise ValueError("text form supports at most 26 generators")
    return string.ascii_lowercase[:n]


def format_word(w) -> str:
    if not w:
        return "1"
    letters = string.ascii_lowercase
    return "".join(letters[x - 1] if x > 0 else letters[-x - 1].upper() for x in w)


def parse_word(s: str) -> Word:
    s = s.strip()
    if s in ("", "1"):
        return ()
    out = []
    for ch in s:
        if ch.islower():
            out.append(ord(ch) - ord("a") + 1)
        elif ch.isupper():
            out.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"bad letter {ch!r} in word {s!r}")
    return tuple(out)


def evaluate(w, gens):
    """Product of generator matrices (numpy 2x2) along ``w``."""
    import numpy as np

    m = np.eye(2)
    for x in w:
        g = gens[abs(x) - 1]
        if x < 0:
            g = np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])
        m = m @ g
    return m
