"""Extended-precision reference values, computed with mpmath independently of the package."""
import math

import mpmath

mpmath.mp.dps = 50
mp = mpmath.mp


def figure_eight(l1, l2, l3):
    l1, l2, l3 = (mp.mpf(x) for x in (l1, l2, l3))
    return 2 * mp.acosh(2 * mp.cosh(l1 / 2) * mp.cosh(l3 / 2) + mp.cosh(l2 / 2))


def collar(l):
    return mp.asinh(1 / mp.sinh(mp.mpf(l) / 2))


def half_collar_area(l, w):
    return mp.mpf(l) * mp.sinh(mp.mpf(w))


def equidistant_length(l, w):
    return mp.mpf(l) * mp.cosh(mp.mpf(w))


def loop_bound(g):
    return 2 * mp.acosh(1 / (2 * mp.sin(mp.pi / (12 * g - 6))))


def length_from_trace(t):
    return 2 * mp.acosh(abs(mp.mpf(t)) / 2)


def half_plane_distance(z, w):
    z, w = mp.mpc(z), mp.mpc(w)
    return mp.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))


def petri_constant():
    return mp.quad(lambda t: (mp.e ** t + mp.e ** -t - 2) / t, [1, 2])


def torus_kernel(T):
    return mp.quad(lambda l: 2 * (l ** 2 / 24 + mp.pi ** 2 / 6) * mp.e ** (l / 2), [0, T])


def simplex_exp_kernel(T):
    # substitute s = l1 + l2 + l3: the slice of the simplex at s has area s^2 / 2
    return mp.quad(lambda s: mp.e ** (s / 2) * s ** 2 / 2, [0, T])


def fixed_points(a, b, c, d):
    a, b, c, d = (mp.mpf(x) for x in (a, b, c, d))
    disc = mp.sqrt((d - a) ** 2 + 4 * b * c)
    return sorted([(a - d - disc) / (2 * c), (a - d + disc) / (2 * c)])


def bolza_systole():
    return 2 * mp.acosh(1 + mp.sqrt(2))


def all_short_words(gens, L, max_len):
    """Every reduced word of length <= max_len whose geodesic length is <= L, as {word: length}.

    Plain numpy products over the full reduced-word tree; no pruning.
    """
    import numpy as np

    n = len(gens)
    mats = [np.asarray(g, dtype=float) for g in gens]
    mats += [np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) for m in mats[:n]]
    letters = list(range(1, n + 1)) + [-k for k in range(1, n + 1)]
    lm = np.array(mats)
    cut = 2 * math.cosh(L / 2) * (1 + 1e-12)
    out = {}
    words = np.array(letters, dtype=np.int8)[:, None]
    prods = lm.copy()
    for length in range(1, max_len + 1):
        if length > 1:
            last = words[:, -1]
            new_w, new_m = [], []
            for j, x in enumerate(letters):
                ok = last != -x
                new_w.append(np.concatenate([words[ok], np.full((ok.sum(), 1), x, np.int8)], axis=1))
                new_m.append(prods[ok] @ lm[j])
            words, prods = np.concatenate(new_w), np.concatenate(new_m)
        tr = np.abs(prods[:, 0, 0] + prods[:, 1, 1])
        for i in np.nonzero((tr > 2 + 1e-9) & (tr <= cut))[0].tolist():
            w = tuple(int(v) for v in words[i])
            if w[0] == -w[-1]:
                continue  # not cyclically reduced; a shorter word covers it
            out[w] = 2 * math.acosh(tr[i] / 2)
    return out


def genus2_markov(L):
    """Markov sum at genus 2 with C_gamma = 1: separating curve plus three-curve pants cut.

    V(2,0) is taken as 43 pi^6 / 1080 (the convention with V(1,1) = l^2/24 + pi^2/6).
    """
    T = 2 * mp.mpf(L)
    v11 = lambda l: l ** 2 / 24 + mp.pi ** 2 / 6  # noqa: E731
    sep = mp.quad(lambda l: v11(l) ** 2 * l, [0, T])
    pants = mp.quad(lambda s: s ** 5 / 120, [0, T])  # slices of l1 l2 l3 over the simplex
    return (sep + pants) / (43 * mp.pi ** 6 / 1080)
