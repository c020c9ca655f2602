"""Exhaustive corpus of candidate composition tables and a brute-force oracle.

Tables have at most two objects and at most four arrows in total (identities
included).  Composites involving an identity are fixed; every other composable
pair ranges over *all* arrow names, so ill-typed and non-associative tables
are part of the corpus.
"""

from functools import lru_cache
from itertools import product

import numpy as np

from catsym.core import RawCategory, validate_category
from catsym.errors import AxiomViolation

MAX_OBJECTS = 2
MAX_ARROWS = 4


def shapes(max_objects=MAX_OBJECTS, max_arrows=MAX_ARROWS):
    """Every (object count, non-identity arrow endpoints) with the size bounds."""
    for k in range(max_objects + 1):
        for m in range(max_arrows - k + 1):
            if k == 0 and m > 0:
                continue
            for ends in product(product(range(k), repeat=2), repeat=m):
                yield k, ends


def _layout(k, ends):
    n = k + len(ends)
    dom = [i for i in range(k)] + [d for d, _ in ends]
    cod = [i for i in range(k)] + [c for _, c in ends]
    free = [(g, f) for g in range(k, n) for f in range(k, n) if dom[g] == cod[f]]
    return n, dom, cod, free


def tables(k, ends):
    """All candidate tables of one shape as an ``(N, n, n)`` array (-1 = undefined)."""
    n, dom, cod, free = _layout(k, ends)
    count = n ** len(free)
    T = np.full((count, n, n), -1, dtype=np.int8)
    for f in range(n):
        T[:, f, dom[f]] = f
        T[:, cod[f], f] = f
    if free:
        vals = np.indices((n,) * len(free)).reshape(len(free), -1).T
        for p, (g, f) in enumerate(free):
            T[:, g, f] = vals[:, p]
    return T


def oracle(k, ends):
    """Boolean acceptance vector computed by direct brute force."""
    n, dom, cod, free = _layout(k, ends)
    T = tables(k, ends)
    dom, cod = np.array(dom), np.array(cod)
    ok = np.ones(len(T), dtype=bool)
    pairs = [(g, f) for g in range(n) for f in range(n) if dom[g] == cod[f]]
    for g, f in pairs:
        h = T[:, g, f].astype(int)
        ok &= (h >= 0) & (dom[h] == dom[f]) & (cod[h] == cod[g])
    for a in range(k):
        for f in range(n):
            if cod[f] == a:
                ok &= T[:, a, f] == f
            if dom[f] == a:
                ok &= T[:, f, a] == f
    rows = np.arange(len(T))
    for h in range(n):
        for g in range(n):
            for f in range(n):
                if dom[h] != cod[g] or dom[g] != cod[f]:
                    continue
                gf = np.where(ok, T[:, g, f], 0).astype(int)
                hg = np.where(ok, T[:, h, g], 0).astype(int)
                left = T[rows, h, gf]
                right = T[rows, hg, f]
                ok &= left == right
    return ok


def raws(k, ends):
    """The same tables, in the same order, as :class:`RawCategory` values."""
    n, dom, cod, free = _layout(k, ends)
    objs = [f"o{i}" for i in range(k)]
    names = [f"id{i}" for i in range(k)] + [f"a{j}" for j in range(len(ends))]
    arrows = [(names[i], objs[dom[i]], objs[cod[i]]) for i in range(n)]
    base = {}
    for f in range(n):
        base[names[f], names[dom[f]]] = names[f]
        base[names[cod[f]], names[f]] = names[f]
    keys = [(names[g], names[f]) for g, f in free]
    identities = dict(zip(objs, names))
    for vals in product(names, repeat=len(free)):
        comp = base.copy()
        comp.update(zip(keys, vals))
        yield RawCategory(objs, arrows, identities, comp)


def accepts(raw):
    try:
        validate_category(raw)
        return True
    except AxiomViolation:
        return False


@lru_cache(maxsize=None)
def valid_categories():
    """Every category of the corpus as a validated FiniteCategory.

    The oracle only preselects; each table is still validated by the library.
    """
    out = []
    for k, ends in shapes():
        keep = oracle(k, ends)
        for ok, raw in zip(keep, raws(k, ends)):
            if ok:
                out.append(validate_category(raw))
    return tuple(out)


def count_squares(C):
    """Commuting squares (f, g, h1, h2) with g.h1 == h2.f, by brute force."""
    n = 0
    arrows = list(C.arrows)
    for f, g, h1, h2 in product(arrows, repeat=4):
        if C.dom(h1) != C.dom(f) or C.cod(h1) != C.dom(g):
            continue
        if C.dom(h2) != C.cod(f) or C.cod(h2) != C.cod(g):
            continue
        if C.compose(g, h1) == C.compose(h2, f):
            n += 1
    return n
