"""Arrow categories ``C↓C`` and the tower of n-dimensional levels.

Objects of ``C↓C`` are the arrows of ``C`` (written ``J(f)``); arrows are
commuting squares ``(h1;h2): J(f) -> J(g)`` with ``g.h1 == h2.f``.  Ids are
assigned in lexicographic order of the base data, so repeated builds are
identical.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass

from .core import FiniteCategory, Functor, NatTransf, identity_functor, compose_functors
from .errors import CapExceeded

DEFAULT_MAX_OBJECTS = 500
DEFAULT_MAX_ARROWS = 5000


@dataclass(frozen=True)
class Caps:
    max_objects: int = DEFAULT_MAX_OBJECTS
    max_arrows: int = DEFAULT_MAX_ARROWS

    @classmethod
    def from_env(cls):
        raw = os.environ.get("CATSYM_MAX_ARROWS")
        if raw:
            return cls(max_arrows=int(raw))
        return cls()


@dataclass(frozen=True)
class ArrowObject:
    """The triple ``<a,b,f>``."""

    base_dom: object
    base_cod: object
    base_arr: object


@dataclass(frozen=True)
class CommaSquare:
    src: ArrowObject
    dst: ArrowObject
    h1: object
    h2: object


class ArrowCategory:
    """``C↓C`` together with the maps back to the data of ``C``."""

    def __init__(self, base, cat, objects, squares):
        self.base = base
        self.cat = cat
        self.objects = tuple(objects)  # object id -> ArrowObject
        self.squares = tuple(squares)  # arrow id -> CommaSquare
        self._j = {o.base_arr: i for i, o in enumerate(self.objects)}
        self._square_id = {
            (self._j[s.src.base_arr], self._j[s.dst.base_arr], s.h1, s.h2): i
            for i, s in enumerate(self.squares)
        }

    def __repr__(self):
        return f"<ArrowCategory over {self.base!r}: {self.cat!r}>"

    def j(self, f):
        """Encapsulate a base arrow as an object of ``C↓C``."""
        return self._j[f]

    def j_inv(self, x):
        return self.objects[x].base_arr

    def square(self, src, dst, h1, h2):
        """Arrow id of ``(h1;h2): src -> dst``; ``src``/``dst`` are object ids."""
        return self._square_id[src, dst, h1, h2]

    def find_square(self, src, dst, h1, h2):
        return self._square_id.get((src, dst, h1, h2))

    def describe_object(self, x):
        B = self.base
        return f"<{B.obj_name(self.objects[x].base_dom)},{B.obj_name(self.objects[x].base_cod)},{B.arr_name(self.objects[x].base_arr)}>"

    def describe_arrow(self, s):
        B, sq = self.base, self.squares[s]
        return f"({B.arr_name(sq.h1)};{B.arr_name(sq.h2)})"


def build_arrow_category(C, caps: Caps | None = None) -> ArrowCategory:
    """Build ``C↓C``; raises :class:`CapExceeded` instead of truncating."""
    caps = caps or Caps()
    arrows = list(C.arrows)
    if len(arrows) > caps.max_objects:
        raise CapExceeded("objects", len(arrows), caps.max_objects)
    objects = [ArrowObject(C.dom(f), C.cod(f), f) for f in arrows]
    squares = []
    keys = []
    for si, f in enumerate(arrows):
        a, b = C.dom(f), C.cod(f)
        for ti, g in enumerate(arrows):
            c, d = C.dom(g), C.cod(g)
            h2s = C.hom(b, d)
            if not h2s:
                continue
            for h1 in C.hom(a, c):
                gh1 = C.compose(g, h1)
                for h2 in h2s:
                    if C.compose(h2, f) == gh1:
                        if len(squares) >= caps.max_arrows:
                            raise CapExceeded("arrows", len(squares) + 1, caps.max_arrows)
                        squares.append(CommaSquare(objects[si], objects[ti], h1, h2))
                        keys.append((si, ti, h1, h2))

    index = {k: i for i, k in enumerate(keys)}
    out = [[] for _ in objects]
    for i, (si, _, _, _) in enumerate(keys):
        out[si].append(i)
    comp = {}
    for i, (si, ti, h1, h2) in enumerate(keys):
        for k in out[ti]:
            _, ui, k1, k2 = keys[k]
            comp[k, i] = index[si, ui, C.compose(k1, h1), C.compose(k2, h2)]

    obj_names = [f"J_{C.arr_name(f)}" for f in arrows]
    identity = [index[i, i, C.identity(o.base_dom), C.identity(o.base_cod)]
                for i, o in enumerate(objects)]
    ident_set = {s: o for o, s in enumerate(identity)}
    arr_names = []
    for i, (si, ti, _, _) in enumerate(keys):
        if i in ident_set:
            arr_names.append(f"id_{obj_names[si]}")
        else:
            arr_names.append(f"q{i}")
    cat = FiniteCategory(
        obj_names,
        arr_names,
        [k[0] for k in keys],
        [k[1] for k in keys],
        identity,
        comp,
    )
    return ArrowCategory(C, cat, objects, squares)


class LevelTower:
    """Memoized levels ``C_1 = C`` and ``C_{n+1} = C_n ↓ C_n``."""

    def __init__(self, base, caps: Caps | None = None):
        self.base = base
        self.caps = caps or Caps()
        self._levels = [base]
        self._arrow_cats = []  # index n-1 holds C_n ↓ C_n
        self._lock = threading.Lock()

    def level(self, n: int):
        if n < 1:
            raise ValueError("levels start at 1")
        with self._lock:
            while len(self._levels) < n:
                ac = build_arrow_category(self._levels[-1], self.caps)
                self._arrow_cats.append(ac)
                self._levels.append(ac.cat)
            return self._levels[n - 1]

    def arrow_category(self, n: int) -> ArrowCategory:
        """The pair (``C_{n+1}``, ``C_n``) with its back-maps."""
        self.level(n + 1)
        return self._arrow_cats[n - 1]

    @property
    def built(self):
        return len(self._levels)


def level(tower: LevelTower, n: int):
    return tower.level(n)


# -- projections, psi, diagonal, sigma ------------------------------------


def fst_functor(ac: ArrowCategory) -> Functor:
    """``F_st``: ``<a,b,f> -> a`` and ``(h1;h2) -> h1``."""
    return Functor(
        ac.cat,
        ac.base,
        {x: o.base_dom for x, o in enumerate(ac.objects)},
        {s: sq.h1 for s, sq in enumerate(ac.squares)},
        "F_st",
    )


def snd_functor(ac: ArrowCategory) -> Functor:
    return Functor(
        ac.cat,
        ac.base,
        {x: o.base_cod for x, o in enumerate(ac.objects)},
        {s: sq.h2 for s, sq in enumerate(ac.squares)},
        "S_nd",
    )


def psi(ac: ArrowCategory) -> NatTransf:
    """``F_st -> S_nd`` with component ``f`` at ``J(f)``."""
    return NatTransf(fst_functor(ac), snd_functor(ac),
                     {x: o.base_arr for x, o in enumerate(ac.objects)}, "psi")


def j(ac: ArrowCategory, f):
    return ac.j(f)


def j_inv(ac: ArrowCategory, x):
    return ac.j_inv(x)


def diagonal_functor(ac: ArrowCategory) -> Functor:
    """``a -> J(id_a)`` and ``f -> (f;f)``."""
    C = ac.base
    obj_map = {a: ac.j(C.identity(a)) for a in C.objects}
    arr_map = {}
    for f in C.arrows:
        a, b = C.dom(f), C.cod(f)
        arr_map[f] = ac.square(obj_map[a], obj_map[b], f, f)
    return Functor(C, ac.cat, obj_map, arr_map, "Delta")


def sigma(ac: ArrowCategory) -> NatTransf:
    """``Delta.F_st -> Id`` with component ``(id_a; f): J(id_a) -> J(f)``."""
    C = ac.base
    F = compose_functors(diagonal_functor(ac), fst_functor(ac), "Delta.F_st")
    comps = {}
    for x, o in enumerate(ac.objects):
        a = o.base_dom
        comps[x] = ac.square(ac.j(C.identity(a)), x, C.identity(a), o.base_arr)
    return NatTransf(F, identity_functor(ac.cat), comps, "sigma")


def sigma_inv(ac: ArrowCategory) -> NatTransf:
    """``Id -> Delta.S_nd`` with component ``(f; id_b): J(f) -> J(id_b)``."""
    C = ac.base
    G = compose_functors(diagonal_functor(ac), snd_functor(ac), "Delta.S_nd")
    comps = {}
    for x, o in enumerate(ac.objects):
        b = o.base_cod
        comps[x] = ac.square(x, ac.j(C.identity(b)), o.base_arr, C.identity(b))
    return NatTransf(identity_functor(ac.cat), G, comps, "sigma_inv")
