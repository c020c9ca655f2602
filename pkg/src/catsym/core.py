"""Finite categories, functors, natural transformations and isomorphism search.

Every algorithm here is written against a small duck-typed interface
(``objects``, ``arrows``, ``dom``, ``cod``, ``identity``, ``compose``,
``hom``, ``out_arrows``, ``obj_name``, ``arr_name``).  ``FiniteCategory``
implements it with integer ids and a dense composition table; the concrete
set-function category in :mod:`catsym.finset` implements it lazily.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Protocol, Sequence

from .errors import (
    AssociativityViolation,
    IdentityLawViolation,
    MissingComposite,
    NotComposable,
    TypeMismatch,
    UnknownName,
)


class Category(Protocol):
    objects: Sequence
    arrows: Sequence

    def dom(self, f): ...
    def cod(self, f): ...
    def identity(self, a): ...
    def compose(self, g, f): ...
    def hom(self, a, b) -> Sequence: ...
    def out_arrows(self, a) -> Sequence: ...
    def obj_name(self, a) -> str: ...
    def arr_name(self, f) -> str: ...


@dataclass(frozen=True)
class Report:
    """Outcome of a law check: ``ok`` plus the first failing law and witness."""

    ok: bool
    law: str | None = None
    witness: tuple = ()
    detail: str = ""
    data: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.ok

    @property
    def verdict(self):
        return "PASS" if self.ok else "FAIL"


PASS = Report(True)


def fail(law, *witness, detail="", **data):
    return Report(False, law, tuple(witness), detail, data)


# -- validated finite categories ---------------------------------------------


@dataclass
class RawCategory:
    """An unvalidated description; every reference is by name."""

    objects: list
    arrows: list  # (name, dom, cod)
    identities: dict  # object -> arrow name
    compose: dict  # (g, f) -> h, meaning g . f = h


class FiniteCategory:
    """Immutable finite category with ids ``0..n-1`` for objects and arrows.

    The constructor trusts its input; use :func:`validate_category` for
    descriptions that have not been checked.
    """

    def __init__(self, obj_names, arr_names, dom, cod, identity, comp):
        self.obj_names = tuple(obj_names)
        self.arr_names = tuple(arr_names)
        self._dom = tuple(dom)
        self._cod = tuple(cod)
        self._identity = tuple(identity)
        self._comp = dict(comp)
        self.objects = range(len(self.obj_names))
        self.arrows = range(len(self.arr_names))
        out = [[] for _ in self.objects]
        homs = defaultdict(list)
        for f in self.arrows:
            out[self._dom[f]].append(f)
            homs[self._dom[f], self._cod[f]].append(f)
        self._out = tuple(tuple(x) for x in out)
        self._hom = {k: tuple(v) for k, v in homs.items()}
        self._obj_index = {n: i for i, n in enumerate(self.obj_names)}
        self._arr_index = {n: i for i, n in enumerate(self.arr_names)}

    def __repr__(self):
        return f"<FiniteCategory: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (
            self.obj_names == other.obj_names
            and self.arr_names == other.arr_names
            and self._dom == other._dom
            and self._cod == other._cod
            and self._identity == other._identity
            and self._comp == other._comp
        )

    __hash__ = object.__hash__

    def dom(self, f):
        return self._dom[f]

    def cod(self, f):
        return self._cod[f]

    def identity(self, a):
        return self._identity[a]

    def is_identity(self, f):
        return self._identity[self._dom[f]] == f

    def compose(self, g, f):
        try:
            return self._comp[g, f]
        except KeyError:
            raise NotComposable(self.arr_names[g], self.arr_names[f]) from None

    def hom(self, a, b):
        return self._hom.get((a, b), ())

    def out_arrows(self, a):
        return self._out[a]

    def obj_name(self, a):
        return self.obj_names[a]

    def arr_name(self, f):
        return self.arr_names[f]

    def obj(self, name):
        try:
            return self._obj_index[name]
        except KeyError:
            raise UnknownName(name) from None

    def arr(self, name):
        try:
            return self._arr_index[name]
        except KeyError:
            raise UnknownName(name) from None

    def composition_table(self):
        return dict(self._comp)

    def to_raw(self):
        names = self.arr_names
        return RawCategory(
            objects=list(self.obj_names),
            arrows=[(names[f], self.obj_names[self._dom[f]], self.obj_names[self._cod[f]])
                    for f in self.arrows],
            identities={self.obj_names[a]: names[self._identity[a]] for a in self.objects},
            compose={(names[g], names[f]): names[h] for (g, f), h in self._comp.items()},
        )


def validate_category(raw: RawCategory) -> FiniteCategory:
    """Check every axiom of ``raw`` exhaustively and build the category.

    Raises the first violation found, in this order: references and identity
    typing, identity laws, closure, typing of composites, stray entries for
    non-composable pairs, associativity.
    """
    obj_index = {name: i for i, name in enumerate(raw.objects)}
    if len(obj_index) != len(raw.objects):
        raise TypeMismatch("an object is listed twice")
    names = [a[0] for a in raw.arrows]
    arr_index = {name: i for i, name in enumerate(names)}
    if len(arr_index) != len(names):
        raise TypeMismatch("an arrow is listed twice")
    for o in raw.objects:
        if o not in raw.identities:
            raise TypeMismatch(f"object {o!r} has no identity")
    try:
        dom = [obj_index[a[1]] for a in raw.arrows]
        cod = [obj_index[a[2]] for a in raw.arrows]
        identity = [arr_index[raw.identities[o]] for o in raw.objects]
        comp = {(arr_index[g], arr_index[f]): arr_index[h]
                for (g, f), h in raw.compose.items()}
    except KeyError as exc:
        raise UnknownName(exc.args[0]) from None
    for oname in raw.identities:
        if oname not in obj_index:
            raise UnknownName(oname)
    for a, i in enumerate(identity):
        if dom[i] != a or cod[i] != a:
            raise TypeMismatch(f"identity {names[i]} is not an endo-arrow of {raw.objects[a]}")
    ids = set(identity)
    if len(ids) != len(identity):
        raise TypeMismatch("one arrow is the identity of two objects")

    nobj, narr = len(obj_index), len(names)
    get = comp.get
    for f in range(narr):
        right = get((f, identity[dom[f]]))
        if right != f:
            if right is None:
                raise MissingComposite(names[f], names[identity[dom[f]]])
            raise IdentityLawViolation(names[f], "right")
        left = get((identity[cod[f]], f))
        if left != f:
            if left is None:
                raise MissingComposite(names[identity[cod[f]]], names[f])
            raise IdentityLawViolation(names[f], "left")

    out = [[] for _ in range(nobj)]
    for f in range(narr):
        out[dom[f]].append(f)
    pairs = [(g, f) for f in range(narr) for g in out[cod[f]]]
    for g, f in pairs:
        if (g, f) not in comp:
            raise MissingComposite(names[g], names[f])
    for g, f in pairs:
        h = comp[g, f]
        if dom[h] != dom[f] or cod[h] != cod[g]:
            raise TypeMismatch(f"{names[g]} . {names[f]} = {names[h]} has the wrong type")
    if len(pairs) != len(comp):
        g, f = next((g, f) for g, f in comp if dom[g] != cod[f])
        raise TypeMismatch(f"table entry for non-composable pair {names[g]} . {names[f]}")

    # triples containing an identity are associative once the identity laws hold
    plain = [[g for g in out[a] if g not in ids] for a in range(nobj)]
    for f in range(narr):
        if f in ids:
            continue
        for g in plain[cod[f]]:
            gf = comp[g, f]
            for h in plain[cod[g]]:
                if comp[h, gf] != comp[comp[h, g], f]:
                    raise AssociativityViolation(names[h], names[g], names[f])

    return FiniteCategory(raw.objects, names, dom, cod, identity, comp)


def compose(C, g, f):
    return C.compose(g, f)


def composable_pairs(C) -> Iterator[tuple]:
    """Yield every ``(g, f)`` with ``dom(g) == cod(f)``, ordered by ``f``."""
    for f in C.arrows:
        for g in C.out_arrows(C.cod(f)):
            yield g, f


def materialize(C, validate=True) -> FiniteCategory:
    """Copy any category-like object into a :class:`FiniteCategory`."""
    objs = list(C.objects)
    arrs = list(C.arrows)
    oi = {a: i for i, a in enumerate(objs)}
    ai = {f: i for i, f in enumerate(arrs)}
    comp = {(ai[g], ai[f]): ai[C.compose(g, f)] for g, f in composable_pairs(C)}
    args = (
        [C.obj_name(a) for a in objs],
        [C.arr_name(f) for f in arrs],
        [oi[C.dom(f)] for f in arrs],
        [oi[C.cod(f)] for f in arrs],
        [ai[C.identity(a)] for a in objs],
        comp,
    )
    cat = FiniteCategory(*args)
    if validate:
        return validate_category(cat.to_raw())
    return cat


# -- isomorphisms -------------------------------------------------------------


def inverse(C, u):
    """The two-sided inverse of ``u``, or None."""
    a, b = C.dom(u), C.cod(u)
    ida, idb = C.identity(a), C.identity(b)
    for v in C.hom(b, a):
        if C.compose(v, u) == ida and C.compose(u, v) == idb:
            return v
    return None


def is_iso(C, u):
    return inverse(C, u) is not None


def find_isomorphisms(C, a, b) -> list:
    """All isomorphisms ``a -> b`` in hom-set order."""
    return [u for u in C.hom(a, b) if inverse(C, u) is not None]


def isomorphic(C, a, b):
    return bool(find_isomorphisms(C, a, b))


def equal_up_to_iso(C, h, k):
    """Lowest pair ``(is1, is2)`` of isos with ``k . is1 == is2 . h``, or None."""
    isos1 = find_isomorphisms(C, C.dom(h), C.dom(k))
    if not isos1:
        return None
    isos2 = find_isomorphisms(C, C.cod(h), C.cod(k))
    for is1 in isos1:
        lhs = C.compose(k, is1)
        for is2 in isos2:
            if lhs == C.compose(is2, h):
                return is1, is2
    return None


def full_subcategory(C, objs) -> FiniteCategory:
    objs = list(objs)
    keep = set(objs)
    oi = {a: i for i, a in enumerate(objs)}
    arrs = [f for f in C.arrows if C.dom(f) in keep and C.cod(f) in keep]
    ai = {f: i for i, f in enumerate(arrs)}
    comp = {}
    for f in arrs:
        for g in C.out_arrows(C.cod(f)):
            if g in ai:
                comp[ai[g], ai[f]] = ai[C.compose(g, f)]
    return FiniteCategory(
        [C.obj_name(a) for a in objs],
        [C.arr_name(f) for f in arrs],
        [oi[C.dom(f)] for f in arrs],
        [oi[C.cod(f)] for f in arrs],
        [ai[C.identity(a)] for a in objs],
        comp,
    )


def skeleton(C) -> FiniteCategory:
    """Full subcategory on the first object of every isomorphism class."""
    reps = []
    for a in C.objects:
        if not any(isomorphic(C, r, a) for r in reps):
            reps.append(a)
    return full_subcategory(C, reps)


# -- functors and natural transformations ------------------------------------


class Functor:
    """A functor given by explicit object and arrow maps over ``source``."""

    def __init__(self, source, target, obj_map, arr_map, name=""):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.arr_map = dict(arr_map)
        self.name = name

    def __repr__(self):
        return f"<Functor {self.name or '?'}>"

    def ob(self, a):
        return self.obj_map[a]

    def ar(self, f):
        return self.arr_map[f]

    def same_maps(self, other):
        return self.obj_map == other.obj_map and self.arr_map == other.arr_map


def identity_functor(C, name="Id"):
    return Functor(C, C, {a: a for a in C.objects}, {f: f for f in C.arrows}, name)


def compose_functors(G, F, name=None):
    """``G . F``: apply ``F`` first."""
    return Functor(
        F.source,
        G.target,
        {a: G.obj_map[F.obj_map[a]] for a in F.source.objects},
        {f: G.arr_map[F.arr_map[f]] for f in F.source.arrows},
        name or f"{G.name}{F.name}",
    )


def check_functor(F: Functor) -> Report:
    """Totality, typing, identity preservation, then composition, in that order."""
    S, T = F.source, F.target
    for a in S.objects:
        if a not in F.obj_map:
            return fail("totality", S.obj_name(a), detail="object not mapped")
    for f in S.arrows:
        if f not in F.arr_map:
            return fail("totality", S.arr_name(f), detail="arrow not mapped")
    for f in S.arrows:
        Ff = F.arr_map[f]
        if T.dom(Ff) != F.obj_map[S.dom(f)] or T.cod(Ff) != F.obj_map[S.cod(f)]:
            return fail("typing", S.arr_name(f), T.arr_name(Ff))
    for a in S.objects:
        if F.arr_map[S.identity(a)] != T.identity(F.obj_map[a]):
            return fail("identity", S.obj_name(a))
    for g, f in composable_pairs(S):
        lhs = F.arr_map[S.compose(g, f)]
        rhs = T.compose(F.arr_map[g], F.arr_map[f])
        if lhs != rhs:
            return fail("composition", S.arr_name(g), S.arr_name(f),
                        detail=f"{T.arr_name(lhs)} != {T.arr_name(rhs)}")
    return PASS


class NatTransf:
    """Components ``t[X]: F(X) -> G(X)`` for every source object ``X``."""

    def __init__(self, F, G, components, name=""):
        self.F = F
        self.G = G
        self.components = dict(components)
        self.name = name

    def __repr__(self):
        return f"<NatTransf {self.name or '?'}>"

    def __getitem__(self, x):
        return self.components[x]


def identity_transformation(F, name="1"):
    T = F.target
    return NatTransf(F, F, {a: T.identity(F.obj_map[a]) for a in F.source.objects}, name)


def vertical(s: NatTransf, t: NatTransf, name=None) -> NatTransf:
    """``s . t`` with components ``s[X] . t[X]``."""
    T = t.F.target
    comps = {x: T.compose(s.components[x], t.components[x]) for x in t.F.source.objects}
    return NatTransf(t.F, s.G, comps, name or f"{s.name}*{t.name}")


def check_naturality(t: NatTransf) -> Report:
    """Typing of every component, then the naturality square of every arrow."""
    F, G = t.F, t.G
    S, T = F.source, F.target
    for x in S.objects:
        if x not in t.components:
            return fail("totality", S.obj_name(x))
        c = t.components[x]
        if T.dom(c) != F.obj_map[x] or T.cod(c) != G.obj_map[x]:
            return fail("typing", S.obj_name(x), T.arr_name(c))
    for f in S.arrows:
        x, y = S.dom(f), S.cod(f)
        lhs = T.compose(G.arr_map[f], t.components[x])
        rhs = T.compose(t.components[y], F.arr_map[f])
        if lhs != rhs:
            return fail("naturality", S.arr_name(f), S.obj_name(x), S.obj_name(y),
                        detail=f"{T.arr_name(lhs)} != {T.arr_name(rhs)}",
                        lhs=lhs, rhs=rhs)
    return PASS


def is_natural_iso(t: NatTransf) -> bool:
    T = t.F.target
    return all(is_iso(T, c) for c in t.components.values())

