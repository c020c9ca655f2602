"""Finite sets and functions, with graphs of functions as conceptualized objects.

Elements are non-negative ints or pairs of elements; a set is a tuple sorted
by :func:`elem_key`.  :class:`FinSet` is a lazy category: any finite set is a
valid object, but ``objects`` and ``arrows`` enumerate only the *window* of
subsets of ``{0,...,n-1}``.  Graphs ``{(x, f(x))}`` and diagonals live outside
the window and are produced on demand, since iterating graph-of-identity never
closes up into a finite set of objects.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

from .comma import ArrowObject, ArrowCategory, Caps, CommaSquare, build_arrow_category
from .core import PASS, Functor, Report, composable_pairs, fail, find_isomorphisms
from .errors import CapExceeded, NonCommutingSquare, NotComposable
from .symmetry import (
    CoccStructure,
    PscStructure,
    all_arrows_iso,
    check_cocc,
    check_imc,
    check_psc,
    check_sec,
    derive_tau,
    derived_arrow,
)


def elem_key(x):
    if isinstance(x, tuple):
        return (1, elem_key(x[0]), elem_key(x[1]))
    return (0, x)


def make_set(elems):
    return tuple(sorted(set(elems), key=elem_key))


def elem_name(x):
    if isinstance(x, tuple):
        return f"<{elem_name(x[0])},{elem_name(x[1])}>"
    return str(x)


def set_name(s):
    return "{" + ",".join(elem_name(x) for x in s) + "}"


@dataclass(frozen=True)
class Fn:
    """A total function ``dom -> cod`` given by its value table (aligned with ``dom``)."""

    dom: tuple
    cod: tuple
    table: tuple

    @cached_property
    def mapping(self):
        return dict(zip(self.dom, self.table))

    def __call__(self, x):
        return self.mapping[x]

    def is_identity(self):
        return self.dom == self.cod and self.table == self.dom


def identity_fn(a):
    return Fn(a, a, a)


def compose_fn(g: Fn, f: Fn) -> Fn:
    if f.cod != g.dom:
        raise NotComposable(fn_name(g), fn_name(f))
    gm = g.mapping
    return Fn(f.dom, g.cod, tuple(gm[y] for y in f.table))


def fn_name(f: Fn):
    if f.is_identity():
        return "id_" + set_name(f.dom)
    return f"f{set_name(f.dom)}>{set_name(f.cod)}[{','.join(elem_name(y) for y in f.table)}]"


def graph(f: Fn):
    """``{(x, f(x))}``; already sorted because ``dom`` is."""
    return tuple(zip(f.dom, f.table))


def diag(a):
    return tuple((x, x) for x in a)


def is_relation(s):
    return all(isinstance(x, tuple) for x in s)


def star_relational(r, s):
    """``{(x, z) | (x, y) in s and (y, z) in r}``: ``r`` after ``s``."""
    out = set()
    for x, y in s:
        for y2, z in r:
            if y == y2:
                out.add((x, z))
    return make_set(out)


def first_projection(rel):
    return Fn(rel, make_set(x for x, _ in rel), tuple(x for x, _ in rel))


class FinSet:
    """Finite sets and total functions; enumeration limited to the window."""

    def __init__(self, ground: int):
        self.ground = ground
        window = []
        for k in range(ground + 1):
            window.extend(combinations(range(ground), k))
        self.objects = window
        self._hom = {}
        self.arrows = [f for a in window for b in window for f in self.hom(a, b)]

    def __repr__(self):
        return f"<FinSet window={self.ground}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def identity(self, a):
        return identity_fn(a)

    def is_identity(self, f):
        return f.is_identity()

    def compose(self, g, f):
        return compose_fn(g, f)

    def hom(self, a, b):
        key = (a, b)
        if key not in self._hom:
            self._hom[key] = [Fn(a, b, t) for t in product(b, repeat=len(a))]
        return self._hom[key]

    def out_arrows(self, a):
        return [f for b in self.objects for f in self.hom(a, b)]

    def obj_name(self, a):
        return set_name(a)

    def arr_name(self, f):
        return fn_name(f)


class FinSetPsc(PscStructure):
    """Graph of a function as ``btop``, relational composition as ``star``."""

    def __init__(self, cat: FinSet):
        self.cat = cat
        self.btop_map = {}
        self.star_table = {}
        self.iso_map = {}
        self._iso_inv = {}

    def btop(self, f):
        return graph(f)

    def star(self, x, y):
        if not (is_relation(x) and is_relation(y)):
            return None
        return star_relational(x, y)

    def iso(self, a):
        """First projection ``diag(a) -> a``."""
        return Fn(diag(a), a, a)

    def iso_inv(self, a):
        return Fn(a, diag(a), diag(a))


def te_apply(square: CommaSquare) -> Fn:
    """``(k1;k2): J(f) -> J(g)`` becomes ``(x, f(x)) -> (k1(x), k2(f(x)))``."""
    f, g = square.src.base_arr, square.dst.base_arr
    k1, k2 = square.h1, square.h2
    if compose_fn(g, k1) != compose_fn(k2, f):
        raise NonCommutingSquare(f"({fn_name(k1)};{fn_name(k2)}) does not commute")
    return Fn(graph(f), graph(g), tuple((k1(x), k2(y)) for x, y in graph(f)))


def arrow_object(f: Fn):
    return ArrowObject(f.dom, f.cod, f)


def make_square(f, g, k1, k2):
    return CommaSquare(arrow_object(f), arrow_object(g), k1, k2)


def compose_squares(t: CommaSquare, s: CommaSquare) -> CommaSquare:
    return CommaSquare(s.src, t.dst, compose_fn(t.h1, s.h1), compose_fn(t.h2, s.h2))


def rho(f: Fn) -> Fn:
    """Component of ``rho: te -> F_st`` at ``J(f)``: the first projection."""
    return Fn(graph(f), f.dom, f.dom)


def counit(f: Fn):
    """``(pi1; pi2): J(id_{graph f}) -> J(f)`` as a pair of functions."""
    g = graph(f)
    return Fn(g, f.dom, f.dom), Fn(g, f.cod, f.table)


@dataclass
class FinSetModel:
    ground: int
    cat: FinSet
    psc: FinSetPsc
    ac: ArrowCategory | None = None
    cocc: CoccStructure | None = None


def build_model(n: int, caps: Caps | None = None, squares=True):
    """FinSet on ``{0,...,n-1}`` with its PSC and, if ``squares``, its CoCC.

    The CoCC needs ``C↓C`` materialized, which raises :class:`CapExceeded`
    beyond the caps; pass ``squares=False`` for the sampled checks.
    """
    caps = caps or Caps.from_env()
    C = FinSet(n)
    if len(C.arrows) > caps.max_arrows:
        raise CapExceeded("arrows", len(C.arrows), caps.max_arrows)
    psc = FinSetPsc(C)
    model = FinSetModel(n, C, psc)
    if squares:
        ac = build_arrow_category(C, caps)
        te = Functor(
            ac.cat, C,
            {x: graph(o.base_arr) for x, o in enumerate(ac.objects)},
            {s: te_apply(sq) for s, sq in enumerate(ac.squares)},
            "Te",
        )
        model.ac = ac
        model.cocc = CoccStructure(psc, ac, te)
    return model, psc, model.cocc


def sample_squares(C: FinSet, count, seed=0):
    """``count`` random commuting squares ``(k1;k2): J(f) -> J(g)``.

    ``f``, ``k1`` and ``g`` are drawn uniformly; ``k2`` is forced on the image
    of ``f`` and random elsewhere.  Draws where ``g.k1`` is not constant on the
    fibres of ``f`` are rejected.
    """
    rng = random.Random(seed)
    objs = C.objects
    out = []
    while len(out) < count:
        a, b, c, d = (rng.choice(objs) for _ in range(4))
        if (a and not b) or (a and not c) or (c and not d) or (b and not d):
            continue
        f = Fn(a, b, tuple(rng.choice(b) for _ in a))
        k1 = Fn(a, c, tuple(rng.choice(c) for _ in a))
        g = Fn(c, d, tuple(rng.choice(d) for _ in c))
        forced = {}
        ok = True
        for x in a:
            y, v = f(x), g(k1(x))
            if forced.setdefault(y, v) != v:
                ok = False
                break
        if not ok:
            continue
        k2 = Fn(b, d, tuple(forced[y] if y in forced else rng.choice(d) for y in b))
        out.append(make_square(f, g, k1, k2))
    return out


def check_set_claims(model: FinSetModel, samples=1000, seed=0) -> Report:
    """The Set claims, one law at a time.

    Arrow-level laws are always exhaustive over the window.  Square-level laws
    are exhaustive when ``C↓C`` is materialized and otherwise run on
    ``samples`` random commuting squares.
    """
    C, s = model.cat, model.psc
    results = {}

    def record(name, report):
        results[name] = report
        return report

    # (i) PSC laws and the closure functor
    record("homomorphism", _check_homomorphism(C, s))
    record("representability", _check_representability(C, s))
    r = check_psc(s)
    record("psc", r)
    if model.cocc is not None:
        record("cocc", check_cocc(model.cocc))
        squares = list(model.ac.squares)
        mode = "exhaustive"
    else:
        squares = sample_squares(C, samples, seed)
        mode = f"sampled({len(squares)})"
    record("te-functoriality", _check_te_functor(C, squares, seed))
    record("te-diagonal", _check_te_diagonal(C, s))
    # (ii) SEC identity and (iii) the derived arrow
    record("sec", _check_sec(C, s, model.cocc))
    record("derived-arrow", _check_derived(C, s, model.cocc))
    # (iv) rho = pi1 and the adjunction laws
    record("rho-naturality", _check_rho(squares))
    record("adjunction", _check_adjunction(C, s, squares))
    # (v) IMC must fail
    record("imc-fails", _check_imc_fails(C, model.cocc))

    failed = [k for k, v in results.items() if not v]
    data = {"mode": mode, "squares": len(squares), "laws": results}
    if failed:
        first = results[failed[0]]
        return fail(failed[0] + ":" + (first.law or ""), *first.witness, detail=first.detail, **data)
    return Report(True, data=data)


def _check_homomorphism(C, s):
    for g, f in composable_pairs(C):
        if star_relational(graph(g), graph(f)) != graph(compose_fn(g, f)):
            return fail("homomorphism", fn_name(g), fn_name(f))
    return PASS


def _check_representability(C, s):
    for a in C.objects:
        u, v = s.iso(a), s.iso_inv(a)
        if u.dom != graph(identity_fn(a)) or compose_fn(u, v) != identity_fn(a) \
                or compose_fn(v, u) != identity_fn(u.dom):
            return fail("representability", set_name(a))
        if len(set(u.table)) != len(u.dom) or set(u.table) != set(a):
            return fail("representability", set_name(a), detail="pi1 is not a bijection")
    return PASS


def _check_te_functor(C, squares, seed):
    rng = random.Random(seed + 1)
    for sq in squares:
        f = sq.src.base_arr
        idsq = make_square(f, f, identity_fn(f.dom), identity_fn(f.cod))
        if te_apply(idsq) != identity_fn(graph(f)):
            return fail("te-identity", fn_name(f))
        if te_apply(sq).dom != graph(f):
            return fail("te-object", fn_name(f))
        # extend by a random commuting square out of the target
        g = sq.dst.base_arr
        for _ in range(3):
            d = rng.choice(C.objects)
            e = rng.choice(C.objects)
            if (g.dom and not d) or (g.cod and not e) or (d and not e):
                continue
            m1 = Fn(g.dom, d, tuple(rng.choice(d) for _ in g.dom))
            h = Fn(d, e, tuple(rng.choice(e) for _ in d))
            forced = {}
            if any(forced.setdefault(g(x), h(m1(x))) != h(m1(x)) for x in g.dom):
                continue
            m2 = Fn(g.cod, e, tuple(forced.get(y, e[0] if e else None) for y in g.cod))
            nxt = make_square(g, h, m1, m2)
            both = compose_squares(nxt, sq)
            if te_apply(both) != compose_fn(te_apply(nxt), te_apply(sq)):
                return fail("te-composition", fn_name(f), fn_name(g), fn_name(h))
    return PASS


def _check_te_diagonal(C, s):
    """``te(f;f)`` is the pair map ``(f, f)`` on diagonals."""
    for f in C.arrows:
        a, b = f.dom, f.cod
        sq = make_square(identity_fn(a), identity_fn(b), f, f)
        want = Fn(diag(a), diag(b), tuple((f(x), f(x)) for x in a))
        if te_apply(sq) != want:
            return fail("te-diagonal", fn_name(f))
    return PASS


def _tau(f):
    a = f.dom
    psc_inv = Fn(a, diag(a), diag(a))
    up = te_apply(make_square(identity_fn(a), f, identity_fn(a), f))
    return compose_fn(up, psc_inv)


def _tau_inv(f):
    b = f.cod
    down = te_apply(make_square(f, identity_fn(b), f, identity_fn(b)))
    return compose_fn(Fn(diag(b), b, b), down)


def _check_sec(C, s, cocc):
    if cocc is not None:
        r = check_sec(cocc)
        if not r:
            return r
        tau, tau_inv = derive_tau(cocc)
        for x, o in enumerate(cocc.ac.objects):
            f = o.base_arr
            if tau[x] != _tau(f) or tau_inv[x] != _tau_inv(f):
                return fail("tau-components", fn_name(f))
    for f in C.arrows:
        t = _tau(f)
        if t != Fn(f.dom, graph(f), graph(f)):
            return fail("tau", fn_name(f), detail="tau(J(f)) is not x -> (x, f(x))")
        if compose_fn(_tau_inv(f), t) != f:
            return fail("tau_inv.tau=psi", fn_name(f))
    return PASS


def _check_derived(C, s, cocc):
    for f in C.arrows:
        a, b = f.dom, f.cod
        ff = te_apply(make_square(identity_fn(a), identity_fn(b), f, f))
        got = compose_fn(compose_fn(s.iso(b), ff), s.iso_inv(a))
        if got != f:
            return fail("derived-arrow", fn_name(f))
        if cocc is not None and derived_arrow(cocc, f) != f:
            return fail("derived-arrow", fn_name(f), detail="generic formula disagrees")
    return PASS


def _check_rho(squares):
    for sq in squares:
        f, g = sq.src.base_arr, sq.dst.base_arr
        if compose_fn(rho(g), te_apply(sq)) != compose_fn(sq.h1, rho(f)):
            return fail("rho-naturality", fn_name(f), fn_name(g))
        if rho(f) != first_projection(graph(f)) and f.dom:
            return fail("rho=pi1", fn_name(f))
    return PASS


def _check_adjunction(C, s, squares):
    """Unit ``x -> (x, x)`` and counit ``(pi1; pi2)`` for the diagonal and ``te``."""
    for f in C.arrows:
        a = f.dom
        p1, p2 = counit(f)
        if compose_fn(f, p1) != p2:
            return fail("counit-square", fn_name(f))
        # te(counit) . unit(graph f) = id
        g = graph(f)
        lifted = te_apply(make_square(identity_fn(g), f, p1, p2))
        if compose_fn(lifted, s.iso_inv(g)) != identity_fn(g):
            return fail("triangle-te", fn_name(f))
    for a in C.objects:
        eta = s.iso_inv(a)
        ida = identity_fn(a)
        p1, p2 = counit(ida)
        if compose_fn(p1, eta) != ida or compose_fn(p2, eta) != ida:
            return fail("triangle-diagonal", set_name(a))
    for sq in squares:
        f, g = sq.src.base_arr, sq.dst.base_arr
        t = te_apply(sq)
        pf1, pf2 = counit(f)
        pg1, pg2 = counit(g)
        if compose_fn(pg1, t) != compose_fn(sq.h1, pf1) or compose_fn(pg2, t) != compose_fn(sq.h2, pf2):
            return fail("counit-naturality", fn_name(f), fn_name(g))
    for f in C.arrows:
        a, b = f.dom, f.cod
        lhs = compose_fn(te_apply(make_square(identity_fn(a), identity_fn(b), f, f)), s.iso_inv(a))
        if lhs != compose_fn(s.iso_inv(b), f):
            return fail("unit-naturality", fn_name(f))
    return PASS


def _check_imc_fails(C, cocc):
    witness = all_arrows_iso(C)
    if witness is None:
        return fail("imc-fails", detail="every arrow is an isomorphism")
    # no pair of isomorphisms dom(f) ~ graph(f) ~ cod(f) exists for this f
    if find_isomorphisms(C, witness.cod, graph(witness)) and \
            find_isomorphisms(C, witness.dom, graph(witness)):
        return fail("imc-fails", fn_name(witness), detail="witness is not an obstruction")
    if cocc is not None and check_imc(cocc):
        return fail("imc-fails", detail="eta search found a unit")
    return Report(True, data={"witness": fn_name(witness)})
