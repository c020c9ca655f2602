"""The endofunctor E, the internal symmetry adjunction, and the (ℕ,+) action.

``E(a) = btop(id_a)`` and ``E(f) = iso_inv(b) . f . iso(a)`` for ``f: a -> b``.
Iterates ``g_n = E^n`` form a commutative monoid acting on objects and arrows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    Functor,
    NatTransf,
    Report,
    check_functor,
    check_naturality,
    fail,
    identity_functor,
    is_natural_iso,
)
from .errors import InternalDisagreement, NotACommutingTriangle, NotComposable
from .symmetry import PscStructure


class EndoE:
    """``E`` for a fixed PSC structure (so for a fixed choice of each ``iso(a)``)."""

    def __init__(self, psc: PscStructure):
        self.psc = psc
        self.cat = psc.cat
        self.report = None

    def obj_act(self, a):
        return self.psc.btop(self.cat.identity(a))

    def arr_act(self, f):
        C, s = self.cat, self.psc
        return C.compose(C.compose(s.iso_inv(C.cod(f)), f), s.iso(C.dom(f)))

    def as_functor(self) -> Functor:
        C = self.cat
        return Functor(C, C, {a: self.obj_act(a) for a in C.objects},
                       {f: self.arr_act(f) for f in C.arrows}, "E")


def build_E(s: PscStructure) -> EndoE:
    """``E`` with its functor laws checked; the result is kept in ``.report``."""
    e = EndoE(s)
    e.report = check_functor(e.as_functor())
    return e


def transform_diagram(e: EndoE, triangle):
    """Image ``(g1, h1, f1)`` of a commuting triangle ``f = h . g``."""
    g, h, f = triangle
    C = e.cat
    try:
        ok = C.compose(h, g) == f
    except NotComposable:
        ok = False
    if not ok:
        raise NotACommutingTriangle(
            f"{C.arr_name(f)} is not {C.arr_name(h)} . {C.arr_name(g)}")
    g1, h1, f1 = e.arr_act(g), e.arr_act(h), e.arr_act(f)
    if C.compose(h1, g1) != f1:
        raise InternalDisagreement("E does not preserve a commuting triangle")
    return g1, h1, f1


def unit(e: EndoE) -> NatTransf:
    C = e.cat
    return NatTransf(identity_functor(C), e.as_functor(),
                     {a: e.psc.iso_inv(a) for a in C.objects}, "eta")


def counit(e: EndoE) -> NatTransf:
    C = e.cat
    return NatTransf(e.as_functor(), identity_functor(C),
                     {a: e.psc.iso(a) for a in C.objects}, "epsilon")


def universal_arrow(e: EndoE, d, k):
    """The arrow ``c -> d`` through which ``k: c -> E(d)`` factors: ``iso(d) . k``."""
    return e.cat.compose(e.psc.iso(d), k)


def check_internal_adjunction(e: EndoE) -> Report:
    """Naturality, the iso and triangle laws, then universal arrows by full scan."""
    C, s = e.cat, e.psc
    for a in C.objects:
        if s.iso_inv(a) is None:
            return fail("iso", C.obj_name(a), detail="iso(a) is not invertible")
    eta, eps = unit(e), counit(e)
    for t in (eta, eps):
        r = check_naturality(t)
        if not r:
            return fail(f"{t.name}-{r.law}", *r.witness, detail=r.detail)
    for t in (eta, eps):
        if not is_natural_iso(t):
            return fail(f"{t.name}-iso")
    for a in C.objects:
        if C.compose(eps[a], eta[a]) != C.identity(a):
            return fail("epsilon.eta=id", C.obj_name(a))
        Ea = e.obj_act(a)
        if C.compose(e.arr_act(eps[a]), s.iso_inv(Ea)) != C.identity(Ea):
            return fail("triangle", C.obj_name(a))
    scanned = 0
    for c in C.objects:
        for d in C.objects:
            candidates = C.hom(c, d)
            for k in C.hom(c, e.obj_act(d)):
                kbar = universal_arrow(e, d, k)
                if C.compose(e.arr_act(kbar), eta[c]) != k:
                    return fail("universal-arrow", C.arr_name(k), detail="k != E(kbar) . eta(c)")
                hits = [u for u in candidates if C.compose(e.arr_act(u), eta[c]) == k]
                scanned += len(candidates)
                if hits != [kbar]:
                    return fail("uniqueness", C.arr_name(k),
                                detail=f"{len(hits)} arrows factor k")
    return Report(True, data={"scanned": scanned})


# -- ICS(ℕ) ----------------------------------------------------------------


@dataclass(frozen=True)
class IcsElement:
    """``g_n = E^n``; ``power`` 0 is the neutral element."""

    power: int

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("ICS elements have non-negative powers")

    def __repr__(self):
        return f"g{self.power}"


def g(n) -> IcsElement:
    return IcsElement(n)


def ics_compose(x: IcsElement, y: IcsElement) -> IcsElement:
    return IcsElement(x.power + y.power)


def act(x: IcsElement, e: EndoE, target, kind="object"):
    """Apply ``E`` ``x.power`` times to an object or (``kind="arrow"``) an arrow."""
    if kind not in ("object", "arrow"):
        raise ValueError(f"kind must be 'object' or 'arrow', not {kind!r}")
    step = e.obj_act if kind == "object" else e.arr_act
    for _ in range(x.power):
        target = step(target)
    return target


@dataclass
class Orbit:
    elements: list
    witnesses: list = field(default_factory=list)  # one per consecutive pair
    cycle: tuple | None = None  # (first index, period)


def orbit(e: EndoE, t, depth=8, kind="object") -> Orbit:
    """``[t, E(t), ..., E^depth(t)]`` with an isomorphism witness for each step.

    Objects get ``iso_inv(x): x -> E(x)``; arrows get the squares
    ``(iso_inv(a), iso_inv(b))`` exhibiting ``f ≅ E(f)``.  The first repeated
    value is reported as a cycle.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    C, s = e.cat, e.psc
    out = Orbit([t])
    seen = {t: 0}
    cur = t
    for i in range(1, depth + 1):
        if kind == "object":
            nxt = e.obj_act(cur)
            w = s.iso_inv(cur)
            if C.dom(w) != cur or C.cod(w) != nxt:
                raise InternalDisagreement("iso_inv(x) is not x -> E(x)")
        else:
            nxt = e.arr_act(cur)
            a, b = C.dom(cur), C.cod(cur)
            w = (s.iso_inv(a), s.iso_inv(b))
            if C.compose(nxt, w[0]) != C.compose(w[1], cur):
                raise InternalDisagreement("orbit witness square does not commute")
        out.elements.append(nxt)
        out.witnesses.append(w)
        if out.cycle is None and nxt in seen:
            out.cycle = (seen[nxt], i - seen[nxt])
        seen.setdefault(nxt, i)
        cur = nxt
    return out
