"""Witness structures and verifiers for the PSC > CoCC > SEC > IMC hierarchy."""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass, field

from .comma import ArrowCategory, build_arrow_category, diagonal_functor, fst_functor, snd_functor
from .core import (
    PASS,
    FiniteCategory,
    Functor,
    NatTransf,
    Report,
    check_functor,
    check_naturality,
    composable_pairs,
    compose_functors,
    fail,
    find_isomorphisms,
    identity_functor,
    inverse,
    is_iso,
    isomorphic,
    materialize,
    validate_category,
    vertical,
)
from .errors import BudgetExceeded, InternalDisagreement, StarNotClosed, StructureError

DEFAULT_BUDGET = 1_000_000


@contextmanager
def _deep_recursion(depth):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, depth + 200))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


# -- perfectly symmetric structure ---------------------------------------------


class PscStructure:
    """``btop`` (arrows to objects), the object operation ``star`` and the
    representability isomorphisms ``iso(a): btop(id_a) -> a``.

    ``star`` may only mention conceptualized objects, i.e. the image of
    ``btop``.
    """

    def __init__(self, cat, btop, star, iso):
        self.cat = cat
        self.btop_map = dict(btop)
        self.star_table = dict(star)
        self.iso_map = dict(iso)
        image = set(self.btop_map.values())
        for x, y in self.star_table:
            if x not in image or y not in image:
                raise StructureError(
                    f"star entry ({cat.obj_name(x)}, {cat.obj_name(y)}) lies outside the image of btop")
        self._iso_inv = {}

    def btop(self, f):
        return self.btop_map[f]

    def star(self, x, y):
        return self.star_table.get((x, y))

    def iso(self, a):
        return self.iso_map[a]

    def iso_inv(self, a):
        if a not in self._iso_inv:
            self._iso_inv[a] = inverse(self.cat, self.iso_map[a])
        return self._iso_inv[a]

    def conceptualized(self, f):
        return self.btop(f)

    def image(self):
        seen = {}
        for f in self.cat.arrows:
            seen.setdefault(self.btop(f), None)
        return list(seen)


def check_psc(s: PscStructure) -> Report:
    """Homomorphism on every composable pair, then representability per object."""
    C = s.cat
    try:
        for f in C.arrows:
            s.btop(f)
    except KeyError:
        return fail("totality", C.arr_name(f), detail="btop undefined")
    pairs = sorted(composable_pairs(C), key=lambda p: C.is_identity(p[0]) and C.is_identity(p[1]))
    for g, f in pairs:
        got = s.star(s.btop(g), s.btop(f))
        want = s.btop(C.compose(g, f))
        if got is None:
            return fail("homomorphism", C.arr_name(g), C.arr_name(f),
                        detail=f"star undefined at ({C.obj_name(s.btop(g))}, {C.obj_name(s.btop(f))})")
        if got != want:
            return fail("homomorphism", C.arr_name(g), C.arr_name(f),
                        detail=f"{C.obj_name(got)} != {C.obj_name(want)}")
    for a in C.objects:
        try:
            u = s.iso(a)
        except KeyError:
            return fail("totality", C.obj_name(a), detail="iso undefined")
        if C.dom(u) != s.btop(C.identity(a)) or C.cod(u) != a:
            return fail("representability", C.obj_name(a), C.arr_name(u), detail="wrong type")
        v = s.iso_inv(a)
        if v is None or C.compose(u, v) != C.identity(a):
            return fail("representability", C.obj_name(a), C.arr_name(u), detail="not an isomorphism")
    return PASS


def check_star_associativity(s: PscStructure) -> Report:
    """``star`` is associative on every triple coming from composable arrows."""
    C = s.cat
    for g, f in composable_pairs(C):
        x, y = s.btop(g), s.btop(f)
        for h in C.out_arrows(C.cod(g)):
            z = s.btop(h)
            hg, gf = s.star(z, x), s.star(x, y)
            left = s.star(hg, y) if hg is not None else None
            right = s.star(z, gf) if gf is not None else None
            if left != right:
                return fail("star-associativity", C.arr_name(h), C.arr_name(g), C.arr_name(f))
    return PASS


def iter_psc(C, budget=DEFAULT_BUDGET):
    """Every PSC structure on ``C`` in lexicographic order of ``btop``.

    Variables are ``btop`` on identities (object order), then on the other
    arrows (arrow order); candidate values are tried in object order, and
    identities only range over objects isomorphic to their own object.
    Raises :class:`BudgetExceeded` when more than ``budget`` nodes are tried.
    """
    objs = list(C.objects)
    ids = [C.identity(a) for a in objs]
    idset = set(ids)
    order = ids + [f for f in C.arrows if f not in idset]
    domain = {}
    for a, i in zip(objs, ids):
        domain[i] = [x for x in objs if isomorphic(C, x, a)]
    for f in order[len(ids):]:
        domain[f] = objs

    involved = {f: [] for f in order}
    for g, f in composable_pairs(C):
        h = C.compose(g, f)
        triple = (g, f, h)
        for v in {g, f, h}:
            involved[v].append(triple)

    btop, star, refs = {}, {}, {}
    nodes = 0

    def assign(var, val):
        added = []
        btop[var] = val
        for g, f, h in involved[var]:
            if g in btop and f in btop and h in btop:
                key = (btop[g], btop[f])
                have = star.get(key)
                if have is None:
                    star[key] = btop[h]
                    refs[key] = 1
                    added.append(key)
                elif have != btop[h]:
                    undo(var, added)
                    return None
                else:
                    refs[key] += 1
                    added.append(key)
        return added

    def undo(var, added):
        for key in added:
            refs[key] -= 1
            if refs[key] == 0:
                del refs[key]
                del star[key]
        del btop[var]

    def dfs(k):
        nonlocal nodes
        if k == len(order):
            iso = {a: find_isomorphisms(C, btop[C.identity(a)], a)[0] for a in objs}
            yield PscStructure(C, btop, star, iso)
            return
        var = order[k]
        for val in domain[var]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("search_psc", budget)
            added = assign(var, val)
            if added is None:
                continue
            yield from dfs(k + 1)
            undo(var, added)

    with _deep_recursion(2 * len(order)):
        yield from dfs(0)


def search_psc(C, budget=DEFAULT_BUDGET) -> PscStructure | None:
    """Lexicographically least PSC structure on ``C``, or None when the
    exhaustive search finds none.  Raises :class:`BudgetExceeded`."""
    return next(iter_psc(C, budget), None)


# -- conceptually closed structure ---------------------------------------------


class CoccStructure:
    """A PSC together with a closure functor ``te: C↓C -> C``.

    ``phi(a) = iso(a): te(J(id_a)) -> a`` and ``phi_inv(a) = iso_inv(a)``.
    """

    def __init__(self, psc: PscStructure, ac: ArrowCategory, te: Functor):
        self.psc = psc
        self.ac = ac
        self.te = te

    @property
    def cat(self):
        return self.psc.cat

    def delta(self):
        return diagonal_functor(self.ac)

    def te_delta(self):
        return compose_functors(self.te, self.delta(), "Te.Delta")

    def phi(self):
        C = self.cat
        return NatTransf(self.te_delta(), identity_functor(C),
                         {a: self.psc.iso(a) for a in C.objects}, "phi")

    def phi_inv(self):
        C = self.cat
        return NatTransf(identity_functor(C), self.te_delta(),
                         {a: self.psc.iso_inv(a) for a in C.objects}, "phi_inv")


def make_cocc(psc, te_arrows, ac=None, te_objects=None):
    """Assemble a CoCC structure from ``te`` on squares (arrow ids of ``ac.cat``).

    Object components default to ``btop(f)`` at ``J(f)``.
    """
    ac = ac or build_arrow_category(psc.cat)
    obj_map = dict(te_objects or {})
    for x in ac.cat.objects:
        obj_map.setdefault(x, psc.btop(ac.j_inv(x)))
    te = Functor(ac.cat, psc.cat, obj_map, te_arrows, "Te")
    return CoccStructure(psc, ac, te)


def check_cocc(c: CoccStructure) -> Report:
    C, ac, te, s = c.cat, c.ac, c.te, c.psc
    r = check_functor(te)
    if not r:
        return fail("te-functor:" + r.law, *r.witness, detail=r.detail)
    for x in ac.cat.objects:
        f = ac.j_inv(x)
        if te.ob(x) != s.btop(f):
            return fail("object-component", C.arr_name(f),
                        detail=f"te(J(f)) = {C.obj_name(te.ob(x))}, btop(f) = {C.obj_name(s.btop(f))}")
    for a in C.objects:
        if s.iso_inv(a) is None:
            return fail("phi-iso", C.obj_name(a), detail="iso(a) has no inverse")
    phi, phi_inv = c.phi(), c.phi_inv()
    for t in (phi, phi_inv):
        r = check_naturality(t)
        if not r:
            return fail(f"{t.name}-naturality:" + r.law, *r.witness, detail=r.detail)
    for a in C.objects:
        if C.compose(phi[a], phi_inv[a]) != C.identity(a):
            return fail("phi-inverse", C.obj_name(a))
        if C.compose(phi_inv[a], phi[a]) != C.identity(te.ob(ac.j(C.identity(a)))):
            return fail("phi-inverse", C.obj_name(a))
    return PASS


def derived_arrow(c: CoccStructure, f):
    """``phi(b) . te(f;f) . phi_inv(a)`` for ``f: a -> b``."""
    C, ac = c.cat, c.ac
    a, b = C.dom(f), C.cod(f)
    ff = ac.square(ac.j(C.identity(a)), ac.j(C.identity(b)), f, f)
    return C.compose(C.compose(c.psc.iso(b), c.te.ar(ff)), c.psc.iso_inv(a))


def derive_tau(c: CoccStructure):
    """``tau: F_st -> te`` and ``tau_inv: te -> S_nd``.

    ``tau(J(f)) = te(id_a; f) . phi_inv(a)`` and
    ``tau_inv(J(f)) = phi(b) . te(f; id_b)``.
    """
    C, ac, te, s = c.cat, c.ac, c.te, c.psc
    tau, tau_inv = {}, {}
    for x, o in enumerate(ac.objects):
        f, a, b = o.base_arr, o.base_dom, o.base_cod
        ida, idb = C.identity(a), C.identity(b)
        up = ac.square(ac.j(ida), x, ida, f)
        down = ac.square(x, ac.j(idb), f, idb)
        tau[x] = C.compose(te.ar(up), s.iso_inv(a))
        tau_inv[x] = C.compose(s.iso(b), te.ar(down))
    return (NatTransf(fst_functor(ac), te, tau, "tau"),
            NatTransf(te, snd_functor(ac), tau_inv, "tau_inv"))


def check_sec(c: CoccStructure) -> Report:
    """``tau_inv . tau == psi`` and ``te(f;f) == phi_inv(b) . f . phi(a)``.

    Both formulations are evaluated; the report records whether they agree.
    """
    C, ac, s = c.cat, c.ac, c.psc
    tau, tau_inv = derive_tau(c)
    both = vertical(tau_inv, tau)
    first = None
    for x, o in enumerate(ac.objects):
        if both[x] != o.base_arr:
            first = o.base_arr
            break
    second = None
    for f in C.arrows:
        a, b = C.dom(f), C.cod(f)
        ff = ac.square(ac.j(C.identity(a)), ac.j(C.identity(b)), f, f)
        want = C.compose(C.compose(s.iso_inv(b), f), s.iso(a))
        if c.te.ar(ff) != want:
            second = f
            break
    agree = (first is None) == (second is None)
    if first is None and second is None:
        return Report(True, data={"formulations_agree": True})
    if first is not None:
        return fail("tau_inv.tau=psi", C.arr_name(first),
                    detail="" if agree else "the te(f;f) formulation holds here",
                    formulations_agree=agree)
    return fail("te(f;f)=phi_inv.f.phi", C.arr_name(second),
                detail="" if agree else "tau_inv.tau = psi holds; te is not functorial",
                formulations_agree=agree)


def all_arrows_iso(C):
    for f in C.arrows:
        if not is_iso(C, f):
            return f
    return None


def search_eta(c: CoccStructure, budget=DEFAULT_BUDGET):
    """Components of a natural iso ``Id -> Delta.te`` on ``C↓C``, or None."""
    C, ac, te = c.cat, c.ac, c.te
    AC = ac.cat
    target = {}
    candidates = {}
    for x, o in enumerate(ac.objects):
        f, b = o.base_arr, o.base_cod
        ft = te.ob(x)
        cands = []
        for is2 in find_isomorphisms(C, b, ft):
            is1 = C.compose(is2, f)
            if not is_iso(C, is1):
                continue
            if x not in target:
                y = ac.j(C.identity(ft))
                target[x] = y
            cands.append(ac.square(x, target[x], is1, is2))
        if not cands:
            return None, {"blocked_at": f}
        candidates[x] = cands

    delta = diagonal_functor(ac)
    lifted = {s: delta.ar(te.ar(s)) for s in AC.arrows}
    objs = list(AC.objects)
    eta = {}
    nodes = 0

    def ok_for(x):
        for s in AC.arrows:
            u, v = AC.dom(s), AC.cod(s)
            if (u == x and v in eta) or (v == x and u in eta):
                if AC.compose(lifted[s], eta[u]) != AC.compose(eta[v], s):
                    return False
        return True

    def dfs(k):
        nonlocal nodes
        if k == len(objs):
            return True
        x = objs[k]
        for cand in candidates[x]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("eta search", budget)
            eta[x] = cand
            if ok_for(x) and dfs(k + 1):
                return True
            del eta[x]
        return False

    with _deep_recursion(len(objs)):
        if dfs(0):
            return dict(eta), {}
    return None, {}


def check_imc(c: CoccStructure, budget=DEFAULT_BUDGET) -> Report:
    """Search for the unit ``eta`` and cross-check with "every arrow is iso"."""
    C = c.cat
    eta, info = search_eta(c, budget)
    non_iso = all_arrows_iso(C)
    if (eta is not None) != (non_iso is None):
        raise InternalDisagreement(
            f"eta search {'found' if eta is not None else 'found no'} unit but "
            f"{'every arrow is iso' if non_iso is None else C.arr_name(non_iso) + ' is not iso'}")
    if eta is not None:
        return Report(True, data={"eta": eta})
    witness = info.get("blocked_at", non_iso)
    return fail("eta", C.arr_name(witness), detail=f"{C.arr_name(non_iso)} is not an isomorphism")


def search_cocc(psc: PscStructure, ac=None, budget=DEFAULT_BUDGET) -> CoccStructure | None:
    """Lexicographically least closure functor extending ``psc``, or None.

    Identity squares and diagonal squares are forced (the latter by
    naturality of ``phi``); the remaining squares are searched in id order
    with values propagated through the composition table.
    """
    C = psc.cat
    ac = ac or build_arrow_category(C)
    AC = ac.cat
    for a in C.objects:
        if psc.iso_inv(a) is None:
            return None
    obj = {x: psc.btop(ac.j_inv(x)) for x in AC.objects}
    cands = {s: C.hom(obj[AC.dom(s)], obj[AC.cod(s)]) for s in AC.arrows}
    ins = {x: [] for x in AC.objects}
    for s in AC.arrows:
        ins[AC.cod(s)].append(s)

    val = {}
    trail = []

    def setv(s, v, queue):
        have = val.get(s)
        if have is None:
            if v not in cands[s]:
                return False
            val[s] = v
            trail.append(s)
            queue.append(s)
            return True
        return have == v

    def propagate(queue):
        while queue:
            s = queue.pop()
            vs = val[s]
            for t in AC.out_arrows(AC.cod(s)):
                if t in val and not setv(AC.compose(t, s), C.compose(val[t], vs), queue):
                    return False
            for t in ins[AC.dom(s)]:
                if t in val and not setv(AC.compose(s, t), C.compose(vs, val[t]), queue):
                    return False
        return True

    def rollback(mark):
        while len(trail) > mark:
            del val[trail.pop()]

    queue = []
    for x in AC.objects:
        if not setv(AC.identity(x), C.identity(obj[x]), queue):
            return None
    delta = diagonal_functor(ac)
    for f in C.arrows:
        a, b = C.dom(f), C.cod(f)
        forced = C.compose(C.compose(psc.iso_inv(b), f), psc.iso(a))
        if not setv(delta.ar(f), forced, queue):
            return None
    if not propagate(queue):
        return None

    order = list(AC.arrows)
    nodes = 0

    def dfs(k):
        nonlocal nodes
        while k < len(order) and order[k] in val:
            k += 1
        if k == len(order):
            return True
        s = order[k]
        for v in cands[s]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("search_cocc", budget)
            mark = len(trail)
            q = []
            if setv(s, v, q) and propagate(q) and dfs(k + 1):
                return True
            rollback(mark)
        return False

    with _deep_recursion(len(order)):
        if not dfs(0):
            return None
    return CoccStructure(psc, ac, Functor(AC, C, obj, dict(val), "Te"))


def search_cocc_any(C, ac=None, budget=DEFAULT_BUDGET) -> CoccStructure | None:
    """First CoCC structure over any PSC structure of ``C`` (PSCs in
    lexicographic order); None when no PSC admits a closure functor."""
    ac = ac or build_arrow_category(C)
    for psc in iter_psc(C, budget):
        c = search_cocc(psc, ac, budget)
        if c is not None:
            return c
    return None


# -- lifted categories and the duality functor -------------------------------


@dataclass
class Lift:
    arrowrep: FiniteCategory
    conceptrep: FiniteCategory
    M: Functor
    T: Functor
    D: Functor
    D_inv: Functor | None


def lift_categories(s: PscStructure) -> Lift:
    """Arrow representation, object representation and the functors between them."""
    C = s.cat
    base = materialize(C, validate=False)
    objs, arrs = list(C.objects), list(C.arrows)
    oi = {a: i for i, a in enumerate(objs)}
    ai = {f: i for i, f in enumerate(arrs)}
    arrowrep = FiniteCategory(
        [C.arr_name(C.identity(a)) for a in objs],
        base.arr_names,
        [base.dom(f) for f in base.arrows],
        [base.cod(f) for f in base.arrows],
        [base.identity(a) for a in base.objects],
        base.composition_table(),
    )
    M = Functor(C, arrowrep, oi, ai, "M")

    cobj = {}
    for a in objs:
        cobj.setdefault(s.btop(C.identity(a)), len(cobj))
    triples = {}
    for f in arrs:
        t = (s.btop(C.identity(C.dom(f))), s.btop(f), s.btop(C.identity(C.cod(f))))
        triples.setdefault(t, len(triples))
    tlist = list(triples)
    comp = {}
    for t1 in tlist:
        for t2 in tlist:
            if t2[0] != t1[2]:
                continue
            v = s.star(t2[1], t1[1])
            key = (t1[0], v, t2[2])
            if v is None or key not in triples:
                raise StarNotClosed(
                    f"star({C.obj_name(t2[1])}, {C.obj_name(t1[1])}) is not a conceptualized arrow")
            comp[triples[t2], triples[t1]] = triples[key]
    for x in cobj:
        if (x, x, x) not in triples:
            raise StarNotClosed(f"no conceptualized identity on {C.obj_name(x)}")
    cnames = [C.obj_name(x) for x in cobj]
    tnames = []
    for x, b, y in tlist:
        if (x, b, y) == (x, x, x) and y == x:
            tnames.append("id_" + C.obj_name(x))
        else:
            tnames.append(f"{C.obj_name(b)}@{C.obj_name(x)}>{C.obj_name(y)}")
    conceptrep = FiniteCategory(
        cnames,
        tnames,
        [cobj[t[0]] for t in tlist],
        [cobj[t[2]] for t in tlist],
        [triples[x, x, x] for x in cobj],
        comp,
    )
    conceptrep = validate_category(conceptrep.to_raw())

    D_obj = {oi[a]: cobj[s.btop(C.identity(a))] for a in objs}
    D_arr = {ai[f]: triples[s.btop(C.identity(C.dom(f))), s.btop(f),
                            s.btop(C.identity(C.cod(f)))] for f in arrs}
    D = Functor(arrowrep, conceptrep, D_obj, D_arr, "D")
    T = compose_functors(D, M, "T")
    D_inv = None
    if len(set(D_obj.values())) == len(D_obj) == len(cobj) and \
            len(set(D_arr.values())) == len(D_arr) == len(tlist):
        D_inv = Functor(conceptrep, arrowrep,
                        {v: k for k, v in D_obj.items()},
                        {v: k for k, v in D_arr.items()}, "D_inv")
    return Lift(arrowrep, conceptrep, M, T, D, D_inv)


def check_duality(lift: Lift) -> Report:
    """``D`` is an isomorphism with two-sided inverse ``D_inv``."""
    D = lift.D
    for F in (lift.M, lift.T, D):
        r = check_functor(F)
        if not r:
            return fail(f"{F.name}-functor:{r.law}", *r.witness)
    if lift.D_inv is None:
        seen = {}
        for f, t in D.arr_map.items():
            if t in seen:
                A = lift.arrowrep
                return fail("D-not-injective", A.arr_name(seen[t]), A.arr_name(f),
                            detail="distinct arrows share one conceptualized arrow")
            seen[t] = f
        return fail("D-not-surjective")
    r = check_functor(lift.D_inv)
    if not r:
        return fail(f"D_inv-functor:{r.law}", *r.witness)
    there = compose_functors(lift.D_inv, D)
    back = compose_functors(D, lift.D_inv)
    if not there.same_maps(identity_functor(lift.arrowrep)):
        return fail("D_inv.D")
    if not back.same_maps(identity_functor(lift.conceptrep)):
        return fail("D.D_inv")
    return PASS


# -- classification ------------------------------------------------------------


@dataclass
class Verdict:
    status: str  # PASS, FAIL, ABSENT or BUDGET
    report: Report | None = None
    structure: object = None

    @property
    def ok(self):
        return self.status == "PASS"


@dataclass
class HierarchyVerdict:
    psc: Verdict
    cocc: Verdict
    sec: Verdict
    imc: Verdict
    notes: list = field(default_factory=list)

    def layers(self):
        return {"psc": self.psc, "cocc": self.cocc, "sec": self.sec, "imc": self.imc}

    def monotone(self):
        chain = [self.imc.ok, self.sec.ok, self.cocc.ok, self.psc.ok]
        return all(not upper or lower for upper, lower in zip(chain, chain[1:]))


def classify(C, psc=None, cocc=None, budget=DEFAULT_BUDGET) -> HierarchyVerdict:
    """Place ``C`` in the hierarchy using given or discovered witnesses."""
    missing = Verdict("ABSENT")
    given_psc = psc is not None or cocc is not None
    if psc is None and cocc is not None:
        psc = cocc.psc
    if psc is None:
        try:
            psc = search_psc(C, budget)
        except BudgetExceeded as exc:
            v = Verdict("BUDGET", fail("budget", detail=str(exc)))
            return HierarchyVerdict(v, missing, missing, missing)
        pv = Verdict("PASS", PASS, psc) if psc is not None else Verdict("ABSENT")
    else:
        r = check_psc(psc)
        pv = Verdict(r.verdict, r, psc)
    if not pv.ok:
        return HierarchyVerdict(pv, missing, missing, missing)

    if cocc is None:
        try:
            # a discovered PSC is only one candidate; a closure functor may need another
            cocc = search_cocc(psc, budget=budget) if given_psc else search_cocc_any(C, budget=budget)
        except BudgetExceeded as exc:
            v = Verdict("BUDGET", fail("budget", detail=str(exc)))
            return HierarchyVerdict(pv, v, missing, missing)
        cv = Verdict("PASS", check_cocc(cocc), cocc) if cocc is not None else Verdict("ABSENT")
        if cocc is not None and not cv.report:
            cv = Verdict("FAIL", cv.report, cocc)
    else:
        r = check_cocc(cocc)
        cv = Verdict(r.verdict, r, cocc)
    if not cv.ok:
        return HierarchyVerdict(pv, cv, missing, missing)

    r = check_sec(cocc)
    sv = Verdict(r.verdict, r, cocc)
    # IMC is evaluated on its own so that monotonicity is checked, not built in
    try:
        r = check_imc(cocc, budget)
        iv = Verdict(r.verdict, r, cocc)
    except BudgetExceeded as exc:
        iv = Verdict("BUDGET", fail("budget", detail=str(exc)))
    return HierarchyVerdict(pv, cv, sv, iv)
