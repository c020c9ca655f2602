from itertools import product

import hypothesis
import hypothesis.strategies as st
import pytest

from catsym import samples
from catsym.comma import LevelTower, build_arrow_category, psi
from catsym.core import (
    Functor,
    check_naturality,
    compose_functors,
    equal_up_to_iso,
    find_isomorphisms,
)
from catsym.errors import BudgetExceeded, InternalDisagreement, StructureError
from catsym.finset import Fn, build_model
from catsym.symmetry import (
    PscStructure,
    all_arrows_iso,
    check_cocc,
    check_duality,
    check_imc,
    check_psc,
    check_sec,
    check_star_associativity,
    classify,
    derive_tau,
    derived_arrow,
    iter_psc,
    lift_categories,
    make_cocc,
    search_cocc,
    search_cocc_any,
    search_psc,
)

from corpus import valid_categories

categories = st.sampled_from(valid_categories())


def brute_force_psc(C):
    """Lex-least (identities first) btop admitting a PSC, by plain enumeration."""
    objs = list(C.objects)
    ids = [C.identity(a) for a in objs]
    order = ids + [f for f in C.arrows if f not in ids]
    pairs = [(g, f) for g in C.arrows for f in C.arrows if C.dom(g) == C.cod(f)]
    for values in product(objs, repeat=len(order)):
        bt = dict(zip(order, values))
        if any(not find_isomorphisms(C, bt[C.identity(a)], a) for a in objs):
            continue
        star = {}
        ok = True
        for g, f in pairs:
            key, want = (bt[g], bt[f]), bt[C.compose(g, f)]
            if star.setdefault(key, want) != want:
                ok = False
                break
        if ok:
            return bt, star
    return None


# -- PSC -----------------------------------------------------------------------


def test_terminal_psc(terminal):
    s = PscStructure(terminal, {0: 0}, {(0, 0): 0}, {0: 0})
    assert check_psc(s)
    found = search_psc(terminal)
    assert found.btop_map == {0: 0} and found.star_table == {(0, 0): 0}


def test_group2_psc(group2):
    e, g = group2.arr("e"), group2.arr("g")
    s = PscStructure(group2, {e: 0, g: 0}, {(0, 0): 0}, {0: e})
    assert check_psc(s)


def test_interval_missing_star_entry(interval):
    a, b = interval.obj("a"), interval.obj("b")
    bt = {interval.arr("id_a"): a, interval.arr("id_b"): b, interval.arr("f"): a}
    s = PscStructure(interval, bt, {(b, a): a, (b, b): b}, {a: 0, b: 1})
    r = check_psc(s)
    assert not r and r.law == "homomorphism" and r.witness == ("f", "id_a")


def test_interval_admits_a_psc(interval):
    # btop(f) = a with star (a,a) -> a, (b,a) -> a, (b,b) -> b satisfies every law
    s = search_psc(interval)
    a, b = interval.obj("a"), interval.obj("b")
    assert s.btop_map == {0: a, 1: b, 2: a}
    assert s.star_table == {(a, a): a, (b, a): a, (b, b): b}
    assert check_psc(s)
    assert brute_force_psc(interval) == (s.btop_map, s.star_table)


def test_domain_structure_is_always_psc():
    # btop = dom, star(x, y) = y, iso = identities
    for C in valid_categories():
        bt = {f: C.dom(f) for f in C.arrows}
        star = {(C.dom(g), C.dom(f)): C.dom(f) for g in C.arrows for f in C.arrows
                if C.dom(g) == C.cod(f)}
        s = PscStructure(C, bt, star, {a: C.identity(a) for a in C.objects})
        assert check_psc(s)


def test_star_outside_image_rejected(interval):
    with pytest.raises(StructureError):
        PscStructure(interval, {0: 0, 1: 0, 2: 0}, {(1, 1): 1}, {0: 0, 1: 1})


def test_non_iso_representability_fails(interval):
    s = PscStructure(interval, {0: 0, 1: 0, 2: 0}, {(0, 0): 0}, {0: 0, 1: 2})
    r = check_psc(s)
    assert not r and r.law == "representability" and r.witness == ("b", "f")


def test_search_budget(group2):
    C2 = build_arrow_category(group2).cat
    with pytest.raises(BudgetExceeded):
        search_psc(C2, budget=3)


def test_level_two_of_group2_is_psc(group2):
    C2 = LevelTower(group2).level(2)
    s = search_psc(C2)
    assert s is not None and check_psc(s)
    bt, star = brute_force_psc(C2)
    assert s.btop_map == bt and s.star_table == star


@hypothesis.given(categories)
def test_search_matches_brute_force(C):
    s = search_psc(C)
    expected = brute_force_psc(C)
    assert (s is None) == (expected is None)
    if s is not None:
        assert (s.btop_map, s.star_table) == expected
        assert check_psc(s)
        assert check_star_associativity(s)


@hypothesis.given(categories)
def test_every_enumerated_psc_passes(C):
    seen = set()
    for s in iter_psc(C):
        assert check_psc(s)
        key = tuple(sorted(s.btop_map.items()))
        assert key not in seen
        seen.add(key)


@hypothesis.given(categories)
def test_homomorphism_exact(C):
    s = search_psc(C)
    for g in C.arrows:
        for f in C.arrows:
            if C.dom(g) == C.cod(f):
                assert s.star(s.btop(g), s.btop(f)) == s.btop(C.compose(g, f))


# -- CoCC, tau, SEC ------------------------------------------------------------


def test_terminal_cocc(terminal):
    s = search_psc(terminal)
    c = make_cocc(s, {0: 0})
    assert check_cocc(c)
    assert check_sec(c)
    assert check_imc(c)


def test_wrong_object_component_fails(interval):
    s = search_psc(interval)
    c = search_cocc(s)
    te = c.te
    ac = c.ac
    x = ac.j(interval.arr("f"))
    bad = dict(te.obj_map)
    bad[x] = interval.obj("b")
    mutant = make_cocc(s, te.arr_map, ac, bad)
    r = check_cocc(mutant)
    # with the wrong object map te no longer type-checks as a functor
    assert not r and r.law == "te-functor:typing"


def test_object_component_law_witness(interval):
    # a consistent functor whose object part is not btop.psi
    s = search_psc(interval)
    ac = build_arrow_category(interval)
    cod = Functor(ac.cat, interval, {x: o.base_cod for x, o in enumerate(ac.objects)},
                  {q: sq.h2 for q, sq in enumerate(ac.squares)}, "S_nd")
    mutant = make_cocc(s, cod.arr_map, ac, cod.obj_map)
    r = check_cocc(mutant)
    assert not r and r.law == "object-component" and r.witness == ("f",)


def test_derive_tau(interval):
    c = search_cocc(search_psc(interval))
    tau, tau_inv = derive_tau(c)
    assert check_naturality(tau) and check_naturality(tau_inv)
    a = interval.obj("a")
    x = c.ac.j(interval.identity(a))
    assert tau[x] == c.psc.iso_inv(a)


def test_derived_arrow_of_identity(group2):
    c = search_cocc(search_psc(group2))
    for a in group2.objects:
        assert derived_arrow(c, group2.identity(a)) == group2.identity(a)


def test_twisted_diagonal_breaks_sec_and_cocc():
    model, psc, cocc = build_model(2)
    C, ac = model.cat, model.ac
    swap = Fn((0, 1), (0, 1), (1, 0))
    a = (0, 1)
    x = ac.j(C.identity(a))
    sq = ac.square(x, x, swap, swap)
    twisted = dict(cocc.te.arr_map)
    target = twisted[sq]
    # identity on the diagonal: isomorphic to the swap, not equal to it
    twisted[sq] = Fn(target.dom, target.cod, target.dom)
    mutant = make_cocc(psc, twisted, ac, cocc.te.obj_map)
    r = check_sec(mutant)
    assert not r and r.witness == (C.arr_name(swap),)
    assert r.data["formulations_agree"] is False
    # naturality of phi pins te(f;f), so the mutant is not even CoCC
    assert not check_cocc(mutant)


def test_imc_verdicts(terminal, group2, interval):
    for C, want in ((terminal, True), (group2, True), (interval, False)):
        c = search_cocc_any(C)
        assert bool(check_imc(c)) is want
    r = check_imc(search_cocc_any(interval))
    assert r.witness == ("f",)


def test_imc_cross_check_raises_on_disagreement(monkeypatch, interval):
    import catsym.symmetry as sym
    c = search_cocc_any(interval)
    monkeypatch.setattr(sym, "all_arrows_iso", lambda C: None)
    with pytest.raises(InternalDisagreement):
        sym.check_imc(c)


@pytest.mark.parametrize("n", range(1, 7))
def test_groups_are_imploded(n):
    C = samples.cyclic_group(n)
    assert check_imc(search_cocc_any(C))


def test_non_group_monoid_is_not_imploded():
    C = samples.monoid([[0, 1], [1, 1]])
    assert not check_imc(search_cocc_any(C))


@hypothesis.given(categories)
def test_cocc_invariants(C):
    c = search_cocc_any(C)
    assert c is not None and check_cocc(c)
    s, ac = c.psc, c.ac
    # te of a composite is the star of the te's
    for g in C.arrows:
        for f in C.arrows:
            if C.dom(g) == C.cod(f):
                lhs = c.te.ob(ac.j(C.compose(g, f)))
                assert lhs == s.star(c.te.ob(ac.j(g)), c.te.ob(ac.j(f)))
    for f in C.arrows:
        assert equal_up_to_iso(C, derived_arrow(c, f), f) is not None


@hypothesis.given(categories)
def test_sec_decomposition(C):
    c = search_cocc_any(C)
    if not check_sec(c):
        return
    tau, tau_inv = derive_tau(c)
    for x, o in enumerate(c.ac.objects):
        assert C.compose(tau_inv[x], tau[x]) == o.base_arr
    assert psi(c.ac).components == {x: C.compose(tau_inv[x], tau[x]) for x in c.ac.cat.objects}


@hypothesis.given(categories)
def test_imc_matches_all_iso(C):
    c = search_cocc_any(C)
    assert bool(check_imc(c)) == (all_arrows_iso(C) is None)


# -- lifted categories ---------------------------------------------------------


def test_terminal_lift_is_trivial(terminal):
    lift = lift_categories(search_psc(terminal))
    assert check_duality(lift)
    assert len(lift.conceptrep.arrows) == 1


def test_group2_conceptualized_arrows_coincide(group2):
    lift = lift_categories(search_psc(group2))
    assert len(lift.conceptrep.objects) == 1 and len(lift.conceptrep.arrows) == 1
    assert lift.D_inv is None
    r = check_duality(lift)
    assert not r and r.law == "D-not-injective" and r.witness == ("e", "g")


def test_interval_duality(interval):
    lift = lift_categories(search_psc(interval))
    assert check_duality(lift)
    for f in lift.arrowrep.arrows:
        assert lift.D_inv.ar(lift.D.ar(f)) == f
    assert lift.T.same_maps(compose_functors(lift.D, lift.M))


@hypothesis.given(categories)
def test_lift_functors(C):
    lift = lift_categories(search_psc(C))
    r = check_duality(lift)
    injective = len(set(lift.D.arr_map.values())) == len(lift.D.arr_map)
    assert bool(r) == injective


# -- classification ------------------------------------------------------------


def test_classify_terminal(terminal):
    h = classify(terminal)
    assert [v.status for v in h.layers().values()] == ["PASS"] * 4
    assert h.monotone()


def test_classify_interval(interval):
    h = classify(interval)
    assert [v.status for v in h.layers().values()] == ["PASS", "PASS", "PASS", "FAIL"]


def test_classify_with_bad_witness(interval):
    s = PscStructure(interval, {0: 0, 1: 1, 2: 0}, {(1, 0): 0, (1, 1): 1}, {0: 0, 1: 1})
    h = classify(interval, psc=s)
    assert h.psc.status == "FAIL" and h.cocc.status == "ABSENT"
    assert h.monotone()


def test_classify_budget(group2):
    C2 = build_arrow_category(group2).cat
    h = classify(C2, budget=3)
    assert h.psc.status == "BUDGET"


@hypothesis.given(categories)
def test_classify_is_monotone(C):
    assert classify(C).monotone()


def test_monotone_detects_violation(terminal):
    h = classify(terminal)
    h.psc.status = "FAIL"
    assert not h.monotone()
