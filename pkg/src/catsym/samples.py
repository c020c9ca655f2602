"""Small named categories used throughout the tests and the CLI."""

from itertools import product

from .core import RawCategory, validate_category


def with_identity_composites(raw):
    """Fill in every composite that involves an identity arrow."""
    ids = set(raw.identities.values())
    comp = dict(raw.compose)
    for name, d, c in raw.arrows:
        comp.setdefault((name, raw.identities[d]), name)
        comp.setdefault((raw.identities[c], name), name)
    for i in ids:
        comp.setdefault((i, i), i)
    return RawCategory(list(raw.objects), list(raw.arrows), dict(raw.identities), comp)


def from_spec(objects, arrows=(), compose=None):
    """Build a category from object names, ``(name, dom, cod)`` arrows and
    the non-identity composites; identities are named ``id_<obj>``."""
    identities = {a: f"id_{a}" for a in objects}
    arrs = [(f"id_{a}", a, a) for a in objects] + list(arrows)
    raw = RawCategory(list(objects), arrs, identities, dict(compose or {}))
    return validate_category(with_identity_composites(raw))


def terminal():
    return from_spec(["•"])


def interval():
    """The category 2: a -f-> b."""
    return from_spec(["a", "b"], [("f", "a", "b")])


def group2():
    """Z/2 as a one-object category with arrows e, g and g.g = e."""
    raw = RawCategory(["•"], [("e", "•", "•"), ("g", "•", "•")], {"•": "e"},
                      {("g", "g"): "e"})
    return validate_category(with_identity_composites(raw))


def discrete(n):
    return from_spec([f"o{i}" for i in range(n)])


def indiscrete2():
    """Two objects with exactly one arrow each way (mutually inverse)."""
    return from_spec(
        ["a", "b"],
        [("u", "a", "b"), ("v", "b", "a")],
        {("v", "u"): "id_a", ("u", "v"): "id_b"},
    )


def monoid(table, names=None):
    """One-object category from a multiplication table with identity at 0."""
    n = len(table)
    names = names or [f"m{i}" for i in range(n)]
    comp = {(names[i], names[j]): names[table[i][j]] for i, j in product(range(n), repeat=2)}
    raw = RawCategory(["•"], [(x, "•", "•") for x in names], {"•": names[0]}, comp)
    return validate_category(raw)


def cyclic_group(n):
    return monoid([[(i + j) % n for j in range(n)] for i in range(n)])


CATALOGUE = {
    "terminal": terminal,
    "interval2": interval,
    "group2": group2,
    "indiscrete2": indiscrete2,
}
