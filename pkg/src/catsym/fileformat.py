"""Line-oriented category files.

::

    # comment
    objects: a b
    arrow: f: a -> b
    compose: g . f = h
    identity: a = e             # only when the identity is not named id_a
    psc.btop: f -> a
    psc.star: a * b = c
    psc.iso: a = u
    cocc.te: (h1;h2) -> k       # or (h1;h2) @ f @ g -> k to pin the square

Identities default to ``id_<obj>``; composites with an identity are inferred.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .comma import build_arrow_category
from .core import RawCategory, validate_category
from .errors import CatSyntaxError, DuplicateDefinition, ParseError, UnknownName
from .samples import with_identity_composites
from .symmetry import CoccStructure, PscStructure, make_cocc

NAME = re.compile(r"[^\s:.=*;()@#-]+")
DIRECTIVE = re.compile(r"\s*(objects|arrow|compose|identity|psc\.btop|psc\.star|psc\.iso|cocc\.te)\s*:")


@dataclass
class CategoryFile:
    category: object
    psc: PscStructure | None = None
    cocc: CoccStructure | None = None
    comments: list = field(default_factory=list)


class _Cursor:
    def __init__(self, text, lineno, pos=0):
        self.text, self.lineno, self.pos = text, lineno, pos

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def error(self, expected):
        return CatSyntaxError(self.lineno, self.pos + 1, expected)

    def name(self, what="a name"):
        self.skip()
        m = NAME.match(self.text, self.pos)
        if not m:
            raise self.error(what)
        self.pos = m.end()
        return m.group()

    def lit(self, tok):
        self.skip()
        if not self.text.startswith(tok, self.pos):
            raise self.error(repr(tok))
        self.pos += len(tok)

    def peek(self, tok):
        self.skip()
        return self.text.startswith(tok, self.pos)

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def end(self):
        if not self.at_end():
            raise self.error("end of line")


def _strip_comment(line):
    i = line.find("#")
    return (line, None) if i < 0 else (line[:i], line[i + 1:].strip())


def parse_category_file(text: str) -> CategoryFile:
    objects, arrows, compose, identity = [], [], [], []
    btop, star, iso, te = [], [], [], []
    comments = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body, comment = _strip_comment(line)
        if comment is not None and not body.strip():
            comments.append(comment)
        if not body.strip():
            continue
        m = DIRECTIVE.match(body)
        if not m:
            raise CatSyntaxError(lineno, len(body) - len(body.lstrip()) + 1, "a directive")
        kind = m.group(1)
        cur = _Cursor(body, lineno, m.end())
        if kind == "objects":
            names = []
            while not cur.at_end():
                names.append(cur.name("an object name"))
            objects.extend((n, lineno) for n in names)
            continue
        if kind == "arrow":
            f = cur.name("an arrow name")
            cur.lit(":")
            a = cur.name("an object name")
            cur.lit("->")
            b = cur.name("an object name")
            arrows.append((f, a, b, lineno))
        elif kind == "compose":
            g = cur.name()
            cur.lit(".")
            f = cur.name()
            cur.lit("=")
            h = cur.name()
            compose.append((g, f, h, lineno))
        elif kind == "identity":
            a = cur.name("an object name")
            cur.lit("=")
            identity.append((a, cur.name("an arrow name"), lineno))
        elif kind == "psc.btop":
            f = cur.name("an arrow name")
            cur.lit("->")
            btop.append((f, cur.name("an object name"), lineno))
        elif kind == "psc.star":
            x = cur.name("an object name")
            cur.lit("*")
            y = cur.name("an object name")
            cur.lit("=")
            star.append((x, y, cur.name("an object name"), lineno))
        elif kind == "psc.iso":
            a = cur.name("an object name")
            cur.lit("=")
            iso.append((a, cur.name("an arrow name"), lineno))
        else:
            cur.lit("(")
            h1 = cur.name("an arrow name")
            cur.lit(";")
            h2 = cur.name("an arrow name")
            cur.lit(")")
            src = dst = None
            if cur.peek("@"):
                cur.lit("@")
                src = cur.name("an arrow name")
                cur.lit("@")
                dst = cur.name("an arrow name")
            cur.lit("->")
            te.append((h1, h2, src, dst, cur.name("an arrow name"), lineno))
        cur.end()

    C = _build_category(objects, arrows, compose, identity)
    psc = _build_psc(C, btop, star, iso) if (btop or star or iso) else None
    cocc = None
    if te:
        if psc is None:
            raise ParseError("cocc.te entries need a psc section")
        cocc = _build_cocc(C, psc, te)
    return CategoryFile(C, psc, cocc, comments)


def _build_category(objects, arrows, compose, identity):
    objs, seen = [], set()
    for name, line in objects:
        if name in seen:
            raise DuplicateDefinition(name, line)
        seen.add(name)
        objs.append(name)
    arrs, aseen = [], {}
    for f, a, b, line in arrows:
        if f in aseen:
            raise DuplicateDefinition(f, line)
        for o in (a, b):
            if o not in seen:
                raise UnknownName(o, line)
        aseen[f] = (a, b)
        arrs.append((f, a, b))
    ids = {}
    for a, e, line in identity:
        if a not in seen:
            raise UnknownName(a, line)
        if e not in aseen:
            raise UnknownName(e, line)
        if a in ids:
            raise DuplicateDefinition(f"identity of {a}", line)
        ids[a] = e
    for a in objs:
        if a in ids:
            continue
        name = f"id_{a}"
        if name in aseen:
            if aseen[name] != (a, a):
                raise DuplicateDefinition(name)
        else:
            arrs.append((name, a, a))
            aseen[name] = (a, a)
        ids[a] = name
    comp = {}
    for g, f, h, line in compose:
        for n in (g, f, h):
            if n not in aseen:
                raise UnknownName(n, line)
        if (g, f) in comp:
            raise DuplicateDefinition(f"{g} . {f}", line)
        comp[g, f] = h
    raw = with_identity_composites(RawCategory(objs, arrs, ids, comp))
    return validate_category(raw)


def _lookup(table, name, line):
    try:
        return table(name)
    except UnknownName:
        raise UnknownName(name, line) from None


def _build_psc(C, btop, star, iso):
    bt, st, iso_map = {}, {}, {}
    for f, x, line in btop:
        fi = _lookup(C.arr, f, line)
        if fi in bt:
            raise DuplicateDefinition(f"psc.btop {f}", line)
        bt[fi] = _lookup(C.obj, x, line)
    for x, y, z, line in star:
        key = (_lookup(C.obj, x, line), _lookup(C.obj, y, line))
        if key in st:
            raise DuplicateDefinition(f"psc.star {x} * {y}", line)
        st[key] = _lookup(C.obj, z, line)
    for a, u, line in iso:
        ai = _lookup(C.obj, a, line)
        if ai in iso_map:
            raise DuplicateDefinition(f"psc.iso {a}", line)
        iso_map[ai] = _lookup(C.arr, u, line)
    return PscStructure(C, bt, st, iso_map)


def _build_cocc(C, psc, te):
    ac = build_arrow_category(C)
    by_arrows = {}
    for s, sq in enumerate(ac.squares):
        by_arrows.setdefault((sq.h1, sq.h2), []).append(s)
    arr_map = {}
    for h1, h2, src, dst, k, line in te:
        key = (_lookup(C.arr, h1, line), _lookup(C.arr, h2, line))
        found = by_arrows.get(key, [])
        if src is not None:
            si, di = ac.j(_lookup(C.arr, src, line)), ac.j(_lookup(C.arr, dst, line))
            found = [s for s in found if ac.cat.dom(s) == si and ac.cat.cod(s) == di]
        if not found:
            raise ParseError(f"line {line}: ({h1};{h2}) is not a commuting square")
        if len(found) > 1:
            raise ParseError(f"line {line}: ({h1};{h2}) is ambiguous; add '@ f @ g'")
        s = found[0]
        if s in arr_map:
            raise DuplicateDefinition(f"cocc.te ({h1};{h2})", line)
        arr_map[s] = _lookup(C.arr, k, line)
    te_objects = {}
    for x in ac.cat.objects:
        s = ac.cat.identity(x)
        if s in arr_map:
            te_objects[x] = C.dom(arr_map[s])
    return make_cocc(psc, arr_map, ac, te_objects)


def print_category_file(cf: CategoryFile, header=()) -> str:
    """Canonical text; ``parse_category_file`` of it gives back an equal structure."""
    C = cf.category
    lines = [f"# {h}" for h in header]
    lines.append(" ".join(["objects:"] + [C.obj_name(a) for a in C.objects]))
    ids = {C.identity(a): a for a in C.objects}
    for f in C.arrows:
        lines.append(f"arrow: {C.arr_name(f)}: {C.obj_name(C.dom(f))} -> {C.obj_name(C.cod(f))}")
    for a in C.objects:
        e = C.arr_name(C.identity(a))
        if e != f"id_{C.obj_name(a)}":
            lines.append(f"identity: {C.obj_name(a)} = {e}")
    for g in C.arrows:
        if g in ids:
            continue
        for f in C.arrows:
            if f not in ids and C.dom(g) == C.cod(f):
                lines.append(f"compose: {C.arr_name(g)} . {C.arr_name(f)} = {C.arr_name(C.compose(g, f))}")
    if cf.psc is not None:
        lines.extend(print_psc(cf.psc))
    if cf.cocc is not None:
        c, ac = cf.cocc, cf.cocc.ac
        for s in ac.cat.arrows:
            if s in c.te.arr_map:
                sq = ac.squares[s]
                lines.append(f"cocc.te: ({C.arr_name(sq.h1)};{C.arr_name(sq.h2)}) @ "
                             f"{C.arr_name(sq.src.base_arr)} @ {C.arr_name(sq.dst.base_arr)} -> "
                             f"{C.arr_name(c.te.arr_map[s])}")
    return "\n".join(lines) + "\n"


def print_psc(s: PscStructure):
    C = s.cat
    lines = [f"psc.btop: {C.arr_name(f)} -> {C.obj_name(x)}" for f, x in sorted(s.btop_map.items())]
    for (x, y), z in sorted(s.star_table.items()):
        lines.append(f"psc.star: {C.obj_name(x)} * {C.obj_name(y)} = {C.obj_name(z)}")
    lines.extend(f"psc.iso: {C.obj_name(a)} = {C.arr_name(u)}" for a, u in sorted(s.iso_map.items()))
    return lines


def same_structure(x: CategoryFile, y: CategoryFile) -> bool:
    """Equality of categories and witness tables (by name)."""
    if x.category != y.category:
        return False
    for a, b in ((x.psc, y.psc),):
        if (a is None) != (b is None):
            return False
        if a is not None and (a.btop_map, a.star_table, a.iso_map) != (b.btop_map, b.star_table, b.iso_map):
            return False
    if (x.cocc is None) != (y.cocc is None):
        return False
    if x.cocc is not None:
        return x.cocc.te.arr_map == y.cocc.te.arr_map and x.cocc.te.obj_map == y.cocc.te.obj_map
    return True
