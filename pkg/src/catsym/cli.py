"""``catsym`` command line.

Exit codes: 0 every requested verdict PASS, 1 a verdict FAIL/ABSENT,
2 usage or input error, 3 search budget or size cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .comma import Caps, LevelTower
from .core import FiniteCategory
from .errors import BudgetExceeded, CapExceeded, CategoryError, NoPscStructure
from .fileformat import CategoryFile, parse_category_file, print_category_file, print_psc
from .finset import build_model, check_set_claims, fn_name, set_name
from .internal import act, build_E, g, orbit
from .symmetry import DEFAULT_BUDGET, check_psc, classify, search_psc

LAYERS = ("psc", "cocc", "sec", "imc")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class Output:
    """Ordered key/value report, printed as ``key: value`` lines or JSON."""

    def __init__(self, command, digest=None):
        self.fields = {"command": command}
        if digest:
            self.fields["input"] = digest
        self.lines = []

    def __setitem__(self, key, value):
        self.fields[key] = value

    def emit(self, as_json, stream=None):
        stream = stream or sys.stdout
        if as_json:
            data = dict(self.fields)
            if self.lines:
                data["body"] = self.lines
            stream.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
            return
        for k, v in self.fields.items():
            stream.write(f"{k}: {_flat(v)}\n")
        for line in self.lines:
            stream.write(line + "\n")


def _flat(v):
    if isinstance(v, dict):
        return " ".join(f"{k}={_flat(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def read_input(path):
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    return data.decode("utf-8"), "sha256:" + hashlib.sha256(data).hexdigest()


def load(path) -> tuple[CategoryFile, str]:
    text, digest = read_input(path)
    return parse_category_file(text), digest


def _caps(args):
    caps = Caps.from_env()
    return Caps(
        max_objects=args.max_objects if args.max_objects is not None else caps.max_objects,
        max_arrows=args.max_arrows if args.max_arrows is not None else caps.max_arrows,
    )


def _verdict_fields(v):
    out = {"verdict": v.status}
    r = v.report
    if r is not None and not r.ok:
        out["law"] = r.law
        out["witness"] = list(r.witness)
        if r.detail:
            out["detail"] = r.detail
    return out


# -- commands ------------------------------------------------------------------


def cmd_check(args):
    cf, digest = load(args.path)
    t0 = time.perf_counter()
    h = classify(cf.category, psc=cf.psc, cocc=cf.cocc, budget=args.budget)
    out = Output("check", digest)
    requested = LAYERS if args.layer == "all" else (args.layer,)
    layers = h.layers()
    for name in LAYERS:
        out[name] = _verdict_fields(layers[name])
    out["requested"] = list(requested)
    out["monotone"] = "yes" if h.monotone() else "NO"
    if args.timings:
        out["seconds"] = round(time.perf_counter() - t0, 4)
    out.emit(args.json)
    statuses = [layers[n].status for n in requested]
    if "BUDGET" in statuses:
        return EXIT_LIMIT
    return EXIT_OK if all(s == "PASS" for s in statuses) else EXIT_FAIL


def renamed(L: FiniteCategory):
    ids = {L.identity(a): a for a in L.objects}
    obj_names = [f"x{a}" for a in L.objects]
    arr_names = [f"id_x{ids[f]}" if f in ids else f"s{f}" for f in L.arrows]
    return FiniteCategory(obj_names, arr_names, [L.dom(f) for f in L.arrows],
                          [L.cod(f) for f in L.arrows], [L.identity(a) for a in L.objects],
                          L.composition_table())


def cmd_level(args):
    cf, digest = load(args.path)
    if args.n < 1:
        raise argparse.ArgumentTypeError("--n must be at least 1")
    tower = LevelTower(cf.category, _caps(args))
    L = tower.level(args.n)
    header = [f"level {args.n} of {args.path} ({digest})",
              f"{len(L.objects)} objects, {len(L.arrows)} arrows"]
    if args.n == 1:
        sys.stdout.write(print_category_file(CategoryFile(L), header))
        return EXIT_OK
    ac = tower.arrow_category(args.n - 1)
    R = renamed(L)
    header += [f"{R.obj_name(x)} = {ac.describe_object(x)}" for x in L.objects]
    header += [f"{R.arr_name(s)} = {ac.describe_arrow(s)}" for s in L.arrows]
    sys.stdout.write(print_category_file(CategoryFile(R), header))
    return EXIT_OK


def _psc_for(cf, budget):
    psc = cf.psc or search_psc(cf.category, budget)
    if psc is None:
        raise NoPscStructure("no PSC structure exists on this category")
    r = check_psc(psc)
    if not r:
        raise NoPscStructure(f"the given PSC structure fails {r.law} at {' '.join(r.witness)}")
    return psc


def _resolve(C, name, kind):
    if kind in (None, "object") and name in C.obj_names:
        return C.obj(name), "object"
    if kind in (None, "arrow") and name in C.arr_names:
        return C.arr(name), "arrow"
    raise CategoryError(f"unknown {kind or 'object or arrow'} {name!r}")


def _name(C, x, kind):
    return C.obj_name(x) if kind == "object" else C.arr_name(x)


def cmd_apply_e(args):
    cf, digest = load(args.path)
    C = cf.category
    e = build_E(_psc_for(cf, args.budget))
    t, kind = _resolve(C, args.target, args.kind)
    result = act(g(args.n), e, t, kind)
    out = Output("apply-e", digest)
    out["target"] = args.target
    out["kind"] = kind
    out["power"] = args.n
    out["result"] = _name(C, result, kind)
    out.emit(args.json)
    return EXIT_OK


def cmd_orbit(args):
    cf, digest = load(args.path)
    C = cf.category
    e = build_E(_psc_for(cf, args.budget))
    t, kind = _resolve(C, args.target, args.kind)
    o = orbit(e, t, args.depth, kind)
    out = Output("orbit", digest)
    out["target"] = args.target
    out["kind"] = kind
    out["depth"] = args.depth
    out["orbit"] = [_name(C, x, kind) for x in o.elements]
    if kind == "object":
        out["witnesses"] = [C.arr_name(w) for w in o.witnesses]
    else:
        out["witnesses"] = [f"({C.arr_name(a)};{C.arr_name(b)})" for a, b in o.witnesses]
    out["cycle"] = f"start={o.cycle[0]} period={o.cycle[1]}" if o.cycle else "none"
    out.emit(args.json)
    return EXIT_OK


def cmd_search_psc(args):
    cf, digest = load(args.path)
    out = Output("search-psc", digest)
    s = search_psc(cf.category, args.budget)
    if s is None:
        out["result"] = "ABSENT"
        out["exhaustive"] = "yes"
        out.emit(args.json)
        return EXIT_FAIL
    out["result"] = "FOUND"
    out["check_psc"] = check_psc(s).verdict
    out.lines.extend(print_psc(s))
    out.emit(args.json)
    return EXIT_OK


def cmd_finset_demo(args):
    squares = args.ground <= 2 and not args.sampled
    model, psc, _ = build_model(args.ground, _caps(args), squares=squares)
    r = check_set_claims(model, samples=args.samples, seed=args.seed)
    C = model.cat
    out = Output("finset-demo")
    out["ground"] = args.ground
    out["objects"] = len(C.objects)
    out["arrows"] = len(C.arrows)
    out["mode"] = r.data.get("mode")
    for law, rep in r.data["laws"].items():
        out[f"law.{law}"] = rep.verdict + ("" if rep.ok else f" {rep.law} {' '.join(rep.witness)}")
    out["verdict"] = r.verdict
    if args.structures:
        for f in C.arrows:
            out.lines.append(f"psc.btop: {fn_name(f)} -> {set_name(psc.btop(f))}")
        for a in C.objects:
            out.lines.append(f"psc.iso: {set_name(a)} = {fn_name(psc.iso(a))}")
    out.emit(args.json)
    return EXIT_OK if r.ok else EXIT_FAIL


# -- argument parsing ----------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="catsym", description="Finite categories and their symmetry hierarchy.")
    p.add_argument("--version", action="version", version=f"catsym {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, path=True):
        if path:
            sp.add_argument("path", help="category file, or - for stdin")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
        sp.add_argument("--max-objects", type=int, default=None)
        sp.add_argument("--max-arrows", type=int, default=None)

    sp = sub.add_parser("check", help="classify a category in the hierarchy")
    common(sp)
    sp.add_argument("--layer", choices=LAYERS + ("all",), default="all")
    sp.add_argument("--timings", action="store_true", help="include wall-clock time")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("level", help="print the n-dimensional level C_n")
    common(sp)
    sp.add_argument("--n", type=int, default=2)
    sp.set_defaults(func=cmd_level)

    for name, func in (("apply-e", cmd_apply_e), ("orbit", cmd_orbit)):
        sp = sub.add_parser(name, help="act with E^n" if name == "apply-e" else "orbit under E")
        common(sp)
        sp.add_argument("--target", required=True)
        sp.add_argument("--kind", choices=("object", "arrow"), default=None)
        if name == "apply-e":
            sp.add_argument("--n", type=int, default=1)
        else:
            sp.add_argument("--depth", type=int, default=8)
        sp.set_defaults(func=func)

    sp = sub.add_parser("search-psc", help="search for a PSC structure")
    common(sp)
    sp.set_defaults(func=cmd_search_psc)

    sp = sub.add_parser("finset-demo", help="check the finite-set model")
    common(sp, path=False)
    sp.add_argument("--ground", type=int, default=2)
    sp.add_argument("--sampled", action="store_true", help="sample squares even for small grounds")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--structures", action="store_true", help="also print btop and iso")
    sp.set_defaults(func=cmd_finset_demo)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("n", "depth", "ground"):
        if getattr(args, flag, 0) is not None and getattr(args, flag, 0) < 0:
            parser.error(f"--{flag} must be non-negative")
    try:
        return args.func(args)
    except (BudgetExceeded, CapExceeded) as exc:
        print(f"catsym: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except NoPscStructure as exc:
        print(f"catsym: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (CategoryError, OSError, UnicodeDecodeError, argparse.ArgumentTypeError) as exc:
        print(f"catsym: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
