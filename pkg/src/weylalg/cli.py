"""Command-line front end.

Element arguments are operator text such as ``"x1*d1+1"``.  List arguments
name a file with one element (or vector ``"(f1, f2)"``) per line; when no such
file exists the argument itself is read as a ``;``-separated list.  Results
go to stdout as text or as JSON with sorted keys, so identical inputs give
byte-identical output.

Exit codes: 0 on success, 1 on input errors or a failed check, 2 when an
iteration cap was hit.
"""

import argparse
import json
import random
import re
import sys
from pathlib import Path

from . import cyclic, groebner, stafford, structure
from .core import Context, ModuleVector, WeylElement, parse_element, parse_vector
from .errors import CapExceeded, NotFiniteLength, WeylError
from .orderings import parse_module_order

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAP = 2

_VAR = re.compile(r"[xd](\d+)")


class CheckFailed(Exception):
    """A verification subcommand answered ``false``."""


# ---------------------------------------------------------------------------
# input helpers


def _read_list(arg):
    p = Path(arg)
    if arg == "-":
        text = sys.stdin.read()
    elif p.is_file():
        text = p.read_text()
    else:
        return [s.strip() for s in arg.split(";") if s.strip()]
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _infer_n(texts):
    idx = [int(m) for t in texts for m in _VAR.findall(t)]
    return max(idx + [1])


def _is_vector_text(t):
    t = t.strip()
    return t[:1] in "([" and "," in t


def _elements(texts, ctx):
    return [parse_element(t, ctx) for t in texts]


def _vectors(texts, ctx):
    return [parse_vector(t, ctx) for t in texts]


def _module(texts, ctx):
    """Elements become an ideal, vectors a submodule of ``A^rank``."""
    if any(_is_vector_text(t) for t in texts):
        vecs = _vectors(texts, ctx)
        ranks = {v.rank for v in vecs}
        if len(ranks) != 1:
            raise ValueError(f"vectors of different ranks: {sorted(ranks)}")
        return groebner.LeftSubmodule(ctx, ranks.pop(), vecs)
    return groebner.LeftSubmodule.ideal(ctx, _elements(texts, ctx))


def _s(obj):
    if isinstance(obj, ModuleVector):
        return [str(c) for c in obj.components]
    if isinstance(obj, (list, tuple)):
        return [_s(o) for o in obj]
    return str(obj)


def _vec_or_elem(v):
    return str(v.components[0]) if isinstance(v, ModuleVector) and v.rank == 1 else _s(v)


# ---------------------------------------------------------------------------
# subcommands; each returns a JSON-able dict


def cmd_gb(args, ctx):
    texts = _read_list(args.generators)
    M = _module(texts, ctx)
    G = groebner.buchberger(M, args.order_obj, track=False, max_pairs=args.max_iter)
    return {"command": "gb", "n": ctx.n, "order": args.order, "rank": M.rank,
            "generators": [_vec_or_elem(g) for g in M.generators],
            "basis": [_vec_or_elem(g) for g in G.elements]}


def cmd_nf(args, ctx):
    texts = _read_list(args.generators)
    M = _module(texts, ctx)
    v = parse_vector(args.element, ctx) if M.rank > 1 else parse_element(args.element, ctx)
    G = groebner.buchberger(M, args.order_obj, track=False, max_pairs=args.max_iter)
    rem, quots = groebner.normal_form(v, G)
    return {"command": "nf", "n": ctx.n, "order": args.order, "rank": M.rank,
            "element": _vec_or_elem(v if isinstance(v, ModuleVector) else ModuleVector(ctx, [v])),
            "basis": [_vec_or_elem(g) for g in G.elements],
            "quotients": _s(quots), "remainder": _vec_or_elem(rem)}


def cmd_member(args, ctx):
    texts = _read_list(args.generators)
    M = _module(texts, ctx)
    v = parse_vector(args.element, ctx) if M.rank > 1 else parse_element(args.element, ctx)
    coeffs = groebner.lift(v, M, args.order_obj, max_pairs=args.max_iter)
    vv = v if isinstance(v, ModuleVector) else ModuleVector(ctx, [v])
    return {"command": "member", "n": ctx.n, "rank": M.rank,
            "element": _vec_or_elem(vv),
            "generators": [_vec_or_elem(g) for g in M.generators],
            "member": coeffs is not None,
            "coefficients": None if coeffs is None else _s(coeffs)}


def cmd_syz(args, ctx):
    texts = _read_list(args.generators)
    M = _module(texts, ctx)
    S = groebner.syzygies(M, args.order_obj)
    return {"command": "syz", "n": ctx.n, "rank": M.rank,
            "generators": [_vec_or_elem(g) for g in M.generators],
            "syzygies": [_s(s) for s in S.generators]}


def cmd_intersect(args, ctx):
    M = _module(_read_list(args.first), ctx)
    N = _module(_read_list(args.second), ctx)
    K = groebner.intersect(M, N, args.order_obj)
    return {"command": "intersect", "n": ctx.n, "rank": M.rank,
            "first": [_vec_or_elem(g) for g in M.generators],
            "second": [_vec_or_elem(g) for g in N.generators],
            "intersection": [_vec_or_elem(g) for g in K.generators]}


def cmd_ann(args, ctx):
    texts = _read_list(args.relations)
    N = _module(texts, ctx) if texts else None
    gamma = parse_vector(args.vector, ctx)
    if N is None:
        N = groebner.LeftSubmodule(ctx, gamma.rank, [])
    L = groebner.annihilator(gamma, N, args.order_obj)
    return {"command": "ann", "n": ctx.n, "vector": _s(gamma),
            "relations": [_vec_or_elem(g) for g in N.generators],
            "annihilator": [str(g) for g in L.elements()]}


def cmd_simplicity(args, ctx):
    f = parse_element(args.element, ctx)
    cert = structure.simplicity_certificate(f)
    return {"command": "simplicity", "n": ctx.n, "element": str(f),
            "pairs": [[str(s), str(r)] for s, r in cert.pairs]}


def cmd_ore(args, ctx):
    f = parse_element(args.f, ctx)
    g = parse_element(args.g, ctx)
    pair = structure.right_ore(f, g) if args.right else structure.left_ore(f, g)
    return {"command": "ore", "n": ctx.n, "side": pair.side, "f": str(f), "g": str(g),
            "a": str(pair.a), "b": str(pair.b)}


def _presentation(args, ctx):
    gens = _read_list(args.generators)
    rels = _read_list(args.relations)
    vg = _vectors(gens, ctx)
    vr = _vectors(rels, ctx)
    ranks = {v.rank for v in vg + vr}
    if len(ranks) != 1:
        raise ValueError(f"vectors of different ranks: {sorted(ranks)}")
    return vg, cyclic.Presentation.from_vectors(ctx, ranks.pop(), vr)


def cmd_cyclic(args, ctx):
    vg, P = _presentation(args, ctx)
    res = cyclic.cyclic_generator(vg, P, cap=args.max_iter or cyclic.DEFAULT_DEPTH_CAP)
    return {"command": "cyclic", "n": ctx.n, "rank": P.rank,
            "generators": [_s(v) for v in vg],
            "relations": [_s(v) for v in P.relations.generators],
            "gamma": _s(res.gamma),
            "expressors": _s(res.expressors), "combiner": _s(res.combiner)}


def cmd_stafford(args, ctx):
    gens = _elements(_read_list(args.generators), ctx)
    if args.a1_fast:
        if ctx.n != 1:
            raise ValueError("--a1-fast needs n = 1")
        tg = stafford.two_generators_a1(gens)
    else:
        tg = stafford.two_generators(gens)
    return {"command": "stafford", "n": ctx.n, "inputs": _s(tg.inputs),
            "p": str(tg.p), "q": str(tg.q),
            "forward": [_s(list(fw)) for fw in tg.forward],
            "backward": [_s(list(bw)) for bw in tg.backward],
            "verified": tg.verify()}


def cmd_verify_equal(args, ctx):
    a = _elements(_read_list(args.first), ctx)
    b = _elements(_read_list(args.second), ctx)
    ok = stafford.verify_same_ideal(a, b)
    out = {"command": "verify-equal", "n": ctx.n, "first": _s(a), "second": _s(b), "equal": ok}
    if not ok:
        raise CheckFailed(out)
    return out


def cmd_random(args, ctx):
    rng = random.Random(args.seed)
    out = []
    for _ in range(args.count):
        terms = {}
        for _ in range(rng.randint(1, args.terms)):
            deg = rng.randint(0, args.degree)
            e = [0] * (2 * ctx.n)
            for _ in range(deg):
                e[rng.randrange(2 * ctx.n)] += 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + rng.randint(-5, 5)
        f = WeylElement.from_terms(ctx, terms)
        out.append(str(f))
    return {"command": "random", "n": ctx.n, "seed": args.seed, "elements": out}


# ---------------------------------------------------------------------------
# certificate checking


def _verify_certificate(cert):
    """Re-check a JSON result of another subcommand; returns a bool."""
    ctx = Context(int(cert["n"]))
    P = lambda t: parse_element(t, ctx)  # noqa: E731
    kind = cert.get("command")

    def vec(x):
        return ModuleVector(ctx, [P(t) for t in x]) if isinstance(x, list) else ModuleVector(ctx, [P(x)])

    if kind == "simplicity":
        f = P(cert["element"])
        return structure.SimplicityCertificate(f, tuple((P(s), P(r)) for s, r in cert["pairs"])).verify()
    if kind == "ore":
        pair = structure.OrePair(P(cert["f"]), P(cert["g"]), P(cert["a"]), P(cert["b"]), cert["side"])
        return pair.verify()
    if kind == "stafford":
        tg = stafford.TwoGenerators(
            P(cert["p"]), P(cert["q"]), tuple(P(t) for t in cert["inputs"]),
            tuple(tuple(P(t) for t in fw) for fw in cert["forward"]),
            tuple(tuple(P(t) for t in bw) for bw in cert["backward"]))
        return tg.verify()
    if kind == "member":
        if not cert["member"]:
            return groebner.lift(vec(cert["element"]), groebner.LeftSubmodule(
                ctx, int(cert["rank"]), [vec(g) for g in cert["generators"]])) is None
        acc = vec(cert["element"])
        for c, g in zip(cert["coefficients"], cert["generators"]):
            acc = acc - P(c) * vec(g)
        return acc.is_zero()
    if kind == "gb":
        rank = int(cert["rank"])
        M = groebner.LeftSubmodule(ctx, rank, [vec(g) for g in cert["generators"]])
        B = groebner.LeftSubmodule(ctx, rank, [vec(g) for g in cert["basis"]])
        return groebner.modules_equal(M, B)
    if kind == "nf":
        rank = int(cert["rank"])
        basis = [vec(g) for g in cert["basis"]]
        acc = vec(cert["element"]) - vec(cert["remainder"])
        for q, g in zip(cert["quotients"], basis):
            acc = acc - P(q) * g
        return acc.is_zero()
    if kind == "syz":
        gens = [vec(g) for g in cert["generators"]]
        for s in cert["syzygies"]:
            acc = ModuleVector(ctx, [ctx.zero()] * int(cert["rank"]))
            for c, g in zip(s, gens):
                acc = acc + P(c) * g
            if not acc.is_zero():
                return False
        return True
    if kind == "intersect":
        rank = int(cert["rank"])
        M = groebner.LeftSubmodule(ctx, rank, [vec(g) for g in cert["first"]])
        N = groebner.LeftSubmodule(ctx, rank, [vec(g) for g in cert["second"]])
        K = groebner.LeftSubmodule(ctx, rank, [vec(g) for g in cert["intersection"]])
        return groebner.modules_equal(K, groebner.intersect(M, N))
    if kind == "ann":
        gamma = vec(cert["vector"])
        N = groebner.LeftSubmodule(ctx, gamma.rank, [vec(g) for g in cert["relations"]])
        L = groebner.LeftSubmodule.ideal(ctx, [P(t) for t in cert["annihilator"]])
        return groebner.modules_equal(L, groebner.annihilator(gamma, N))
    if kind == "cyclic":
        rank = int(cert["rank"])
        Pr = cyclic.Presentation.from_vectors(ctx, rank, [vec(g) for g in cert["relations"]])
        res = cyclic.CyclicResult(vec(cert["gamma"]), tuple(vec(g) for g in cert["generators"]),
                                  tuple(P(t) for t in cert["expressors"]),
                                  tuple(P(t) for t in cert["combiner"]))
        return res.verify(Pr)
    if kind == "verify-equal":
        return stafford.verify_same_ideal([P(t) for t in cert["first"]], [P(t) for t in cert["second"]])
    raise ValueError(f"cannot verify certificates of kind {kind!r}")


def cmd_verify(args, ctx):
    cert = json.loads(Path(args.certificate).read_text() if args.certificate != "-" else sys.stdin.read())
    ok = _verify_certificate(cert)
    out = {"command": "verify", "kind": cert.get("command"), "valid": ok}
    if not ok:
        raise CheckFailed(out)
    return out


# ---------------------------------------------------------------------------
# text rendering


def _render_text(res):
    lines = []
    for k in sorted(res):
        if k == "command":
            continue
        v = res[k]
        if isinstance(v, list):
            lines.append(f"{k}:")
            for item in v:
                lines.append(f"  {json.dumps(item) if isinstance(item, list) else item}")
        else:
            lines.append(f"{k}: {json.dumps(v) if isinstance(v, bool) or v is None else v}")
    return "\n".join(lines)


def build_parser():
    p = argparse.ArgumentParser(prog="weylalg", description="Exact computations in the Weyl algebra A_n(Q).")
    p.add_argument("--n", type=int, help="number of variable pairs (default: inferred from the input)")
    p.add_argument("--order", default="grevlex", help="grevlex, lex (= deglex) or elim:d2,d3; append :top for term-over-position")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for the random subcommand")
    p.add_argument("--max-iter", type=int, help="S-pair budget for basis computations")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gb", help="Gröbner basis")
    s.add_argument("generators")
    s.set_defaults(func=cmd_gb, inputs=("generators",))

    s = sub.add_parser("nf", help="normal form with quotients")
    s.add_argument("element")
    s.add_argument("generators")
    s.set_defaults(func=cmd_nf, inputs=("element", "generators"))

    s = sub.add_parser("member", help="membership with a lift")
    s.add_argument("element")
    s.add_argument("generators")
    s.set_defaults(func=cmd_member, inputs=("element", "generators"))

    s = sub.add_parser("syz", help="syzygies of the generators")
    s.add_argument("generators")
    s.set_defaults(func=cmd_syz, inputs=("generators",))

    s = sub.add_parser("intersect", help="intersection of two submodules")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_intersect, inputs=("first", "second"))

    s = sub.add_parser("ann", help="annihilator of a vector modulo relations")
    s.add_argument("vector")
    s.add_argument("relations", nargs="?", default="")
    s.set_defaults(func=cmd_ann, inputs=("vector", "relations"))

    s = sub.add_parser("simplicity", help="certificate sum s_i f r_i = 1")
    s.add_argument("element")
    s.set_defaults(func=cmd_simplicity, inputs=("element",))

    s = sub.add_parser("ore", help="common multiple a f = b g (or f a = g b)")
    s.add_argument("f")
    s.add_argument("g")
    side = s.add_mutually_exclusive_group()
    side.add_argument("--left", action="store_true", default=True)
    side.add_argument("--right", action="store_true")
    s.set_defaults(func=cmd_ore, inputs=("f", "g"))

    s = sub.add_parser("cyclic", help="cyclic generator of a finite-length module")
    s.add_argument("generators")
    s.add_argument("relations")
    s.set_defaults(func=cmd_cyclic, inputs=("generators", "relations"))

    s = sub.add_parser("stafford", help="two generators of a left ideal")
    s.add_argument("--generators", required=True)
    s.add_argument("--a1-fast", action="store_true", help="use the cyclic-module method in A_1")
    s.set_defaults(func=cmd_stafford, inputs=("generators",))

    s = sub.add_parser("verify-equal", help="do two generator lists give the same left ideal")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_verify_equal, inputs=("first", "second"))

    s = sub.add_parser("verify", help="re-check a JSON result")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify, inputs=())

    s = sub.add_parser("random", help="seeded random elements")
    s.add_argument("--count", type=int, default=5)
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--terms", type=int, default=3)
    s.set_defaults(func=cmd_random, inputs=())
    return p


_LIST_INPUTS = {"generators", "relations", "first", "second"}


def _context(args):
    if args.n is not None:
        if args.n < 1:
            raise ValueError("--n must be at least 1")
        return Context(args.n)
    texts = []
    for name in args.inputs:
        val = getattr(args, name)
        if not val:
            continue
        texts.extend(_read_list(val) if name in _LIST_INPUTS else [val])
    return Context(_infer_n(texts))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = _context(args)
        args.order_obj = parse_module_order(args.order, ctx.n)
        res = args.func(args, ctx)
        code = EXIT_OK
    except CheckFailed as exc:
        res, code = exc.args[0], EXIT_INPUT
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (WeylError, ValueError, OSError, NotFiniteLength, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(res, sort_keys=True, indent=2))
    else:
        print(_render_text(res))
    return code


if __name__ == "__main__":
    sys.exit(main())
