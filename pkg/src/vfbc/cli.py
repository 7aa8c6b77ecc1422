"""Command-line front end.

Exit codes: 0 success (or a computed "true"), 1 domain error, 2 usage or
parse error, 3 a computed "false".  Errors go to stderr as ``error: Name: msg``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import construct as cn
from . import hierarchy as hi
from . import stallings as st
from .errors import ParseError, VfbcError
from .words import parse_word, parse_word_list

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_FALSE = 0, 1, 2, 3


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _bool(args, value: bool) -> int:
    if args.json:
        _emit({"result": value})
    else:
        print("true" if value else "false")
    return EXIT_OK if value else EXIT_FALSE


def _subgroup(text: str, rank: int) -> st.Subgroup:
    return st.subgroup_graph(parse_word_list(text, rank), rank)


def _words(ws) -> list[str]:
    return [str(w) for w in ws]


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if not arg.lstrip().startswith(("(", "!")) and Path(arg).is_file():
        return Path(arg).read_text()
    return arg


def _graph_out(args, g: st.StallingsGraph) -> int:
    if args.dot:
        sys.stdout.write(g.to_dot())
    elif args.json:
        _emit({"vertices": g.num_vertices, "base": g.base, "rank": g.rank,
               "edges": [[s, t, l] for s, t, l in g.edges]})
    else:
        sys.stdout.write(g.to_text())
    return EXIT_OK


# -- subgroup commands ----------------------------------------------------------

def cmd_fold(args) -> int:
    if args.graph:
        g = st.graph_from_text(_read_text(args.graph), args.rank)
    else:
        g = st.wedge(parse_word_list(args.gens or "", args.rank), args.rank)
    return _graph_out(args, st.canonical(st.fold(g)))


def cmd_core(args) -> int:
    H = _subgroup(args.gens, args.rank)
    if args.unbased:
        H = st.unbased_core(H)
    return _graph_out(args, H.graph)


def cmd_rank(args) -> int:
    r = st.rank(_subgroup(args.gens, args.rank))
    _emit({"rank": r}) if args.json else print(r)
    return EXIT_OK


def cmd_basis(args) -> int:
    b = _words(st.basis(_subgroup(args.gens, args.rank)))
    _emit({"basis": b}) if args.json else print(",".join(b))
    return EXIT_OK


def cmd_member(args) -> int:
    return _bool(args, st.contains(_subgroup(args.gens, args.rank), parse_word(args.word, args.rank)))


def cmd_index(args) -> int:
    i = st.index(_subgroup(args.gens, args.rank))
    text = "inf" if i == st.INFINITE else str(i)
    _emit({"index": text}) if args.json else print(text)
    return EXIT_OK


def cmd_intersect(args) -> int:
    I = st.intersection(_subgroup(args.H, args.rank), _subgroup(args.K, args.rank))
    b = _words(st.basis(I))
    _emit({"basis": b, "rank": I.rank}) if args.json else print(",".join(b) or "1")
    return EXIT_OK


def cmd_pullback(args) -> int:
    comps = st.pullback(_subgroup(args.H, args.rank), _subgroup(args.K, args.rank))
    rows = []
    for c in comps:
        rows.append({
            "anchor": list(c.anchor),
            "vertices": len(c.vertices),
            "betti": c.betti,
            "non_contractible": c.non_contractible,
            "conjugator": str(c.conjugator),
            "intersection": None if c.intersection is None else _words(st.basis(c.intersection)),
        })
    if args.json:
        _emit({"components": rows})
        return EXIT_OK
    for k, row in enumerate(rows):
        inter = "1" if row["intersection"] is None else ",".join(row["intersection"])
        print(f"{k} anchor={tuple(row['anchor'])} vertices={row['vertices']} betti={row['betti']} "
              f"conjugator={row['conjugator']} intersection=<{inter}>")
    return EXIT_OK


def cmd_malnormal(args) -> int:
    return _bool(args, st.is_malnormal(_subgroup(args.gens, args.rank)))


def cmd_separated(args) -> int:
    H, K = _subgroup(args.H, args.rank), _subgroup(args.K, args.rank)
    return _bool(args, st.conjugates_meet_trivially(H, K))


def cmd_freiheit(args) -> int:
    chosen = _words(st.select_free_subset(parse_word_list(args.gens, args.rank), args.rank))
    _emit({"free_subset": chosen}) if args.json else print(",".join(chosen))
    return EXIT_OK


# -- construction ---------------------------------------------------------------

def _avoid(args) -> list[st.Subgroup]:
    return [_subgroup(a, args.rank) for a in args.avoid]


def cmd_construct(args) -> int:
    avoid = _avoid(args)
    problem = cn.AvoidanceProblem(args.rank, args.n, tuple(avoid), args.seed,
                                  args.budget if args.budget is not None else cn.ATTEMPT_CAP)
    cert = cn.construct_malnormal(problem)
    if args.verify:
        cert = cn.verify_certificate(cn.Certificate.loads(cert.dumps()), avoid)
    print(cert.dumps())
    return EXIT_OK if cert.valid else EXIT_FALSE


def cmd_verify(args) -> int:
    cert = cn.Certificate.loads(_read_text(args.certificate))
    args.rank = cert.generators[0].rank if cert.generators else args.rank
    cert = cn.verify_certificate(cert, _avoid(args))
    print(cert.dumps())
    return EXIT_OK if cert.valid else EXIT_FALSE


# -- hierarchies and decisions ----------------------------------------------------

def _report(args, rep: hi.BettiReport) -> int:
    if args.json:
        _emit(rep.to_json())
        return EXIT_OK
    print(f"euler_char {rep.euler_char}")
    for i, b in sorted(rep.betti.items()):
        print(f"b{i} {b}")
    print(f"cd_bound {rep.cd_bound}")
    for a in rep.assumptions:
        print(f"assume {a}")
    return EXIT_OK


def cmd_hierarchy(args) -> int:
    h = hi.parse_hierarchy(_read_text(args.source))
    if args.action == "chi":
        chi = hi.euler_char(h)
        _emit({"euler_char": str(chi)}) if args.json else print(chi)
        return EXIT_OK
    return _report(args, hi.betti(h))


def cmd_one_relator(args) -> int:
    return _report(args, hi.one_relator_betti(args.num_gens))


def cmd_ascending_hnn(args) -> int:
    return _report(args, hi.ascending_hnn_betti(args.a, args.b))


def cmd_decide(args) -> int:
    if args.preset:
        v = hi.PRESETS[args.preset].decide()
    else:
        v = hi.decide_vfbc(args.hyperbolic, args.vcs, args.cd2, args.b2zero, args.cd_exceeds_2)
    if args.json:
        _emit(v.to_json())
    else:
        print(v.value)
        for r in v.reasons:
            print(f"  {r}")
    return EXIT_OK


def cmd_bourdon(args) -> int:
    return _bool(args, hi.bourdon_vfbc(args.p, args.q))


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, default=2, help="ambient free rank (default 2)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--dot", action="store_true", help="DOT output for graphs")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--budget", type=int, default=None, help="attempt cap for random search")
    common.add_argument("--verify", action="store_true", help="re-verify results independently")

    parser = argparse.ArgumentParser(prog="vfbc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("fold", cmd_fold, "fold a wedge of generators (or a graph file) without pruning")
    p.add_argument("gens", nargs="?", help="comma-separated generators")
    p.add_argument("--graph", help="graph file in V/E text format, or - for stdin")
    p = add("core", cmd_core, "core graph of a subgroup")
    p.add_argument("gens")
    p.add_argument("--unbased", action="store_true", help="drop the basepoint hair")
    add("rank", cmd_rank, "rank of a subgroup").add_argument("gens")
    add("basis", cmd_basis, "spanning-tree free basis").add_argument("gens")
    p = add("member", cmd_member, "membership test")
    p.add_argument("gens")
    p.add_argument("word")
    add("index", cmd_index, "index in the ambient free group").add_argument("gens")
    for name, func, text in (("intersect", cmd_intersect, "H ∩ K"),
                             ("pullback", cmd_pullback, "fiber product components"),
                             ("separated", cmd_separated, "do all conjugates of K meet H trivially")):
        p = add(name, func, text)
        p.add_argument("H")
        p.add_argument("K")
    add("malnormal", cmd_malnormal, "malnormality test").add_argument("gens")
    add("freiheit", cmd_freiheit, "greedy maximal free subset").add_argument("gens")

    p = add("construct", cmd_construct, "malnormal subgroup avoiding conjugates of given subgroups")
    p.add_argument("-n", type=int, required=True, help="target rank")
    p.add_argument("--avoid", action="append", default=[], help="subgroup to avoid (repeatable)")
    p = add("verify", cmd_verify, "re-check a certificate")
    p.add_argument("certificate", help="certificate JSON file, or - for stdin")
    p.add_argument("--avoid", action="append", default=[], help="subgroup to avoid (repeatable)")

    p = add("hierarchy", cmd_hierarchy, "Euler characteristic and L2-Betti numbers of a hierarchy")
    p.add_argument("action", choices=["betti", "chi"])
    p.add_argument("source", help="hierarchy text, a file, or - for stdin")
    add("one-relator", cmd_one_relator, "one-relator group").add_argument("num_gens", type=int)
    p = add("ascending-hnn", cmd_ascending_hnn, "ascending HNN extension of a free group")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p = add("decide", cmd_decide, "is the group virtually free-by-cyclic")
    p.add_argument("--hyperbolic", action="store_true")
    p.add_argument("--vcs", action="store_true", help="virtually compact special")
    p.add_argument("--cd2", action="store_true", help="rational cohomological dimension <= 2")
    p.add_argument("--b2zero", action="store_true", help="second L2-Betti number vanishes")
    p.add_argument("--cd-exceeds-2", action="store_true", help="rational cd known to exceed 2")
    p.add_argument("--preset", choices=sorted(hi.PRESETS))
    p = add("bourdon", cmd_bourdon, "Bourdon building lattices")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e.name}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VfbcError as e:
        print(f"error: {e.name}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except (json.JSONDecodeError, KeyError) as e:
        print(f"error: ParseError: malformed certificate: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
