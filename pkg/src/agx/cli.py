"""``agx`` command line front end.

Every command reads an automaton JSON document (``-`` for stdin) except
``family``, which writes one.  Results go to stdout as JSON unless an export
flag (``--csv``, ``--dot``, ``--json``) is pointed at ``-``.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import classification as cl
from . import families, schreier, wordproblem
from .core import Automaton, minimize, validate_automaton
from .errors import AgxError, BudgetExceeded
from .words import EPWord, GroupWord, digits


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise AgxError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _load(args) -> Automaton:
    return Automaton.loads(_read(args.automaton))


def _emit(args, payload, exports=()):
    """Write exports; print the JSON payload unless an export claimed stdout."""
    to_stdout = False
    for path, text in exports:
        if path is None:
            continue
        _write(path, text)
        to_stdout |= path == "-"
    if not to_stdout:
        _write(args.output, json.dumps(payload, indent=2, sort_keys=False) + "\n")


def _epword(args) -> EPWord:
    per = digits(args.per)
    if not per:
        raise UsageError("--per must be a nonempty word")
    return EPWord(digits(args.pre), per)


def cmd_validate(args):
    a = _load(args)
    _emit(args, validate_automaton(a).to_dict())


def cmd_minimize(args):
    _emit(args, minimize(_load(args)).to_document())


def cmd_classify(args):
    _emit(args, cl.classify(_load(args)).to_dict())


def cmd_nucleus(args):
    a = _load(args)
    _emit(args, cl.nucleus(a, args.depth_cap, args.size_cap).to_dict())


def cmd_wordproblem(args):
    a = _load(args)
    g = GroupWord.parse(args.word)
    payload = {"word": str(g), "trivial": wordproblem.is_trivial(a, g)}
    if args.equal is not None:
        h = GroupWord.parse(args.equal)
        payload["other"] = str(h)
        payload["equal"] = wordproblem.are_equal(a, g, h)
    _emit(args, payload)


def cmd_order(args):
    a = _load(args)
    g = GroupWord.parse(args.word)
    _emit(args, {"word": str(g), "max_order": args.max_order,
                 "order": wordproblem.order_probe(a, g, args.max_order)})


def cmd_schreier(args):
    a = _load(args)
    g = schreier.schreier_level_graph(a, args.level)
    met = schreier.graph_metrics(g)
    payload = {"level": args.level, "vertices": len(g), "edges": len(g.edges), **met.to_dict()}
    _emit(args, payload, [(args.dot, g.to_dot() if args.dot else None),
                          (args.json, g.to_json() if args.json else None)])


def cmd_ball(args):
    a = _load(args)
    w = _epword(args)
    g = schreier.orbital_ball(a, w, args.radius)
    payload = {"basepoint": str(w), "radius": args.radius, "vertices": len(g), "edges": len(g.edges)}
    _emit(args, payload, [(args.dot, g.to_dot() if args.dot else None),
                          (args.json, g.to_json() if args.json else None)])


def cmd_growth(args):
    a = _load(args)
    w = _epword(args)
    try:
        series = schreier.growth_series(a, w, args.rmax, budget=args.budget)
    except BudgetExceeded as exc:
        if args.csv:
            _write(args.csv, exc.partial.to_csv())
        exc.partial = exc.partial.to_dict()
        raise
    _emit(args, series.to_dict(), [(args.csv, series.to_csv() if args.csv else None)])


def cmd_paths(args):
    a = _load(args)
    counts = [{"n": n, "paths": cl.activity_path_count(a, n)} for n in range(args.length + 1)]
    _emit(args, {"counts": counts})


def cmd_probe(args):
    a = _load(args)
    lengths = [int(t) for t in args.lengths.split(",") if t.strip()]
    table = cl.probe_weak_contraction(a, lengths, args.depth, args.samples, args.seed)
    _emit(args, table.to_dict(), [(args.csv, table.to_csv() if args.csv else None)])


def cmd_sphere(args):
    a = _load(args)
    reps = cl.restriction_sphere(a, digits(args.prefix), args.radius, args.size_cap)
    names = wordproblem.solver(a).sym.automaton.names
    _emit(args, {"prefix": args.prefix, "radius": args.radius, "size": len(reps),
                 "elements": [",".join(names[s] for s in r) or "e" for r in reps]})


def cmd_family(args):
    a = families.build(args.tag)
    _write(args.output, a.dumps() + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="agx", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help, automaton=True):
        sp = sub.add_parser(name, help=help)
        if automaton:
            sp.add_argument("automaton", help="automaton JSON document, - for stdin")
        sp.add_argument("-o", "--output", default="-", help="where to write the result (default stdout)")
        sp.set_defaults(func=func)
        return sp

    command("validate", cmd_validate, "check tables and report trivial state")
    command("minimize", cmd_minimize, "merge behaviorally equal states")
    command("classify", cmd_classify, "polynomial degree and cycle structure")
    sp = command("nucleus", cmd_nucleus, "certify contraction and compute the nucleus")
    sp.add_argument("--depth-cap", type=int, default=16)
    sp.add_argument("--size-cap", type=int, default=512)
    sp = command("wordproblem", cmd_wordproblem, "decide whether a word is trivial")
    sp.add_argument("--word", required=True, help='e.g. "a,a,-a_1"')
    sp.add_argument("--equal", help="second word to compare with")
    sp = command("order", cmd_order, "smallest k with g^k trivial")
    sp.add_argument("--word", required=True)
    sp.add_argument("--max-order", type=int, default=64)
    sp = command("schreier", cmd_schreier, "level Schreier graph and its metrics")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--dot")
    sp.add_argument("--json")
    for name, func, help in (("ball", cmd_ball, "orbital ball around u(v)^inf"),
                             ("growth", cmd_growth, "growth series of an orbital graph")):
        sp = command(name, func, help)
        sp.add_argument("--pre", default="", help="preperiod digits")
        sp.add_argument("--per", required=True, help="period digits (nonempty)")
        if name == "ball":
            sp.add_argument("--radius", type=int, required=True)
            sp.add_argument("--dot")
            sp.add_argument("--json")
        else:
            sp.add_argument("--rmax", type=int, required=True)
            sp.add_argument("--csv")
            sp.add_argument("--budget", type=int, default=schreier.BALL_BUDGET)
    sp = command("paths", cmd_paths, "count paths avoiding the trivial state")
    sp.add_argument("--length", type=int, default=16)
    sp = command("probe", cmd_probe, "bounded weak-contraction probe")
    sp.add_argument("--lengths", default="2,4,8")
    sp.add_argument("--depth", type=int, default=16)
    sp.add_argument("--samples", type=int, default=32)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv")
    sp = command("sphere", cmd_sphere, "distinct restrictions of short words at a prefix")
    sp.add_argument("--prefix", default="")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--size-cap", type=int, default=4096)
    sp = command("family", cmd_family, "emit a built-in automaton", automaton=False)
    sp.add_argument("tag", help="adding | omega:<word> | hanoi:<k> | nonpoly_b")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except AgxError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        partial = getattr(exc, "partial", None)
        if partial is not None:
            err["partial"] = partial
        print(json.dumps(err), file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
