"""Command line front end.

    eqpe specialize MODULE --call TEXT    specialize a program for a call
    eqpe bench ORIG SPEC --call TEMPLATE  original vs specialized timings
    eqpe normalize MODULE TERM            rewrite a term to normal form
    eqpe narrow MODULE TERM               show the folding narrowing tree
    eqpe variants MODULE TERM             list variants per tree level

Exit codes: 0 success; 1 bad input (files, parsing, sorts, types);
2 guard failures (no convergence, depth or fuel caps).
"""

import argparse
import json
import sys

from .bench import format_report, run_bench
from .engine import (DEFAULT_MAX_ITER, _pattern_vars, eqnpe,
                     extract_resultants, rename, renaming_from_json,
                     unfold)
from .errors import EqpeError, GuardError
from .narrowing import DEFAULT_MAX_DEPTH, build_folding_tree, to_dot
from .parse import parse_module, parse_term, print_module, print_term
from .rewrite import compile_theory, normalize
from .signature import Equation
from .terms import Subst, mk_var

__all__ = ["main"]


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_module(fh.read())


def _lets(th, pairs):
    """NAME=TERM bindings, parsed left to right so later terms may use
    earlier names."""
    out = {}
    for item in pairs:
        name, sep, text = item.partition("=")
        if not sep or not name.strip():
            raise EqpeError("--let needs NAME=TERM, got %r" % item)
        out[name.strip()] = parse_term(th, text, out)
    return out


def _declare_vars(th):
    """Give every equation declared, readable variables so the printed
    module parses back."""
    used = set(th.ops) | set(th.var_sorts)
    n = 0
    eqs = []
    for e in th.equations:
        ren = {}
        for v in _pattern_vars(e.lhs) + _pattern_vars(e.rhs):
            if v in ren:
                continue
            n += 1
            name = "V%d" % n
            while name in used:
                n += 1
                name = "V%d" % n
            used.add(name)
            th.add_var(name, v.sort)
            ren[v] = mk_var(name, v.sort)
        s = Subst(ren)
        eqs.append(Equation(s.apply(e.lhs), s.apply(e.rhs),
                            e.label, e.variant))
    th.equations[:] = eqs


def _default_out(path):
    if path.endswith(".fmod"):
        return path[:-len(".fmod")] + ".spec.fmod"
    return path + ".spec.fmod"


def _write_dot(path, trees, printer):
    parts = [to_dot(t, "tree%d" % i, printer)
             for i, t in enumerate(trees)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_specialize(args):
    th = _load(args.module)
    ct = compile_theory(th)
    call = parse_term(th, args.call, _lets(th, args.let))
    trace_fh = None
    trace = None
    if args.trace:
        trace_fh = open(args.trace, "w", encoding="utf-8")
        trace = lambda ev: trace_fh.write(json.dumps(ev) + "\n")
    try:
        state = eqnpe(ct, [call], max_iter=args.max_iter,
                      max_depth=args.max_depth, trace=trace)
    finally:
        if trace_fh:
            trace_fh.close()
    resultants = extract_resultants(state)
    out_path = args.out or _default_out(args.module)
    if args.no_rename:
        out_th = th.copy_signature(th.name + "-SPECIALIZED")
        for r in resultants:
            out_th.add_equation(Equation(r.lhs, r.rhs))
        rmap = None
    else:
        rmap, out_th = rename(resultants, state)
    _declare_vars(out_th)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(print_module(out_th))
    print("%s: %d specialized call(s), %d equation(s), %d iteration(s)"
          % (th.name, len(state.Q), len(out_th.equations),
             state.iterations))
    if rmap is not None:
        map_path = out_path + ".map.json"
        with open(map_path, "w", encoding="utf-8") as fh:
            json.dump({"module": th.name, "calls": rmap.as_json(th)},
                      fh, indent=2)
            fh.write("\n")
        for entry in rmap.as_json(th):
            show = entry["op"]
            if entry["vars"]:
                show += "(%s)" % ", ".join(n for n, _ in entry["vars"])
            print("  %s  =>  %s" % (entry["pattern"], show))
        print("wrote %s and %s" % (out_path, map_path))
    else:
        print("wrote %s" % out_path)
    if args.dot:
        _write_dot(args.dot, [state.trees[q] for q in state.Q],
                   lambda t: print_term(th, t))
        print("wrote %s" % args.dot)
    return 0


def cmd_bench(args):
    orig_th = _load(args.original)
    spec_th = _load(args.specialized)
    map_path = args.map or args.specialized + ".map.json"
    with open(map_path, encoding="utf-8") as fh:
        rmap = renaming_from_json(orig_th, json.load(fh)["calls"])
    report = run_bench(orig_th, spec_th, rmap, args.call, args.size,
                       seed=args.seed, runs=args.runs,
                       lets=_lets(orig_th, args.let), kind=args.gen)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(format_report(report))
    return 0


def cmd_normalize(args):
    th = _load(args.module)
    ct = compile_theory(th)
    t = parse_term(th, args.term, _lets(th, args.let))
    nf = normalize(t, ct)
    print(print_term(th, nf))
    print("steps=%d match_attempts=%d"
          % (ct.stats.steps, ct.stats.match_attempts))
    return 0


def cmd_narrow(args):
    th = _load(args.module)
    ct = compile_theory(th)
    t = parse_term(th, args.term, _lets(th, args.let))
    tree = unfold([t], ct, max_depth=args.max_depth)[t]
    print("%d node(s), %d leaf/leaves, %d folded edge(s)"
          % (len(tree.nodes), len(tree.leaves()),
             len(tree.folded_edges)))
    for acc, leaf in tree.derivations():
        print("  %s  if  %s" % (print_term(th, leaf), _show_subst(th, acc)))
    if args.dot:
        _write_dot(args.dot, [tree], lambda x: print_term(th, x))
        print("wrote %s" % args.dot)
    return 0


def cmd_variants(args):
    th = _load(args.module)
    ct = compile_theory(th)
    t = parse_term(th, args.term, _lets(th, args.let))
    tree = build_folding_tree(t, ct, stop=None, max_depth=args.max_depth)
    depth = 0
    while True:
        level = [n for n in tree.nodes if n.depth == depth]
        if not level:
            break
        print("level %d:" % depth)
        for n in level:
            note = " (folded)" if n.folded_to is not None else ""
            print("  %s  if  %s%s"
                  % (print_term(th, n.term), _show_subst(th, n.acc), note))
        depth += 1
    return 0


def _show_subst(th, s):
    if not s:
        return "id"
    return "{%s}" % ", ".join("%s -> %s" % (v.name, print_term(th, t))
                              for v, t in s.items())


def _build_argparser():
    p = argparse.ArgumentParser(
        prog="eqpe",
        description="Partial evaluation of equational programs "
                    "modulo axioms.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--let", action="append", default=[],
                        metavar="NAME=TERM",
                        help="bind NAME to a term for use in other "
                             "arguments; repeatable")

    sp = sub.add_parser("specialize",
                        help="partially evaluate a module for a call")
    sp.add_argument("module")
    sp.add_argument("--call", required=True,
                    help="the call to specialize the program for")
    common(sp)
    sp.add_argument("-o", "--out",
                    help="output module path (default <input>.spec.fmod)")
    sp.add_argument("--no-rename", action="store_true",
                    help="keep the original symbols in the output")
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH,
                    help="narrowing tree depth cap per call")
    sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER,
                    help="specialization iteration cap")
    sp.add_argument("--trace", metavar="PATH",
                    help="write a JSON-lines event trace")
    sp.add_argument("--dot", metavar="PATH",
                    help="write the final narrowing trees as DOT")
    sp.set_defaults(func=cmd_specialize)

    sp = sub.add_parser("bench",
                        help="compare a program with its specialization")
    sp.add_argument("original")
    sp.add_argument("specialized")
    sp.add_argument("--call", required=True,
                    help="call template whose hole _ takes the input")
    sp.add_argument("--size", type=int, required=True,
                    help="generated input size (number of elements)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--runs", type=int, default=10,
                    help="runs to average (default 10)")
    sp.add_argument("--map", metavar="PATH",
                    help="renaming map (default <specialized>.map.json)")
    sp.add_argument("--gen", choices=("auto", "string", "graph"),
                    default="auto", help="input generator")
    sp.add_argument("--json", action="store_true",
                    help="print the report as JSON")
    common(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("normalize", help="rewrite a term to normal form")
    sp.add_argument("module")
    sp.add_argument("term")
    common(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("narrow",
                        help="build the folding narrowing tree of a term")
    sp.add_argument("module")
    sp.add_argument("term")
    common(sp)
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    sp.add_argument("--dot", metavar="PATH")
    sp.set_defaults(func=cmd_narrow)

    sp = sub.add_parser("variants",
                        help="list narrowing variants level by level")
    sp.add_argument("module")
    sp.add_argument("term")
    common(sp)
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    sp.set_defaults(func=cmd_variants)
    return p


def main(argv=None):
    args = _build_argparser().parse_args(argv)
    try:
        return args.func(args)
    except GuardError as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 2
    except (EqpeError, OSError) as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
