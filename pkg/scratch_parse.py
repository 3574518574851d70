"""Throwaway parser smoke test. Delete before ship."""
import sys

sys.path.insert(0, "src")
from eqpe.parse import parse_module, parse_term, print_module, print_term
import scratch_engine as SE
import scratch_perf as SP


def theories_equal(a, b, tag):
    assert a.sorts.order == b.sorts.order, (tag, a.sorts.order, b.sorts.order)
    assert a.sorts.direct_pairs() == b.sorts.direct_pairs(), tag
    assert list(a.ops) == list(b.ops), (tag, list(a.ops), list(b.ops))
    for name in a.ops:
        da = [(d.arg_sorts, d.result_sort, d.ctor) for d in a.ops[name]]
        db = [(d.arg_sorts, d.result_sort, d.ctor) for d in b.ops[name]]
        assert da == db, (tag, name, da, db)
        assert a.ax(name) == b.ax(name), (tag, name, a.ax(name), b.ax(name))
    assert len(a.equations) == len(b.equations), tag
    for ea, eb in zip(a.equations, b.equations):
        assert ea.lhs is eb.lhs, (tag, ea.lhs, eb.lhs)
        assert ea.rhs is eb.rhs, (tag, ea.rhs, eb.rhs)
        assert ea.variant == eb.variant, tag


def roundtrip(path):
    th = parse_module(open(path).read())
    txt = print_module(th)
    th2 = parse_module(txt)
    txt2 = print_module(th2)
    assert txt == txt2, (path, txt, txt2)
    theories_equal(th, th2, path)
    return th, txt


MODS = "src/eqpe/modules/%s.fmod"

# flip-tree vs programmatic
th, txt = roundtrip(MODS % "flip-tree")
ref = SE.flip_tree_theory()
for ea, eb in zip(th.equations, ref.equations):
    assert ea.lhs is eb.lhs and ea.rhs is eb.rhs, (ea, eb)
print("flip-tree ok")
print(txt)

# parser vs programmatic
th, txt = roundtrip(MODS % "parser")
ref, G, cfg, init = SE.parser_theory()
for ea, eb in zip(th.equations, ref.equations):
    assert ea.lhs is eb.lhs and ea.rhs is eb.rhs, (ea, eb)
gtxt = "init -> eps ; init -> 0 . init ; init -> 1 . S ; S -> eps ; S -> 1 . S"
assert parse_term(th, gtxt) is G
call = parse_term(th, "init | L | G", lets={"G": G})
assert call is cfg(init, SE.mk_var("L", "String"), G)
assert print_term(th, call) == "init | L | (%s)" % print_term(th, G)
assert parse_term(th, print_term(th, call)) is call
print("parser ok")
print(txt)

# graph vs programmatic
th, txt = roundtrip(MODS % "graph")
ref = SP.graph_theory()
theories_equal(th, ref, "graph-eqs")
print("graph ok")

# graph-flip-fix / flip-fix vs programmatic
for path, res in (("graph-flip-fix", "BinGraph?"), ("flip-fix", "BinGraph")):
    th, txt = roundtrip(MODS % path)
    ref = SP.graph_theory()
    SP.fix_extension(ref, fix_result=res)
    for ea, eb in zip(th.equations, ref.equations):
        assert ea.lhs is eb.lhs and ea.rhs is eb.rhs, (path, ea, eb)
    assert [d.result_sort for d in th.ops["fix"]] == [res]
    print(path, "ok")

# xor roundtrip + a couple of terms
th, txt = roundtrip(MODS % "xor")
t = parse_term(th, "s 0 * s 0 * Z")
assert print_term(th, t).count("(s 0)") == 2, print_term(th, t)
assert parse_term(th, print_term(th, t)) is t
print("xor ok")
print(txt)

# error paths
from eqpe.errors import ParseError
for bad in ["fmod X is sort A . op f : A -> B . endfm",
            "fmod X is sort A . eq a = a . endfm",
            "fmod X is sorts A . op f : A -> A endfm"]:
    try:
        parse_module(bad)
    except Exception as ex:
        print("rejected:", type(ex).__name__, ex)
    else:
        raise AssertionError("accepted: " + bad)
print("all parse smokes ok")
