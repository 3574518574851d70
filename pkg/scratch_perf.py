"""Throwaway graph-theory harness: goldens + AC perf probes. Delete before ship."""
import time

from eqpe.signature import Theory, AxiomSet, Equation, FREE
from eqpe.terms import mk_app, mk_var, least_sort
from eqpe.rewrite import compile_theory, normalize


MT = None
SEMI = None


def graph_theory():
    global MT, SEMI
    th = Theory("GRAPH")
    for s in ("BinGraph", "Node", "Id", "Ref"):
        th.add_sort(s)
    th.add_subsort("Node", "BinGraph")
    th.add_subsort("Id", "Ref")
    th.add_op("mt", [], "BinGraph", ctor=True)
    MT = mk_app("mt", [], FREE)
    SEMI = AxiomSet(assoc=True, comm=True, identity=MT)
    th.add_op("{___}", ["Ref", "Id", "Ref"], "Node", ctor=True)
    th.add_op("_;_", ["BinGraph", "BinGraph"], "BinGraph", SEMI, ctor=True)
    for c in "01234":
        th.add_op(c, [], "Id", ctor=True)
    th.add_op("#", [], "Ref", ctor=True)
    th.add_op("flip", ["BinGraph"], "BinGraph")
    R1 = mk_var("R1", "Ref")
    I = mk_var("I", "Id")
    R2 = mk_var("R2", "Ref")
    BG = mk_var("BG", "BinGraph")
    node = mk_app("{___}", [R1, I, R2], FREE)
    fnode = mk_app("{___}", [R2, I, R1], FREE)
    th.add_equation(Equation(mk_app("flip", [MT], FREE), MT, "E1", True))
    th.add_equation(Equation(
        mk_app("flip", [mk_app("_;_", [node, BG], SEMI)], FREE),
        mk_app("_;_", [fnode, mk_app("flip", [BG], FREE)], SEMI),
        "E2", True))
    return th


def fix_extension(th, fix_result="BinGraph?"):
    for s in ("BinGraph?", "Id?", "Node?", "Ref?"):
        th.add_sort(s)
    th.add_subsort("BinGraph", "BinGraph?")
    th.add_subsort("Node?", "BinGraph?")
    th.add_subsort("Node", "Node?")
    th.add_subsort("Id", "Id?")
    th.add_subsort("Ref", "Ref?")
    th.add_subsort("Id?", "Ref?")
    th.add_op("e", [], "Id?", ctor=True)
    th.add_op("{___}", ["Ref?", "Id?", "Ref?"], "Node?", ctor=True)
    th.add_op("_;_", ["BinGraph?", "BinGraph?"], "BinGraph?", SEMI, ctor=True)
    th.add_op("fix", ["Id", "Id?", "BinGraph?"], fix_result)
    I = mk_var("I", "Id")
    I1 = mk_var("I1", "Id")
    Iq = mk_var("I?", "Id?")
    R1q = mk_var("R1?", "Ref?")
    R2q = mk_var("R2?", "Ref?")
    BG = mk_var("BG", "BinGraph")
    BGq = mk_var("BG?", "BinGraph?")

    def fx(g):
        return mk_app("fix", [I, Iq, g], FREE)

    def nd(a, b, c):
        return mk_app("{___}", [a, b, c], FREE)

    def cat(n, g):
        return mk_app("_;_", [n, g], SEMI)

    th.add_equation(Equation(fx(cat(nd(R1q, Iq, R2q), BGq)),
                             fx(cat(nd(R1q, I, R2q), BGq)), "E3", True))
    th.add_equation(Equation(fx(cat(nd(Iq, I1, R2q), BGq)),
                             fx(cat(nd(I, I1, R2q), BGq)), "E4", True))
    th.add_equation(Equation(fx(cat(nd(R1q, I1, Iq), BGq)),
                             fx(cat(nd(R1q, I1, I), BGq)), "E5", True))
    th.add_equation(Equation(fx(BG), BG, "E6", True))
    return th


def nd(a, b, c):
    return mk_app("{___}", [a, b, c], FREE)


def soup(nodes):
    if len(nodes) == 1:
        return nodes[0]
    return mk_app("_;_", nodes, SEMI)


def c(name):
    return mk_app(name, [], FREE)


def goldens():
    th = graph_theory()
    ct = compile_theory(th)
    h = c("#")
    i0, i1, i2, i3, i4 = (c(x) for x in "01234")
    bg = soup([nd(i1, i0, i2), nd(h, i1, h), nd(i3, i2, i4),
               nd(h, i3, i4), nd(h, i4, i0)])
    want = soup([nd(i2, i0, i1), nd(h, i1, h), nd(i4, i2, i3),
                 nd(i4, i3, h), nd(i0, i4, h)])
    got = normalize(mk_app("flip", [bg], FREE), ct)
    assert got is want, (got, want)
    assert least_sort(th, got) == "BinGraph"
    # double flip returns the original graph
    got2 = normalize(mk_app("flip", [mk_app("flip", [bg], FREE)], FREE), ct)
    assert got2 is bg, got2
    # flip of a single node and of mt
    assert normalize(mk_app("flip", [nd(i1, i0, h)], FREE), ct) is nd(h, i0, i1)
    assert normalize(mk_app("flip", [MT], FREE), ct) is MT
    print("flip goldens ok  steps=%d attempts=%d"
          % (ct.stats.steps, ct.stats.match_attempts))

    thf = fix_extension(graph_theory())
    ctf = compile_theory(thf)
    e = c("e")
    t_ex = soup([nd(h, i1, e), nd(e, i0, h), nd(e, e, i3), nd(e, i3, h)])
    want_fix = soup([nd(h, i1, i2), nd(i2, i0, h), nd(i2, i2, i3),
                     nd(i2, i3, h)])
    got_fix = normalize(mk_app("fix", [i2, e, t_ex], FREE), ctf)
    assert got_fix is want_fix, (got_fix, want_fix)
    assert least_sort(thf, got_fix) == "BinGraph"
    # fix on an already-proper graph unwraps in one E6 step
    assert normalize(mk_app("fix", [i2, e, bg], FREE), ctf) is bg
    print("fix goldens ok   steps=%d attempts=%d"
          % (ctf.stats.steps, ctf.stats.match_attempts))

    # mutated variant: fix result sort BinGraph, so flip(fix(...)) is typable
    thm = fix_extension(graph_theory(), fix_result="BinGraph")
    ctm = compile_theory(thm)
    seed = mk_app("flip", [mk_app(
        "fix", [i2, e, mk_app("flip", [bg], FREE)], FREE)], FREE)
    assert least_sort(thm, seed) == "BinGraph"
    assert normalize(seed, ctm) is bg
    print("mutated flip-fix golden ok  steps=%d" % ctm.stats.steps)


def bench_double_flip(sizes):
    th = graph_theory()
    ct = compile_theory(th)
    n = nd(c("#"), c("0"), c("#"))
    for k in sizes:
        g = soup([n] * k)
        for run in (1, 2):
            t0 = time.perf_counter()
            got = normalize(mk_app("flip", [mk_app("flip", [g], FREE)],
                                   FREE), ct)
            dt = time.perf_counter() - t0
            assert got is g
            print("dflip  k=%-7d run%d  %7.3fs  steps=%d attempts=%d"
                  % (k, run, dt, ct.stats.steps, ct.stats.match_attempts))


def bench_flip_fix(sizes):
    thm = fix_extension(graph_theory(), fix_result="BinGraph")
    ctm = compile_theory(thm)
    n = nd(c("#"), c("0"), c("#"))
    i2, e = c("2"), c("e")
    for k in sizes:
        g = soup([n] * k)
        for run in (1, 2):
            t0 = time.perf_counter()
            got = normalize(mk_app("flip", [mk_app(
                "fix", [i2, e, mk_app("flip", [g], FREE)], FREE)], FREE), ctm)
            dt = time.perf_counter() - t0
            assert got is g
            print("ffix   k=%-7d run%d  %7.3fs  steps=%d attempts=%d"
                  % (k, run, dt, ctm.stats.steps, ctm.stats.match_attempts))


def bench_fix_broken(k):
    """fix over a soup of k broken nodes: exercises E4/E5 count splicing."""
    thf = fix_extension(graph_theory())
    ctf = compile_theory(thf)
    e, i0, i2 = c("e"), c("0"), c("2")
    g = soup([nd(e, i0, e)] * k)
    want = soup([nd(i2, i0, i2)] * k)
    t0 = time.perf_counter()
    got = normalize(mk_app("fix", [i2, e, g], FREE), ctf)
    dt = time.perf_counter() - t0
    assert got is want
    print("fixbrk k=%-7d       %7.3fs  steps=%d attempts=%d"
          % (k, dt, ctf.stats.steps, ctf.stats.match_attempts))


if __name__ == "__main__":
    goldens()
    bench_double_flip([1000, 10000, 100000])
    bench_flip_fix([1000, 10000, 100000])
    bench_fix_broken(1000)
    bench_fix_broken(10000)
    print("ok")
