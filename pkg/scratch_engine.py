import sys
import time

sys.path.insert(0, "src")
from eqpe.signature import Theory, AxiomSet, Equation, FREE
from eqpe.terms import mk_app, mk_var
from eqpe.rewrite import compile_theory
from eqpe.engine import eqnpe, extract_resultants, rename
import scratch_perf


def flip_tree_theory():
    th = Theory("FLIP-TREE")
    th.add_sort("Nat")
    th.add_sort("NatTree")
    th.add_subsort("Nat", "NatTree")
    th.add_op("0", [], "Nat", ctor=True)
    th.add_op("s_", ["Nat"], "Nat", ctor=True)
    th.add_op("_{_}_", ["NatTree", "Nat", "NatTree"], "NatTree", ctor=True)
    th.add_op("flip", ["NatTree"], "NatTree")
    N = mk_var("N", "Nat")
    L = mk_var("L", "NatTree")
    R = mk_var("R", "NatTree")
    def flip(t):
        return mk_app("flip", [t])
    def node(l, n, r):
        return mk_app("_{_}_", [l, n, r])
    th.add_equation(Equation(flip(N), N, "F1", variant=True))
    th.add_equation(Equation(flip(node(L, N, R)),
                             node(flip(R), N, flip(L)), "F2", variant=True))
    return th


def parser_theory():
    th = Theory("PARSER")
    for s in ["Symbol", "NSymbol", "TSymbol", "String", "Production",
              "Grammar", "Parsing"]:
        th.add_sort(s)
    th.add_subsort("Production", "Grammar")
    th.add_subsort("TSymbol", "String")
    th.add_subsort("TSymbol", "Symbol")
    th.add_subsort("NSymbol", "Symbol")
    for c in ["0", "1", "eps"]:
        th.add_op(c, [], "TSymbol", ctor=True)
    for c in ["init", "S"]:
        th.add_op(c, [], "NSymbol", ctor=True)
    th.add_op("mt", [], "Grammar", ctor=True)
    eps = mk_app("eps", [])
    CAT = AxiomSet(assoc=True, identity=eps, id_side="right")
    th.add_op("__", ["TSymbol", "String"], "String", CAT, ctor=True)
    th.add_op("_->_", ["NSymbol", "TSymbol"], "Production", ctor=True)
    th.add_op("_->_._", ["NSymbol", "TSymbol", "NSymbol"], "Production",
              ctor=True)
    mt = mk_app("mt", [])
    SEMI = AxiomSet(assoc=True, comm=True, identity=mt)
    th.add_op("_;_", ["Grammar", "Grammar"], "Grammar", SEMI, ctor=True)
    th.add_op("_|_|_", ["Symbol", "String", "Grammar"], "Parsing")
    c0, c1 = mk_app("0", []), mk_app("1", [])
    init, S = mk_app("init", []), mk_app("S", [])
    cat = lambda *xs: mk_app("__", list(xs), CAT)
    p2 = lambda n, t: mk_app("_->_", [n, t])
    p3 = lambda n, t, m: mk_app("_->_._", [n, t, m])
    semi = lambda *xs: mk_app("_;_", list(xs), SEMI)
    cfg = lambda n, l, g: mk_app("_|_|_", [n, l, g])
    G = semi(p2(init, eps), p3(init, c0, init), p3(init, c1, S),
             p2(S, eps), p3(S, c1, S))
    N = mk_var("N", "NSymbol")
    M = mk_var("M", "NSymbol")
    E = mk_var("E", "TSymbol")
    L = mk_var("L", "String")
    Gv = mk_var("G", "Grammar")
    th.add_equation(Equation(cfg(N, eps, semi(p2(N, eps), Gv)),
                             cfg(eps, eps, semi(p2(N, eps), Gv)), "P1",
                             variant=True))
    th.add_equation(Equation(cfg(N, cat(E, L), semi(p3(N, E, M), Gv)),
                             cfg(M, L, semi(p3(N, E, M), Gv)), "P2",
                             variant=True))
    return th, G, cfg, init


def show(tag, ct, seeds):
    t0 = time.time()
    state = eqnpe(ct, seeds)
    rs = extract_resultants(state)
    rmap, spec = rename(rs, state)
    dt = time.time() - t0
    print("== %s  (%.2fs, %d iterations)" % (tag, dt, state.iterations))
    print("Q:")
    for q in state.Q:
        print("   ", q)
    print("resultants:")
    for r in rs:
        print("   ", r.lhs, "=", r.rhs)
    print("renamed:")
    for e in spec.equations:
        print("   ", e.lhs, "=", e.rhs)
    print()
    return state, rs, rmap, spec


# 1. double flip on free binary trees
th = flip_tree_theory()
ct = compile_theory(th)
T = mk_var("T", "NatTree")
flip = lambda t: mk_app("flip", [t])
show("FLIP-TREE flip(flip(T))", ct, [flip(flip(T))])

# 2. parser
th, G, cfg, init = parser_theory()
ct = compile_theory(th)
L = mk_var("L", "String")
show("PARSER init | L | G", ct, [cfg(init, L, G)])

# 3. mutated graph flip-fix
th = scratch_perf.graph_theory()
scratch_perf.fix_extension(th, fix_result="BinGraph")
ct = compile_theory(th)
BG = mk_var("BG", "BinGraph")
two = mk_app("2", [])
e = mk_app("e", [])
seed = flip(mk_app("fix", [two, e, flip(BG)]))
show("GRAPH flip(fix(2,e,flip(BG)))", ct, [seed])
