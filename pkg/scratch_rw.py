import sys
sys.path.insert(0, "src")
from eqpe.signature import Theory, AxiomSet, Equation, FREE
from eqpe.terms import mk_app, mk_var, least_sort
from eqpe.rewrite import compile_theory, normalize, rewrite_step

th = Theory("Parser")
for s in ["Symbol", "NSymbol", "TSymbol", "String", "Production", "Grammar", "Parsing"]:
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
th.add_op("_->_._", ["NSymbol", "TSymbol", "NSymbol"], "Production", ctor=True)
mt = mk_app("mt", [])
SEMI = AxiomSet(assoc=True, comm=True, identity=mt)
th.add_op("_;_", ["Grammar", "Grammar"], "Grammar", SEMI, ctor=True)
th.add_op("_|_|_", ["Symbol", "String", "Grammar"], "Parsing")

c0 = mk_app("0", [])
c1 = mk_app("1", [])
init = mk_app("init", [])
S = mk_app("S", [])

def cat(*xs):
    return mk_app("__", list(xs), CAT)

def prod2(n, t):
    return mk_app("_->_", [n, t])

def prod3(n, t, m):
    return mk_app("_->_._", [n, t, m])

def semi(*xs):
    return mk_app("_;_", list(xs), SEMI)

def cfg(n, l, g):
    return mk_app("_|_|_", [n, l, g])

# grammar (0)*(1)*: init->eps  init->0.init  init->1.S  S->eps  S->1.S
G = semi(prod2(init, eps), prod3(init, c0, init), prod3(init, c1, S),
         prod2(S, eps), prod3(S, c1, S))

N = mk_var("N", "NSymbol")
M = mk_var("M", "NSymbol")
E = mk_var("E", "TSymbol")
L = mk_var("L", "String")
Gv = mk_var("G", "Grammar")

th.add_equation(Equation(cfg(N, eps, semi(prod2(N, eps), Gv)),
                         cfg(eps, eps, semi(prod2(N, eps), Gv)), "P1",
                         variant=True))
th.add_equation(Equation(cfg(N, cat(E, L), semi(prod3(N, E, M), Gv)),
                         cfg(M, L, semi(prod3(N, E, M), Gv)), "P2",
                         variant=True))

ct = compile_theory(th)
print("rules:")
for r in ct.rules:
    print("  ", r)

t = cfg(init, cat(c0, c0, c1, c1, eps), G)
print("subject:", t)
print("least sort:", least_sort(th, t))
cur = t
while True:
    nxt = rewrite_step(cur, ct)
    if nxt is None:
        break
    cur = nxt[0]
    print(" ->", cur, " via", nxt[1], "at", nxt[2])
nf = normalize(t, ct)
print("normalize:", nf, "stats:", ct.stats.snapshot())
assert nf is cfg(eps, eps, G)
bad = cfg(init, cat(c1, c0), G)
print("stuck:", normalize(bad, ct))
print("one-symbol 1:", normalize(cfg(init, c1, G), ct))
print("ok")
