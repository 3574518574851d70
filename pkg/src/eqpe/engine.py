"""Partial evaluation driver for equational programs.

Specialization alternates two phases until the set of specialized calls Q
stabilizes: unfolding builds one folding variant narrowing tree per call,
with an embedding whistle cutting branches that grow an earlier redex, and
abstraction folds the uncovered tree leaves back into Q through
best-matching generalization. Resultant extraction and independent
renaming then turn the final trees into a residual program over
constructors and fresh symbols.

Seeds are kept as written: a reducible call starts its tree with the
rewrite step that normalizes it, so the residual equations keep the
user's original left-hand side shape. Calls added by abstraction are
always normal forms.
"""

from dataclasses import dataclass

from . import solver
from .embedding import embeds_modulo
from .errors import EmptyInput, InputError, NonConvergence, NotClosed
from .generalize import bmt, lgg_modulo
from .narrowing import DEFAULT_MAX_DEPTH, build_folding_tree
from .rewrite import normalize
from .signature import Equation, FREE
from .terms import App, Subst, Term, Var, least_sort, mk_app, mk_var

DEFAULT_MAX_ITER = 50

__all__ = ["SpecializationState", "Resultant", "RenamingMap",
           "closed_modulo", "redexes", "unfold", "abstract", "eqnpe",
           "extract_resultants", "make_renaming", "rename",
           "DEFAULT_MAX_ITER"]


def _emit(trace, **event):
    if trace is not None:
        trace(event)


def redexes(t: Term, ct):
    """Maximal defined-rooted subterms of t, outermost first."""
    out = []

    def walk(s):
        if isinstance(s, Var):
            return
        if ct.is_defined(s):
            out.append(s)
            return
        for a in s.elems():
            walk(a)

    walk(t)
    return out


def _has_defined(t: Term, ct) -> bool:
    if isinstance(t, Var):
        return False
    return ct.is_defined(t) or any(_has_defined(s, ct) for s in t.elems())


def closed_modulo(Q, t: Term, ct) -> bool:
    """Is every function call inside t covered by the call set Q?

    Variables are closed, a constructor context is closed when its
    arguments are, and a defined-rooted term must match some q in Q
    with every matcher binding recursively closed (alternative matchers
    are tried before giving up)."""
    if isinstance(t, Var):
        return True
    if not ct.is_defined(t):
        return all(closed_modulo(Q, s, ct) for s in t.elems())
    th = ct.theory
    for q in Q:
        for theta in solver.match_modulo(q, t, th):
            if all(closed_modulo(Q, b, ct) for _, b in theta.items()):
                return True
    return False


# ---- unfolding ---------------------------------------------------------

def _whistle(ct, trace=None):
    """Stop predicate: some redex of an ancestor embeds a same-rooted
    redex of the candidate node."""
    th = ct.theory

    def stop(ancestors, node):
        cand = redexes(node.term, ct)
        if not cand:
            return False
        for anc in ancestors:
            for r0 in redexes(anc.term, ct):
                for r1 in cand:
                    if r0.op == r1.op and embeds_modulo(r0, r1, th):
                        _emit(trace, event="whistle",
                              ancestor=str(r0), candidate=str(r1))
                        return True
        return False

    return stop


def unfold(Q, ct, max_depth=DEFAULT_MAX_DEPTH, trace=None):
    """One folding variant narrowing tree per call in Q."""
    stop = _whistle(ct, trace)
    trees = {}
    for q in Q:
        tree = build_folding_tree(q, ct, stop=stop, max_depth=max_depth)
        trees[q] = tree
        _emit(trace, event="unfold", goal=str(q), nodes=len(tree.nodes),
              leaves=[str(n.term) for n in tree.leaves()],
              folded=len(tree.folded_edges),
              depth_hits=len(tree.depth_hits))
    return trees


# ---- abstraction -------------------------------------------------------

def abstract(Q, T, ct, trace=None):
    """Fold the terms of T into the call set Q, element-wise."""
    out = list(Q)
    for t in T:
        out = _abs1(out, t, ct, trace)
    return out


def _abs1(Q, t, ct, trace):
    th = ct.theory
    if isinstance(t, Var):
        return Q
    if not ct.is_defined(t):
        for s in t.elems():
            Q = _abs1(Q, s, ct, trace)
        return Q
    comparable = [q for q in Q
                  if isinstance(q, App) and q.op == t.op
                  and embeds_modulo(q, t, th)]
    if not comparable:
        _emit(trace, event="abstract-add", term=str(t))
        return Q + [t]
    if closed_modulo(Q, t, ct):
        return Q
    best = bmt(comparable, t, th)
    rest = [q for q in Q if not any(q is b for b in best)]
    repl = []
    for q in best:
        for g in lgg_modulo(q, t, th):
            for piece in [g.term] + [b for _, b in g.left.items()] \
                    + [b for _, b in g.right.items()]:
                repl.append(normalize(piece, ct))
    _emit(trace, event="abstract-generalize", term=str(t),
          dropped=[str(b) for b in best], pieces=[str(w) for w in repl])
    for w in repl:
        rest = _abs1(rest, w, ct, trace)
    return rest


# ---- the fixpoint ------------------------------------------------------

@dataclass
class SpecializationState:
    ct: object
    Q: list            # specialized calls, in discovery order
    trees: dict        # call -> NarrowingTree
    iterations: int


def eqnpe(ct, seeds, max_iter=DEFAULT_MAX_ITER,
          max_depth=DEFAULT_MAX_DEPTH, trace=None) -> SpecializationState:
    """Run the specialization fixpoint for the given seed calls."""
    th = ct.theory
    if not seeds:
        raise EmptyInput("no calls to specialize")
    Q = []
    for s in seeds:
        if isinstance(s, Var):
            raise InputError("cannot specialize a variable: %s" % (s,))
        if not _has_defined(s, ct):
            raise InputError(
                "call %s is a constructor term; nothing to specialize" % (s,))
        Q = _abs1(Q, s, ct, trace)
    _emit(trace, event="seeds", Q=[str(q) for q in Q])
    for it in range(1, max_iter + 1):
        trees = unfold(Q, ct, max_depth, trace)
        T = _uncovered_leaves(Q, trees, th)
        Qn = abstract(Q, T, ct, trace)
        _emit(trace, event="iteration", n=it, Q=[str(q) for q in Qn])
        if _same_calls(Q, Qn, th):
            _emit(trace, event="converged", iterations=it)
            return SpecializationState(ct, Q, trees, it)
        Q = Qn
    raise NonConvergence(
        "specialization did not stabilize after %d iterations" % max_iter)


def _uncovered_leaves(Q, trees, th):
    """Leaf terms to abstract: folded nodes are covered by construction,
    and leaves that merely rename a specialized call add nothing."""
    out = []
    for q in Q:
        for n in trees[q].leaves():
            if any(solver.eq_modulo_renaming(n.term, q2, th) is not None
                   for q2 in Q):
                continue
            out.append(n.term)
    return out


def _same_calls(A, B, th):
    # neither set holds two renaming-equal calls, so mutual coverage at
    # equal size is a bijection
    if len(A) != len(B):
        return False
    return all(any(solver.eq_modulo_renaming(a, b, th) is not None
                   for b in B) for a in A)


# ---- resultants --------------------------------------------------------

@dataclass(frozen=True)
class Resultant:
    lhs: Term
    rhs: Term
    origin: tuple = None   # (specialized call, leaf node)


def extract_resultants(state: SpecializationState):
    """One equation lhs = rhs per root-to-leaf derivation: lhs is the call
    instantiated by the accumulated substitution, rhs the leaf. Trivial
    and duplicate (modulo renaming) resultants are dropped."""
    th = state.ct.theory
    out = []
    seen = []
    for q in state.Q:
        for node in state.trees[q].leaves():
            lhs = node.acc.apply(q)
            rhs = node.term
            if lhs is rhs:
                continue
            pair = mk_app("\x00pair", [lhs, rhs], FREE)
            if any(solver.eq_modulo_renaming(pair, p, th) is not None
                   for p in seen):
                continue
            seen.append(pair)
            assert rhs.vset <= lhs.vset
            assert closed_modulo(state.Q, rhs, state.ct)
            out.append(Resultant(lhs, rhs, (q, node)))
    return out


# ---- independent renaming ----------------------------------------------

@dataclass
class RenamingMap:
    entries: list   # (call pattern, fresh op name, distinct pattern vars)

    def as_json(self, th):
        """Entries with reparseable patterns: pattern variables are
        renamed X1, X2, ... and listed with their sorts."""
        from .parse import print_term
        out = []
        for p, name, vs in self.entries:
            fresh = [mk_var("X%d" % (i + 1), v.sort)
                     for i, v in enumerate(vs)]
            ren = Subst(dict(zip(vs, fresh)))
            out.append({"op": name,
                        "pattern": print_term(th, ren.apply(p)),
                        "vars": [[v.name, v.sort] for v in fresh]})
        return out


def _pattern_vars(t: Term):
    """Distinct variables in first-occurrence order over the canonical
    argument order."""
    out = []

    def walk(s):
        if isinstance(s, Var):
            if s not in out:
                out.append(s)
            return
        for a in s.elems():
            walk(a)

    walk(t)
    return out


def make_renaming(Q, th, names=None) -> RenamingMap:
    """Independent renaming: a fresh operator per specialized call, with
    the call's distinct variables as arguments. names overrides the
    generated operator name per call (keyed by the call's printed form)."""
    entries = []
    used = set(th.ops)
    counters = {}
    for q in Q:
        vs = _pattern_vars(q)
        name = (names or {}).get(str(q))
        if name is None:
            base = "".join(ch for ch in q.op if ch.isalnum()) or "f"
            n = counters.get(base, 0)
            while True:
                name = "%s%d" % (base, n)
                n += 1
                if name not in used:
                    break
            counters[base] = n
        if name in used:
            raise InputError("renamed operator %s already exists" % name)
        used.add(name)
        entries.append((q, name, vs))
    return RenamingMap(entries)


def rename(resultants, state: SpecializationState, rmap=None):
    """Rewrite the resultants over fresh operators.

    Every defined-rooted subterm of a rhs is matched against the
    specialized calls and replaced by the corresponding fresh call with
    recursively renamed bindings; constructor contexts are kept. The
    returned theory holds the original constructors plus the fresh
    operators and the renamed equations."""
    ct = state.ct
    th = ct.theory
    if rmap is None:
        rmap = make_renaming(state.Q, th)
    spec = th.copy_signature(th.name + "-SPECIALIZED")
    for op in sorted(ct.defined):
        spec.ops.pop(op, None)
        spec.axioms.pop(op, None)
    for pattern, name, vs in rmap.entries:
        spec.add_op(name, [v.sort for v in vs], least_sort(th, pattern))
    by_call = {id(p): e for e in rmap.entries for p in [e[0]]}
    for r in resultants:
        entry = by_call[id(r.origin[0])]
        lhs = _rename_call(r.lhs, entry, rmap, ct)
        rhs = _rename_term(r.rhs, rmap, ct)
        spec.add_equation(Equation(lhs, rhs))
    return rmap, spec


def _rename_call(t, entry, rmap, ct):
    pattern, name, vs = entry
    for theta in solver.match_modulo(pattern, t, ct.theory):
        try:
            args = [_rename_term(theta.apply(v), rmap, ct) for v in vs]
        except NotClosed:
            continue
        return mk_app(name, args, FREE)
    raise NotClosed(
        "%s does not match its own call pattern %s" % (t, pattern))


def _rename_term(t, rmap, ct):
    if isinstance(t, Var):
        return t
    if not ct.is_defined(t):
        if t.is_ac:
            args = []
            for e, c in t.pairs:
                args.extend([_rename_term(e, rmap, ct)] * c)
        else:
            args = [_rename_term(a, rmap, ct) for a in t.args]
        return mk_app(t.op, args, t.ax)
    for pattern, name, vs in rmap.entries:
        for theta in solver.match_modulo(pattern, t, ct.theory):
            try:
                args = [_rename_term(theta.apply(v), rmap, ct) for v in vs]
            except NotClosed:
                continue
            return mk_app(name, args, FREE)
    raise NotClosed(
        "call %s is not covered by the specialized calls" % (t,))


def renaming_from_json(th, data) -> RenamingMap:
    """Inverse of RenamingMap.as_json over the original theory."""
    from .parse import parse_term
    entries = []
    for d in data:
        lets = {n: mk_var(n, s) for n, s in d["vars"]}
        p = parse_term(th, d["pattern"], lets)
        entries.append((p, d["op"], [lets[n] for n, _ in d["vars"]]))
    return RenamingMap(entries)


def rename_term(t, rmap, ct):
    """Translate a term over the original symbols into the specialized
    ones; NotClosed if some call is not an instance of a specialized
    call pattern."""
    return _rename_term(t, rmap, ct)


def unrename_term(t, rmap):
    """Translate a term over the specialized symbols back: each fresh
    operator unfolds to its call pattern with the arguments substituted
    for the pattern variables."""
    table = {name: (p, vs) for p, name, vs in rmap.entries}

    def walk(s):
        if isinstance(s, Var):
            return s
        if s.op in table:
            p, vs = table[s.op]
            theta = Subst(dict(zip(vs, [walk(a) for a in s.args])))
            return theta.apply(p)
        if s.is_ac:
            args = []
            for e, c in s.pairs:
                args.extend([walk(e)] * c)
        else:
            args = [walk(a) for a in s.args]
        return mk_app(s.op, args, s.ax)

    return walk(t)
